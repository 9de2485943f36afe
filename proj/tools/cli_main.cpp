#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "bracketlab/runner.hpp"

namespace {

void add_common(CLI::App* sub, bracketlab::ExperimentConfig& cfg,
                std::string& config_path) {
  sub->add_option("--entry", cfg.entry, "gallery entry name, or all");
  sub->add_option("--n", cfg.n_set, "family indices")->delimiter(',');
  sub->add_option("--s", cfg.s, "flow time");
  sub->add_option("--N", cfg.N, "series truncation order");
  sub->add_option("--map", cfg.map, "map name: identity, shear, double_scale");
  sub->add_option("--case", cfg.case_name,
                  "commutator case: translation, disjoint, generic");
  sub->add_option("--family", cfg.family,
                  "pairing family: conforming or remark2");
  sub->add_flag("--violate-c2", cfg.violate_c2,
                "use the family that breaks the convergence hypothesis");
  sub->add_option("--slack", cfg.slack, "bound slack factor");
  sub->add_option("--atol", cfg.atol, "absolute comparison tolerance");
  sub->add_option("--flow-tol", cfg.flow_tol, "integrator error target");
  sub->add_option("--seed", cfg.seed, "sampling seed");
  sub->add_option("--out", cfg.out_dir,
                  "output directory (default: BRACKETLAB_OUT or cwd)");
  sub->add_option("--chi-radius", cfg.chi_radius, "cutoff profile radius");
  sub->add_flag("--check", cfg.golden_check,
                "golden: recompute and compare, never write");
  sub->add_flag("--write", cfg.golden_write, "golden: write the table");
  sub->add_flag("--force", cfg.golden_force,
                "golden: overwrite even on disagreement");
  sub->add_option("--golden-path", cfg.golden_path, "golden file location");
  sub->add_option("--config", config_path,
                  "JSON config file; its fields override flags");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for brackets, flows and defect families"};
  app.require_subcommand(1);

  bracketlab::ExperimentConfig cfg;
  std::string config_path;
  std::string run_target;

  const struct {
    const char* name;
    const char* desc;
  } kSubs[] = {
      {"bracket", "sample a gallery pair bracket and check its profile"},
      {"flow", "integrate gallery flows and report energy drift"},
      {"defect", "defect norms per index plus the limit classification"},
      {"lemma3", "flow pullback versus truncated series with error bounds"},
      {"gallery", "full convergence sweep for one entry or all"},
      {"prop6", "distributional pairing convergence experiment"},
      {"prop7", "double-index pairing experiment with a c(1/p+1/q) fit"},
      {"sympcheck", "canonical-bracket residuals of an explicit map"},
      {"commutator", "commutator flow versus its generator-driven flow"},
      {"golden", "recompute, compare or rewrite the frozen constants"},
  };
  for (const auto& s : kSubs) {
    add_common(app.add_subcommand(s.name, s.desc), cfg, config_path);
  }
  auto* run = app.add_subcommand("run", "alias: run a named experiment");
  run->add_option("experiment", run_target, "experiment name")->required();
  add_common(run, cfg, config_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto* sub : app.get_subcommands()) {
    cfg.experiment = sub->get_name();
  }
  if (cfg.experiment == "run") cfg.experiment = run_target;

  if (!config_path.empty()) {
    try {
      cfg = bracketlab::load_config_file(cfg, config_path);
    } catch (const bracketlab::config_error& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    }
  }

  const auto result = bracketlab::safe_run(cfg);
  std::printf("%s\n", result.summary.c_str());
  return result.exit_code;
}
