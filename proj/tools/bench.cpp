#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "bracketlab/flows.hpp"
#include "bracketlab/gallery.hpp"
#include "bracketlab/geometry.hpp"

using namespace bracketlab;

namespace {

double best_of_ms(const std::function<void()>& work, int repeats) {
  double best = 1e300;
  for (int k = 0; k < repeats; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    work();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(
        best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

double max_abs_diff(const std::vector<double>& a,
                    const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

void report(const char* op, double serial_ms, double parallel_ms,
            double diff) {
  std::printf("%-20s %10.2f ms %10.2f ms %8.2fx   max|diff| %g\n", op,
              serial_ms, parallel_ms, serial_ms / parallel_ms, diff);
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
  }
  const int repeats = quick ? 1 : 3;

  const GalleryEntry entry = gallery("polterovich_polar");
  const auto& rep = entry.rep;
  const GridSpec grid =
      quick ? GridSpec{{{0.05, 2.0, 96, false},
                        {0.0, 2.0 * std::acos(-1.0), 128, true}}}
            : rep.grid;
  const auto& F4 = rep.images_at(4)[0];
  const auto& G4 = rep.images_at(4)[1];

#ifdef _OPENMP
  std::printf("parallel backend: OpenMP\n");
#else
  std::printf("parallel backend: none (serial fallback)\n");
#endif
  std::printf("%-20s %13s %13s %9s\n", "op", "serial", "parallel", "speedup");

  GridField s_serial, s_parallel;
  report("sample_field",
         best_of_ms([&] { s_serial = sample_field(rep.chart, grid, F4.fn,
                                                  Exec::serial); },
                    repeats),
         best_of_ms([&] { s_parallel = sample_field(rep.chart, grid, F4.fn,
                                                    Exec::parallel); },
                    repeats),
         max_abs_diff(s_serial.samples, s_parallel.samples));

  GridField d_serial, d_parallel;
  report("partial_derivative",
         best_of_ms([&] { d_serial = partial_derivative(s_serial, 1, 4,
                                                        Exec::serial); },
                    repeats),
         best_of_ms([&] { d_parallel = partial_derivative(s_serial, 1, 4,
                                                          Exec::parallel); },
                    repeats),
         max_abs_diff(d_serial.samples, d_parallel.samples));

  const auto Gs = sample_field(rep.chart, grid, G4.fn);
  BracketOptions serial_fd, parallel_fd;
  serial_fd.mode = BracketOptions::Mode::force_fd;
  serial_fd.fd_order = 4;
  serial_fd.exec = Exec::serial;
  parallel_fd = serial_fd;
  parallel_fd.exec = Exec::parallel;
  GridField b_serial, b_parallel;
  report("poisson_bracket_fd",
         best_of_ms([&] { b_serial = poisson_bracket(s_serial, Gs,
                                                     serial_fd); },
                    repeats),
         best_of_ms([&] { b_parallel = poisson_bracket(s_serial, Gs,
                                                       parallel_fd); },
                    repeats),
         max_abs_diff(b_serial.samples, b_parallel.samples));

  const GridSpec flow_grid =
      quick ? GridSpec{{{0.4, 2.0, 6, false},
                        {std::acos(-1.0) / 64.0,
                         std::acos(-1.0) / 64.0 + 2.0 * std::acos(-1.0), 16,
                         true}}}
            : entry.flow_grid;
  const double t = quick ? 0.2 : 0.5;
  GridField p_serial, p_parallel;
  report("pullback",
         best_of_ms([&] { p_serial = pullback(F4.fn, G4, t, flow_grid, {},
                                              Exec::serial); },
                    repeats),
         best_of_ms([&] { p_parallel = pullback(F4.fn, G4, t, flow_grid, {},
                                                Exec::parallel); },
                    repeats),
         max_abs_diff(p_serial.samples, p_parallel.samples));

  const double total =
      max_abs_diff(s_serial.samples, s_parallel.samples) +
      max_abs_diff(d_serial.samples, d_parallel.samples) +
      max_abs_diff(b_serial.samples, b_parallel.samples) +
      max_abs_diff(p_serial.samples, p_parallel.samples);
  if (total != 0.0) {
    std::printf("FAIL: serial and parallel outputs differ\n");
    return 1;
  }
  std::printf("serial and parallel outputs are identical\n");
  return 0;
}
