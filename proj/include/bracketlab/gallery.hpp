#pragma once
// Built-in example families: two-dimensional cartesian, polar, cylinder and
// symplectization charts with closed-form images, expected behaviors, and
// per-entry grids tuned so every advertised flow stays inside its chart.

#include <functional>
#include <string>
#include <vector>

#include "bracketlab/pseudo_rep.hpp"

namespace bracketlab {

struct ChiParams {
  double center = 0.0;
  double radius = 1.0;
};

struct GalleryExpectations {
  bool bracket_is_constant = false;
  double bracket_constant = 0.0;  // value when constant
  double bracket_c0 = 0.0;        // expected c0 norm of the bracket field
  double decay_scale = 1.0;       // ||image of e0|| ~ decay_scale / sqrt(n)
  bool defect_vanishes = true;
  double defect_constant = 0.0;   // stuck value when defects do not vanish
  bool has_quoted_constant = false;
  double quoted_constant = 0.0;   // externally quoted value, recorded only
};

struct GalleryEntry {
  std::string name;
  PseudoRepresentation rep;  // rep.grid is the bracket/defect grid
  GridSpec decay_grid;       // where the 1/sqrt(n) decay is measured
  GridSpec flow_grid;        // start points for pullback sweeps
  double flow_time = 0.5;    // pinned series-comparison time s
  int series_order = 2;      // pinned series truncation N
  std::vector<int> lemma3_n_set;  // indices safe to flow for flow_time
  GalleryExpectations expected;
  ChiParams chi;
  // closed-form images for any index >= 1, beyond the prebuilt n_set
  std::function<std::vector<HamiltonianField>(int)> image_builder;
};

std::vector<std::string> gallery_names();
// remark2_cartesian | polterovich_polar | cylinder_heisenberg |
// symplectization_transverse; throws on unknown name
GalleryEntry gallery(const std::string& name);

// replaces the central image with a plateau cut off at radius sqrt(n) and the
// limit central image with the untruncated constant; the defect then vanishes
// on the grid while the limit bracket identity still fails
GalleryEntry with_truncated_h(const GalleryEntry& entry);

// copy with the given index set, building any images the entry lacks
GalleryEntry with_n_set(const GalleryEntry& entry, std::vector<int> n_set);

}  // namespace bracketlab
