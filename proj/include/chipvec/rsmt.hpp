#pragma once

#include <vector>

#include "chipvec/geom.hpp"

namespace chipvec {

// Length of a rectilinear minimum spanning tree over the points (Prim).
dbu_t rmst_length(const std::vector<Point>& points);

// Steiner tree length estimate: exact for <= 3 pins (Manhattan / HPWL),
// RMST refined by iterated 1-Steiner insertion on the Hanan grid for larger
// nets (capped at 2x pin count insertions; nets beyond the refine limit fall
// back to the plain RMST). Always HPWL <= result <= RMST.
dbu_t estimate_rsmt(const std::vector<Point>& points);

}  // namespace chipvec
