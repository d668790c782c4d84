#include "chipvec/elmore.hpp"

namespace chipvec {

std::vector<double> RcTree::elmore_delays() const {
  const std::size_t n = parent_.size();
  // nodes are appended after their parents, so index order is topological
  std::vector<double> downstream = node_cap_;
  for (std::size_t v = n; v-- > 1;) downstream[static_cast<std::size_t>(parent_[v])] += downstream[v];
  std::vector<double> delay(n, 0.0);
  for (std::size_t v = 1; v < n; ++v)
    delay[v] = delay[static_cast<std::size_t>(parent_[v])] + edge_r_[v] * downstream[v];
  return delay;
}

}  // namespace chipvec
