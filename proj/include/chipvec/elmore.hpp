#pragma once

#include <cstddef>
#include <vector>

#include "chipvec/errors.hpp"

namespace chipvec {

// Lumped RC tree rooted at the driver (node 0). Elmore delay of node v is
// the sum over tree edges e on the root->v path of R_e times the total
// capacitance downstream of e.
class RcTree {
public:
  RcTree() { reset(); }

  void reset() {
    parent_ = {-1};
    edge_r_ = {0.0};
    node_cap_ = {0.0};
  }

  std::size_t size() const { return parent_.size(); }

  std::size_t add_node(std::size_t parent, double resistance, double capacitance) {
    if (parent >= parent_.size()) throw Error("rc tree: parent out of range");
    parent_.push_back(static_cast<int>(parent));
    edge_r_.push_back(resistance);
    node_cap_.push_back(capacitance);
    return parent_.size() - 1;
  }

  void add_cap(std::size_t node, double capacitance) {
    if (node >= node_cap_.size()) throw Error("rc tree: node out of range");
    node_cap_[node] += capacitance;
  }

  double total_cap() const {
    double total = 0.0;
    for (double c : node_cap_) total += c;
    return total;
  }

  double node_cap(std::size_t node) const { return node_cap_[node]; }
  int parent(std::size_t node) const { return parent_[node]; }
  double edge_r(std::size_t node) const { return edge_r_[node]; }

  // Elmore delay per node via the downstream-capacitance formulation.
  std::vector<double> elmore_delays() const;

private:
  std::vector<int> parent_;
  std::vector<double> edge_r_;    // resistance of the edge to the parent
  std::vector<double> node_cap_;  // lumped capacitance at the node
};

}  // namespace chipvec
