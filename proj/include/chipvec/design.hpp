#pragma once

#include <string>
#include <vector>

#include "chipvec/geom.hpp"
#include "chipvec/tech.hpp"

namespace chipvec {

enum class NetPinDirection { Driver, Load };

struct NetPin {
  std::string owner;     // instance name, empty for a chip port
  std::string pin;       // master pin name, or port name when owner is empty
  Point position;        // absolute DBU
  NetPinDirection direction = NetPinDirection::Load;

  bool operator==(const NetPin&) const = default;
  bool is_port() const { return owner.empty(); }
};

struct Net {
  std::string name;
  std::vector<NetPin> pins;  // driver first when present
  std::vector<WireSegment> routing;
  std::vector<ViaInstance> vias;

  bool operator==(const Net&) const = default;

  bool routed() const { return !routing.empty(); }
  int fanout() const {
    int n = 0;
    for (const auto& p : pins)
      if (p.direction == NetPinDirection::Load) ++n;
    return n;
  }
  const NetPin* driver() const {
    for (const auto& p : pins)
      if (p.direction == NetPinDirection::Driver) return &p;
    return nullptr;
  }
  dbu_t routed_wirelength() const {
    dbu_t total = 0;
    for (const auto& s : routing) total += s.length();
    return total;
  }
};

struct Instance {
  std::string name;
  std::string master;
  Point origin;
  InstanceClass cls = InstanceClass::Logic;

  bool operator==(const Instance&) const = default;
};

struct Port {
  std::string name;
  Point position;
  PinDirection direction = PinDirection::Input;

  bool operator==(const Port&) const = default;
};

struct Design {
  std::string name;
  TechLib tech;
  Rect die;
  Rect core;
  std::vector<Instance> instances;
  std::vector<Port> ports;
  std::vector<Net> nets;
  std::vector<std::string> diagnostics;

  const Instance* find_instance(const std::string& name) const;
  const Port* find_port(const std::string& name) const;
  Rect instance_rect(const Instance& inst) const;
  Point pin_position(const Instance& inst, const std::string& pin_name) const;

  // Structural equality over the design model (tech and diagnostics excluded).
  bool same_design(const Design& other) const;

  // Model invariants: unique names, rectilinear routes, pins resolvable,
  // at most one driver per net. Throws on violation.
  void validate() const;
};

}  // namespace chipvec
