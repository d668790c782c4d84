#include "chipvec/design.hpp"

#include <unordered_set>

namespace chipvec {

const Instance* Design::find_instance(const std::string& inst_name) const {
  for (const auto& i : instances)
    if (i.name == inst_name) return &i;
  return nullptr;
}

const Port* Design::find_port(const std::string& port_name) const {
  for (const auto& p : ports)
    if (p.name == port_name) return &p;
  return nullptr;
}

Rect Design::instance_rect(const Instance& inst) const {
  const CellMaster* m = tech.find_master(inst.master);
  if (!m) throw UnknownMaster(inst.master);
  return Rect{inst.origin, Point{inst.origin.x + m->width, inst.origin.y + m->height}};
}

Point Design::pin_position(const Instance& inst, const std::string& pin_name) const {
  const CellMaster* m = tech.find_master(inst.master);
  if (!m) throw UnknownMaster(inst.master);
  const MasterPin* p = m->find_pin(pin_name);
  if (!p) throw UnknownMaster(inst.master + "/" + pin_name);
  return Point{inst.origin.x + p->offset.x, inst.origin.y + p->offset.y};
}

bool Design::same_design(const Design& other) const {
  return name == other.name && die == other.die && core == other.core &&
         instances == other.instances && ports == other.ports && nets == other.nets;
}

void Design::validate() const {
  if (!die.valid() || !core.valid()) throw GeometryError("invalid die/core rect");
  std::unordered_set<std::string> names;
  for (const auto& i : instances) {
    if (!names.insert(i.name).second) throw DuplicateName(i.name);
    if (!tech.find_master(i.master)) throw UnknownMaster(i.master);
    if (!die.contains(i.origin))
      throw GeometryError("instance " + i.name + " origin outside die");
  }
  std::unordered_set<std::string> port_names;
  for (const auto& p : ports)
    if (!port_names.insert(p.name).second) throw DuplicateName(p.name);
  std::unordered_set<std::string> net_names;
  for (const auto& n : nets) {
    if (!net_names.insert(n.name).second) throw DuplicateName(n.name);
    if (n.pins.empty()) throw GeometryError("net " + n.name + " has no pins");
    int drivers = 0;
    for (const auto& pin : n.pins) {
      if (pin.direction == NetPinDirection::Driver) ++drivers;
      if (pin.is_port()) {
        if (!find_port(pin.pin)) throw UnknownMaster("port " + pin.pin);
      } else {
        const Instance* inst = find_instance(pin.owner);
        if (!inst) throw UnknownMaster(pin.owner);
        const CellMaster* m = tech.find_master(inst->master);
        if (!m->find_pin(pin.pin))
          throw UnknownMaster(inst->master + "/" + pin.pin);
      }
    }
    if (drivers > 1) throw GeometryError("net " + n.name + " has multiple drivers");
    for (const auto& s : n.routing)
      if (!s.rectilinear())
        throw GeometryError("net " + n.name + " has a non-rectilinear segment");
  }
}

}  // namespace chipvec
