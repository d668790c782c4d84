#pragma once

#include <string>

#include "chipvec/design.hpp"

namespace chipvec {

// Parse the supported DEF subset (DESIGN, UNITS, DIEAREA, REGIONS with a
// region named "core", COMPONENTS, PINS, NETS with ROUTED wiring). Unknown
// sections are skipped with diagnostics. Grammar in docs/formats.md.
Design parse_def(const std::string& text, const TechLib& tech);

// Deterministic DEF writer: instances, ports, and nets sorted by name;
// reparsing the output against the same tech reproduces the design.
std::string write_def(const Design& design);

}  // namespace chipvec
