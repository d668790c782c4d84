#pragma once

#include <string>

#include "chipvec/tech.hpp"

namespace chipvec {

// Parse the supported LEF subset (UNITS, LAYER with TYPE/PITCH, SITE, VIA,
// MACRO with CLASS/SIZE/PIN). Unsupported statements are skipped and listed
// in the returned TechLib's diagnostics. Grammar in docs/formats.md.
TechLib parse_lef(const std::string& text);

}  // namespace chipvec
