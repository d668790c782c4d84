#pragma once

#include <map>
#include <string>

#include "chipvec/foundation.hpp"
#include "chipvec/workspace.hpp"

namespace chipvec {

// On-disk foundation bundle under <workspace>/vectors/:
//   manifest.json              counts + per-file content hashes, written last
//   design.json                design vector, placement, ports, patch grid
//   graph.json
//   nets/net_<i>.json          one per net with wires, canonical name order
//   paths/path_<i>.json        delay-ordered
//   patches/patch_<i>.json     grid order
struct BundleManifest {
  std::string schema_version = "1.0";
  std::string design_name;
  int net_files = 0;
  int path_files = 0;
  int patch_files = 0;
  int nets_total = 0;
  int nets_wireless = 0;
  bool has_graph = false;
  std::map<std::string, std::string> hashes;  // rel path -> fnv1a-64 hex
};

// Writes the levels present in `levels`; level directories are replaced,
// untouched levels keep their existing files. Repeated saves of the same
// data are byte-identical. Returns the manifest written.
BundleManifest save_bundle(const Workspace& ws, const FoundationData& fd,
                           unsigned levels = static_cast<unsigned>(VecLevel::All));

// Verifies every manifest hash before decoding. Throws NotABundle when the
// manifest is missing and CorruptBundle naming the first bad file.
FoundationData load_bundle(const Workspace& ws);

BundleManifest load_manifest(const Workspace& ws);

// Hash of the manifest bytes; equal manifests mean equal bundles.
std::string bundle_hash(const Workspace& ws);

}  // namespace chipvec
