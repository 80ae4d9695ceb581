#pragma once

#include <filesystem>

#include "geonas/network.hpp"

namespace geonas::nn {

/// Binary weight file: magic "GNW1", format version, architecture-id hash,
/// input/output dims, then each parameter block in declaration order as a
/// count followed by little-endian 64-bit floats.
void save_weights_file(const std::filesystem::path& path, const Network& net);

/// Loads weights into an already-built network; the file's architecture
/// hash and dims must match.
void load_weights_file(const std::filesystem::path& path, Network& net);

}  // namespace geonas::nn
