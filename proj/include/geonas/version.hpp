#pragma once

namespace geonas {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kDatasetFormatVersion = 1;
inline constexpr int kWeightsFormatVersion = 1;

}  // namespace geonas
