#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddekoop/kedmd.hpp"

namespace ddekoop {

inline constexpr const char* kSurrogateFormat = "ddekoop-surrogate";
inline constexpr int kSurrogateVersion = 1;

/// CBOR document holding kernel parameters, centers (C), A, lambda and the fit
/// report. Doubles are stored as IEEE binary64, so a loaded surrogate
/// rebuilds the same Gram factorization and predicts bit-identically.
std::vector<std::uint8_t> surrogate_to_bytes(const KoopmanSurrogate& surrogate);
KoopmanSurrogate surrogate_from_bytes(const std::vector<std::uint8_t>& bytes);

void save_surrogate(const std::string& path, const KoopmanSurrogate& surrogate);
KoopmanSurrogate load_surrogate(const std::string& path);

}  // namespace ddekoop
