#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gapidx/index.hpp"

namespace gapidx {

/// Little-endian index image; see docs/FORMATS.md. Round trips are bit-exact.
std::vector<std::uint8_t> encode_index(const AnyIndex& index);

/// Throws DataError on a malformed or truncated image.
AnyIndex decode_index(std::span<const std::uint8_t> bytes);

void save_index(const AnyIndex& index, const std::filesystem::path& path);
AnyIndex load_index(const std::filesystem::path& path);

/// Serialized size in bytes (the size-bytes model cost).
std::size_t serialized_size(const AnyIndex& index);

}  // namespace gapidx
