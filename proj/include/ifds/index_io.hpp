#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifds/query_index.hpp"

namespace ifds {

class IndexFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kIndexMagic = 0x3158444953444649ull;  // "IFDSIDX1" read as little-endian
inline constexpr std::uint64_t kIndexVersion = 1;

/// Binary index file: little-endian 64-bit words throughout. The layout is
/// described in docs/index-format.md.
std::vector<std::uint8_t> serialize_index(const QueryIndex& ix);
QueryIndex deserialize_index(const std::vector<std::uint8_t>& bytes);

void save_index(const QueryIndex& ix, const std::string& path);
QueryIndex load_index(const std::string& path);

}  // namespace ifds
