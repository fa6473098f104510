#pragma once

#include <cstddef>
#include <cstdint>

namespace tdl::detail {

inline std::size_t hash_mix(std::size_t seed, std::size_t value) {
  // boost::hash_combine with the 64-bit golden ratio constant
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace tdl::detail
