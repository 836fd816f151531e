#pragma once

#include <cstdint>
#include <string_view>

namespace dave {

// All durations and instants are whole seconds of virtual time.
using seconds = std::uint64_t;
using virtual_time = std::uint64_t;

using claim_id = std::uint32_t;

enum class dispute_mode { discrete, continuous };

constexpr std::string_view to_string(dispute_mode m) {
  return m == dispute_mode::discrete ? "discrete" : "continuous";
}

}  // namespace dave
