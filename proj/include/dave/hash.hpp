#pragma once

#include <openssl/evp.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dave {

using digest = std::array<std::uint8_t, 32>;

// Recorded in every report so golden outputs can be tied to the hash in use.
inline constexpr std::string_view hash_algorithm = "sha256";

// Domain-separation tags. State hashes (tree leaves) and internal nodes never
// share a preimage layout.
inline constexpr std::uint8_t tag_state = 0x00;
inline constexpr std::uint8_t tag_internal = 0x01;
inline constexpr std::uint8_t tag_seed = 0x02;
inline constexpr std::uint8_t tag_transition = 0x03;
inline constexpr std::uint8_t tag_garbage = 0x04;

// Fixed-capacity preimage builder; all preimages used here are < 128 bytes.
class preimage {
 public:
  preimage& put(std::uint8_t byte) {
    check(1);
    buf_[size_++] = byte;
    return *this;
  }

  preimage& put(const digest& d) {
    check(d.size());
    for (auto b : d) buf_[size_++] = b;
    return *this;
  }

  // Little-endian.
  preimage& put_u64(std::uint64_t v) {
    check(8);
    for (int i = 0; i < 8; ++i) buf_[size_++] = static_cast<std::uint8_t>(v >> (8 * i));
    return *this;
  }

  std::span<const std::uint8_t> bytes() const { return {buf_.data(), size_}; }

 private:
  void check(std::size_t n) const {
    if (size_ + n > buf_.size()) throw std::length_error("preimage overflow");
  }

  std::array<std::uint8_t, 128> buf_{};
  std::size_t size_ = 0;
};

inline digest sha256(std::span<const std::uint8_t> bytes) {
  digest out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != out.size()) {
    throw std::runtime_error("EVP_Digest(sha256) failed");
  }
  return out;
}

inline digest sha256(const preimage& p) { return sha256(p.bytes()); }

inline std::string to_hex(const digest& d) {
  static constexpr char hex[] = "0123456789abcdef";
  std::string s;
  s.reserve(d.size() * 2);
  for (auto b : d) {
    s.push_back(hex[b >> 4]);
    s.push_back(hex[b & 0xf]);
  }
  return s;
}

}  // namespace dave
