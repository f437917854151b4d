#include "fprw/digest.hpp"

namespace fprw {

std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  Fnv1a64 h;
  h.update(bytes.data(), bytes.size());
  return h.value();
}

std::uint64_t fnv1a64(std::string_view s) {
  Fnv1a64 h;
  h.update(s);
  return h.value();
}

}  // namespace fprw
