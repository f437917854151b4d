#ifndef FPRW_WORD_HPP
#define FPRW_WORD_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fprw/errors.hpp"

namespace fprw {

// The two free-product factors.
enum class FactorId : std::uint8_t { one = 1, two = 2 };

constexpr FactorId other(FactorId f) {
  return f == FactorId::one ? FactorId::two : FactorId::one;
}
constexpr int factor_index(FactorId f) { return static_cast<int>(f); }
FactorId factor_from_int(int i);

// One non-root vertex of a factor. `vertex` indexes the factor's vertex list
// with the root removed (0-based), so it never denotes a root.
struct Letter {
  FactorId factor;
  std::uint16_t vertex;

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr auto operator<=>(Letter, Letter) = default;
};

// Element of the free product V1*V2: a finite sequence of letters in which
// consecutive letters come from different factors. The empty sequence is the
// base point o.
class FreeWord {
 public:
  FreeWord() = default;
  explicit FreeWord(std::vector<Letter> letters);

  // Parses the canonical rendering produced by str(): "()" or "f:v" pairs
  // joined by '.', e.g. "1:0.2:1".
  static FreeWord parse(std::string_view text);

  [[nodiscard]] bool empty() const { return letters_.empty(); }
  [[nodiscard]] std::size_t length() const { return letters_.size(); }

  // tau: factor of the last letter, 0 for the empty word.
  [[nodiscard]] int type() const {
    return letters_.empty() ? 0 : factor_index(letters_.back().factor);
  }

  // Last letter [u]; the empty word has none.
  [[nodiscard]] Letter last() const;

  [[nodiscard]] const Letter& at(std::size_t i) const { return letters_[i]; }
  [[nodiscard]] const std::vector<Letter>& letters() const { return letters_; }

  [[nodiscard]] FreeWord prefix(std::size_t k) const;

  // Appends a letter; the letter's factor must differ from type().
  void push(Letter l);
  // Drops the last letter.
  void pop();

  [[nodiscard]] std::string str() const;

  // Canonical byte encoding: per letter a little-endian uint16 with the
  // factor in the top bit and the vertex index below.
  [[nodiscard]] std::vector<std::uint8_t> encode() const;

  friend bool operator==(const FreeWord&, const FreeWord&) = default;
  friend std::strong_ordering operator<=>(const FreeWord& a, const FreeWord& b) {
    return a.letters_ <=> b.letters_;
  }

 private:
  std::vector<Letter> letters_;
};

// Partial composition: juxtaposition when tau(u) differs from the factor of
// v's first letter; u.o = u and o.v = v.
FreeWord concat(const FreeWord& u, const FreeWord& v);

// True iff y lies in the cone C(x), i.e. x is a prefix of y.
bool in_cone(const FreeWord& x, const FreeWord& y);

// x^{-1}y: removes the prefix x from y.
FreeWord shift(const FreeWord& x, const FreeWord& y);
std::vector<FreeWord> shift(const FreeWord& x, std::span<const FreeWord> a);

// Longest common prefix of x and y.
FreeWord common_prefix(const FreeWord& x, const FreeWord& y);
std::size_t common_prefix_length(const FreeWord& x, const FreeWord& y);

std::ostream& operator<<(std::ostream& os, const FreeWord& w);

}  // namespace fprw

#endif
