#include "fprw/word.hpp"

#include <charconv>
#include <ostream>
#include <sstream>
#include <utility>

namespace fprw {

FactorId factor_from_int(int i) {
  if (i == 1) return FactorId::one;
  if (i == 2) return FactorId::two;
  throw std::invalid_argument("factor index must be 1 or 2, got " +
                              std::to_string(i));
}

FreeWord::FreeWord(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (std::size_t i = 1; i < letters_.size(); ++i) {
    if (letters_[i].factor == letters_[i - 1].factor) {
      throw std::invalid_argument(
          "consecutive letters share factor " +
          std::to_string(factor_index(letters_[i].factor)) + " at position " +
          std::to_string(i));
    }
  }
}

Letter FreeWord::last() const {
  if (letters_.empty()) throw EmptyWordError("last letter of the empty word");
  return letters_.back();
}

FreeWord FreeWord::prefix(std::size_t k) const {
  if (k > letters_.size()) {
    throw std::out_of_range("prefix length " + std::to_string(k) +
                            " exceeds word length " +
                            std::to_string(letters_.size()));
  }
  FreeWord w;
  w.letters_.assign(letters_.begin(), letters_.begin() + k);
  return w;
}

void FreeWord::push(Letter l) {
  if (!letters_.empty() && letters_.back().factor == l.factor) {
    throw CompositionError("push would place two factor-" +
                           std::to_string(factor_index(l.factor)) +
                           " letters next to each other");
  }
  letters_.push_back(l);
}

void FreeWord::pop() {
  if (letters_.empty()) throw EmptyWordError("pop on the empty word");
  letters_.pop_back();
}

std::string FreeWord::str() const {
  if (letters_.empty()) return "()";
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(factor_index(letters_[i].factor));
    out += ':';
    out += std::to_string(letters_[i].vertex);
  }
  return out;
}

FreeWord FreeWord::parse(std::string_view text) {
  if (text == "()") return {};
  if (text.empty() || text.back() == '.') {
    throw std::invalid_argument("word text '" + std::string(text) +
                                "' is not a canonical rendering");
  }
  std::vector<Letter> letters;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t dot = text.find('.', pos);
    std::string_view item =
        text.substr(pos, dot == std::string_view::npos ? dot : dot - pos);
    std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw std::invalid_argument("bad letter '" + std::string(item) +
                                  "', expected f:v");
    }
    int f = 0;
    unsigned v = 0;
    auto fr = std::from_chars(item.data(), item.data() + colon, f);
    auto vr = std::from_chars(item.data() + colon + 1,
                              item.data() + item.size(), v);
    if (fr.ec != std::errc{} || fr.ptr != item.data() + colon ||
        vr.ec != std::errc{} || vr.ptr != item.data() + item.size() ||
        v > 0xffff) {
      throw std::invalid_argument("bad letter '" + std::string(item) + "'");
    }
    letters.push_back({factor_from_int(f), static_cast<std::uint16_t>(v)});
    pos = dot == std::string_view::npos ? text.size() : dot + 1;
  }
  return FreeWord(std::move(letters));
}

std::vector<std::uint8_t> FreeWord::encode() const {
  std::vector<std::uint8_t> out;
  out.reserve(2 * letters_.size());
  for (Letter l : letters_) {
    std::uint16_t packed = static_cast<std::uint16_t>(
        (l.factor == FactorId::two ? 0x8000u : 0u) | l.vertex);
    out.push_back(static_cast<std::uint8_t>(packed & 0xff));
    out.push_back(static_cast<std::uint8_t>(packed >> 8));
  }
  return out;
}

FreeWord concat(const FreeWord& u, const FreeWord& v) {
  if (u.empty()) return v;
  if (v.empty()) return u;
  if (u.type() == factor_index(v.letters().front().factor)) {
    throw CompositionError("concat undefined: tau(u) = " +
                           std::to_string(u.type()) +
                           " equals the factor of v's first letter");
  }
  std::vector<Letter> letters = u.letters();
  letters.insert(letters.end(), v.letters().begin(), v.letters().end());
  return FreeWord(std::move(letters));
}

bool in_cone(const FreeWord& x, const FreeWord& y) {
  if (x.length() > y.length()) return false;
  for (std::size_t i = 0; i < x.length(); ++i) {
    if (x.at(i) != y.at(i)) return false;
  }
  return true;
}

FreeWord shift(const FreeWord& x, const FreeWord& y) {
  if (!in_cone(x, y)) {
    throw ConeError("shift base " + x.str() + " is not a prefix of " + y.str());
  }
  std::vector<Letter> rest(y.letters().begin() + x.length(), y.letters().end());
  return FreeWord(std::move(rest));
}

std::vector<FreeWord> shift(const FreeWord& x, std::span<const FreeWord> a) {
  std::vector<FreeWord> out;
  out.reserve(a.size());
  for (const FreeWord& y : a) out.push_back(shift(x, y));
  return out;
}

std::size_t common_prefix_length(const FreeWord& x, const FreeWord& y) {
  std::size_t n = std::min(x.length(), y.length());
  std::size_t k = 0;
  while (k < n && x.at(k) == y.at(k)) ++k;
  return k;
}

FreeWord common_prefix(const FreeWord& x, const FreeWord& y) {
  return x.prefix(common_prefix_length(x, y));
}

std::ostream& operator<<(std::ostream& os, const FreeWord& w) {
  return os << w.str();
}

}  // namespace fprw
