#include <catch2/catch_amalgamated.hpp>

#include "fprw/word.hpp"

using fprw::FactorId;
using fprw::FreeWord;
using fprw::Letter;

namespace {
const Letter a1{FactorId::one, 0};
const Letter b2{FactorId::two, 0};
const Letter c2{FactorId::two, 1};
}  // namespace

TEST_CASE("empty word is the base point", "[word]") {
  FreeWord o;
  CHECK(o.empty());
  CHECK(o.length() == 0);
  CHECK(o.type() == 0);
  CHECK(o.str() == "()");
  CHECK_THROWS_AS(o.last(), fprw::EmptyWordError);
  CHECK_THROWS_AS(o.pop(), fprw::EmptyWordError);
}

TEST_CASE("push enforces alternation, pop undoes push", "[word]") {
  FreeWord w;
  w.push(b2);
  CHECK(w.type() == 2);
  CHECK_THROWS_AS(w.push(c2), fprw::CompositionError);
  w.push(a1);
  w.push(c2);
  CHECK(w.length() == 3);
  CHECK(w.last() == c2);
  w.pop();
  CHECK(w == FreeWord{{b2, a1}});
}

TEST_CASE("constructor rejects non-alternating letter runs", "[word]") {
  CHECK_THROWS_AS(FreeWord({a1, Letter{FactorId::one, 1}}),
                  std::invalid_argument);
  CHECK_NOTHROW(FreeWord({a1, b2, a1, c2}));
}

TEST_CASE("str and parse round trip", "[word]") {
  for (const char* text : {"()", "1:0", "2:1", "2:0.1:0.2:1", "1:3.2:7"}) {
    CHECK(FreeWord::parse(text).str() == text);
  }
  FreeWord w{{b2, a1, c2}};
  CHECK(FreeWord::parse(w.str()) == w);
}

TEST_CASE("parse rejects malformed renderings", "[word]") {
  CHECK_THROWS_AS(FreeWord::parse("1"), std::invalid_argument);
  CHECK_THROWS_AS(FreeWord::parse("3:0"), std::invalid_argument);
  CHECK_THROWS_AS(FreeWord::parse("1:x"), std::invalid_argument);
  CHECK_THROWS_AS(FreeWord::parse("1:0.1:1"), std::invalid_argument);
  CHECK_THROWS_AS(FreeWord::parse("1:0."), std::invalid_argument);
  CHECK_THROWS_AS(FreeWord::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(FreeWord::parse("1:70000"), std::invalid_argument);
}

TEST_CASE("concat composes exactly when types alternate at the seam", "[word]") {
  FreeWord u{{b2, a1}};
  FreeWord v{{c2, a1}};
  CHECK(concat(u, v) == FreeWord{{b2, a1, c2, a1}});
  CHECK(concat(FreeWord{}, u) == u);
  CHECK(concat(u, FreeWord{}) == u);
  CHECK_THROWS_AS(concat(u, FreeWord{{a1}}), fprw::CompositionError);
}

TEST_CASE("cones are prefix sets", "[word]") {
  FreeWord x{{b2, a1}};
  FreeWord deeper{{b2, a1, c2}};
  FreeWord sibling{{c2, a1}};
  CHECK(in_cone(FreeWord{}, x));
  CHECK(in_cone(x, x));
  CHECK(in_cone(x, deeper));
  CHECK_FALSE(in_cone(deeper, x));
  CHECK_FALSE(in_cone(x, sibling));
}

TEST_CASE("shift removes the cone base and rejects outsiders", "[word]") {
  FreeWord x{{b2, a1}};
  FreeWord y{{b2, a1, c2, a1}};
  CHECK(shift(x, y) == FreeWord{{c2, a1}});
  CHECK(shift(x, x) == FreeWord{});
  CHECK(shift(FreeWord{}, y) == y);
  CHECK(concat(x, shift(x, y)) == y);
  CHECK_THROWS_AS(shift(x, FreeWord{{c2}}), fprw::ConeError);

  const std::vector<FreeWord> batch{x, y};
  const auto shifted = shift(x, std::span<const FreeWord>(batch));
  REQUIRE(shifted.size() == 2);
  CHECK(shifted[0].empty());
  CHECK(shifted[1] == FreeWord{{c2, a1}});
}

TEST_CASE("common prefix agrees with cone membership", "[word]") {
  FreeWord x{{b2, a1, c2}};
  FreeWord y{{b2, a1, b2}};
  CHECK(common_prefix_length(x, y) == 2);
  CHECK(common_prefix(x, y) == FreeWord{{b2, a1}});
  CHECK(common_prefix(x, x) == x);
  CHECK(common_prefix(FreeWord{}, x).empty());
  // in_cone(x, y) iff the common prefix is all of x.
  CHECK(in_cone(common_prefix(x, y), x));
  CHECK(in_cone(common_prefix(x, y), y));
}

TEST_CASE("prefix bounds are checked", "[word]") {
  FreeWord x{{b2, a1}};
  CHECK(x.prefix(0).empty());
  CHECK(x.prefix(2) == x);
  CHECK_THROWS_AS(x.prefix(3), std::out_of_range);
}

TEST_CASE("byte encoding separates factor and vertex", "[word]") {
  FreeWord w{{Letter{FactorId::one, 5}, Letter{FactorId::two, 5}}};
  const auto bytes = w.encode();
  REQUIRE(bytes.size() == 4);
  CHECK(bytes[0] == 5);
  CHECK(bytes[1] == 0x00);
  CHECK(bytes[2] == 5);
  CHECK(bytes[3] == 0x80);
  CHECK(FreeWord{}.encode().empty());
}

TEST_CASE("ordering is lexicographic over letters", "[word]") {
  CHECK(FreeWord{} < FreeWord{{a1}});
  CHECK(FreeWord{{a1}} < FreeWord{{a1, b2}});
  CHECK(FreeWord{{a1}} < FreeWord{{b2}});
}
