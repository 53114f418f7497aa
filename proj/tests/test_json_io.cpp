#include <doctest.h>

#include <sstream>

#include "test_util.hpp"
#include "vlkey/json_io.hpp"
#include "vlkey/schemes.hpp"

using namespace vlkey;

TEST_CASE("source json round trip") {
  NamedSource named;
  named.source = matched_pair_source(2);
  named.alphabet_x = Json::array({0, 1, 2, 3});
  named.alphabet_y = Json::array({0, 1, 2, 3});
  const Json j = source_to_json(named);
  const NamedSource back = source_from_json(j);
  CHECK(back.source.nx() == 4);
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y)
      CHECK(back.source.at(x, y) == named.source.at(x, y));
}

TEST_CASE("doubles in source mass are accepted with a warning") {
  const Json j = {
      {"alphabet_x", Json::array({"a", "b"})},
      {"alphabet_y", Json::array({"u", "v"})},
      {"mass", Json::array({Json::array({0, 0, 0.25}), Json::array({0, 1, 0.25}),
                            Json::array({1, 0, 0.25}), Json::array({1, 1, 0.25})})}};
  std::ostringstream warnings;
  const NamedSource s = source_from_json(j, &warnings);
  CHECK(s.source.at(0, 0) == Rational(1, 4));
  CHECK(warnings.str().find("warning") != std::string::npos);
}

TEST_CASE("invalid sources are rejected") {
  Json j = {{"alphabet_x", Json::array({"a"})},
            {"alphabet_y", Json::array({"u"})},
            {"mass", Json::array({Json::array({0, 0, 1, 2})})}};
  CHECK_THROWS(source_from_json(j));  // masses sum to 1/2
  j["mass"] = Json::array({Json::array({0, 3, 1, 1})});
  CHECK_THROWS(source_from_json(j));  // index out of range
}

TEST_CASE("law jsonl round trip") {
  const PrefixSchemeConfig cfg{3, 1};
  auto [alice, bob] = prefix_matching_scheme(cfg);
  const KeyLaw law = enumerate_protocol(matched_pair_source(3), alice, bob,
                                        prefix_scheme_options(cfg));
  const std::string text = law_to_jsonl(law);
  std::istringstream in(text);
  const KeyLaw back = law_from_jsonl(in);
  REQUIRE(back.outcomes.size() == law.outcomes.size());
  for (std::size_t i = 0; i < law.outcomes.size(); ++i) {
    CHECK(back.outcomes[i].w == law.outcomes[i].w);
    CHECK(back.outcomes[i].L == law.outcomes[i].L);
    CHECK(back.outcomes[i].a == law.outcomes[i].a);
    CHECK(back.outcomes[i].b == law.outcomes[i].b);
    CHECK(back.outcomes[i].p == law.outcomes[i].p);
  }
}

TEST_CASE("failure messages survive the round trip") {
  KeyOutcome o;
  o.w = {Message::of({3, 1}), Message::fail()};
  o.L = 0;
  o.p = Rational(1, 3);
  const Json j = outcome_to_json(o, true);
  const KeyOutcome back = outcome_from_json(j);
  CHECK(back.w == o.w);
  CHECK(back.p == o.p);
}

TEST_CASE("rationals with large terms serialise as strings") {
  const Rational big = rational_pow(Rational(7, 3), 40);
  const Json j = rational_to_json(big);
  CHECK(rational_from_json(j) == big);
  CHECK(j[0].is_string());
}
