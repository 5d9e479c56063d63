#include "doctest.h"

#include <map>

#include "test_util.hpp"
#include "ufam/finset.hpp"
#include "ufam/groundset.hpp"

using namespace ufam;

namespace {

using Naive = std::function<bool(Nat)>;

bool naive_blocks(Nat start, Nat gap, Nat len0, Nat dl, Nat x) {
  Nat b = start, len = len0;
  while (b <= x) {
    if (x < b + len) return true;
    b += len + gap;
    len += dl;
  }
  return false;
}

// catalog paired with independently written membership predicates
std::vector<std::pair<std::string, Naive>> naive_catalog() {
  return {
      {"all", [](Nat x) { return x >= 0; }},
      {"seg(5)", [](Nat x) { return x >= 5; }},
      {"ap(0,2)", [](Nat x) { return x % 2 == 0; }},
      {"ap(1,3)|ap(2,3)", [](Nat x) { return x >= 1 && x % 3 != 0; }},
      {"blocks(10,3,2,1)", [](Nat x) { return naive_blocks(10, 3, 2, 1, x); }},
      {"fin{4,5,6}|ap(11,2)",
       [](Nat x) { return x == 4 || x == 5 || x == 6 || (x >= 11 && x % 2 == 1); }},
      {"blocks(10,4,3,0)", [](Nat x) { return naive_blocks(10, 4, 3, 0, x); }},
      {"fin{3,4,5}|cut(ap(0,2),6)",
       [](Nat x) { return x == 3 || x == 4 || x == 5 || (x > 6 && x % 2 == 0); }},
      {"cut(blocks(10,3,2,1),11)",
       [](Nat x) { return x > 11 && naive_blocks(10, 3, 2, 1, x); }},
      {"ap(0,2)|blocks(9,2,2,1)\\fin{10,14}",
       [](Nat x) {
         return (x % 2 == 0 || naive_blocks(9, 2, 2, 1, x)) && x != 10 && x != 14;
       }},
      {"seg(3)\\fin{5}", [](Nat x) { return x >= 3 && x != 5; }},
      {"ap(3,4)", [](Nat x) { return x >= 3 && x % 4 == 3; }},
  };
}

}  // namespace

TEST_SUITE_BEGIN("setcore");

TEST_CASE("finset parse and print") {
  CHECK(FinSet::parse("{2,5,9}").str() == "{2,5,9}");
  CHECK(FinSet::parse("{}").str() == "{}");
  CHECK(FinSet::parse("{ 1 , 4 }").elements() == std::vector<Nat>{1, 4});
  CHECK_THROWS_AS(FinSet::parse("{3,2}"), PrecondError);
  CHECK_THROWS_AS(FinSet::parse("{3,3}"), PrecondError);
  CHECK_THROWS_AS(FinSet::parse("{3"), ParseError);
}

TEST_CASE("lexicographic comparison") {
  CHECK(lex_compare(FinSet{0, 5}, FinSet{1, 2}) == std::strong_ordering::less);
  CHECK(lex_compare(FinSet{2, 3}, FinSet{2, 3}) == std::strong_ordering::equal);
  CHECK(lex_compare(FinSet{1, 4}, FinSet{1, 3, 7}) == std::strong_ordering::greater);
  // an extension is smaller than its prefix
  CHECK(lex_compare(FinSet{1, 3}, FinSet{1}) == std::strong_ordering::less);
}

TEST_CASE("lex order agrees with padded-sequence comparison") {
  testutil::Rng rng(11);
  auto padded = [](const FinSet& s, const FinSet& t) {
    const auto &a = s.elements(), &b = t.elements();
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
      Nat x = i < a.size() ? a[i] : std::numeric_limits<Nat>::max();
      Nat y = i < b.size() ? b[i] : std::numeric_limits<Nat>::max();
      if (x != y)
        return x < y ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
  };
  for (int i = 0; i < 3000; ++i) {
    FinSet s = testutil::random_finset(rng, 12, 5);
    FinSet t = testutil::random_finset(rng, 12, 5);
    CHECK(lex_compare(s, t) == padded(s, t));
  }
}

TEST_CASE("initial segments") {
  CHECK(is_initial_segment(FinSet{1, 3}, FinSet{1, 3, 8}));
  CHECK(is_initial_segment(FinSet{}, FinSet{4}));
  CHECK_FALSE(is_initial_segment(FinSet{1, 8}, FinSet{1, 3, 8}));
  CHECK(is_initial_segment(FinSet{2, 4}, FinSet{2, 4}));
}

TEST_CASE("terminal run decomposition") {
  auto r = decompose_terminal_run(FinSet{2, 5, 6, 7});
  CHECK(r.u == FinSet{2});
  CHECK(r.p == 5);
  CHECK(r.m == 2);
  r = decompose_terminal_run(FinSet{4});
  CHECK(r.u.empty());
  CHECK(r.p == 4);
  CHECK(r.m == 0);
  r = decompose_terminal_run(FinSet{3, 4, 5});
  CHECK(r.u.empty());
  CHECK(r.p == 3);
  CHECK(r.m == 2);
  CHECK_THROWS_AS(decompose_terminal_run(FinSet{}), PrecondError);
}

TEST_CASE("terminal run properties") {
  testutil::Rng rng(23);
  for (int i = 0; i < 2000; ++i) {
    FinSet t = testutil::random_finset(rng, 20, 8);
    if (t.empty()) continue;
    auto r = decompose_terminal_run(t);
    std::vector<Nat> run;
    for (Nat x = r.p; x <= r.p + r.m; ++x) run.push_back(x);
    CHECK(r.u.union_with(FinSet(run)) == t);
    CHECK_FALSE(t.contains(r.p - 1));
    if (r.p >= 1)
      CHECK(r.u.max_or() < r.p - 1);
    else
      CHECK(r.u.empty());  // a run starting at 0 leaves no room below
    CHECK(r.m == t.max_or() - r.p);
  }
}

TEST_CASE("ground set membership matches naive evaluation") {
  for (const auto& [src, naive] : naive_catalog()) {
    CAPTURE(src);
    GroundSet g = GroundSet::parse(src);
    for (Nat x = 0; x <= 3000; ++x) CHECK(g.contains(x) == naive(x));
  }
}

TEST_CASE("min_above matches naive scan") {
  for (const auto& [src, naive] : naive_catalog()) {
    CAPTURE(src);
    GroundSet g = GroundSet::parse(src);
    for (Nat k = -1; k <= 200; ++k) {
      Nat expect = k + 1;
      while (!naive(expect)) ++expect;
      CHECK(g.min_above(k) == expect);
    }
  }
}

TEST_CASE("canonical string reparses to the same set") {
  for (const auto& [src, naive] : naive_catalog()) {
    CAPTURE(src);
    GroundSet g = GroundSet::parse(src);
    GroundSet h = GroundSet::parse(g.str());
    for (Nat x = 0; x <= 2000; ++x) CHECK(g.contains(x) == h.contains(x));
  }
}

TEST_CASE("spec blocks values") {
  GroundSet b = GroundSet::parse("blocks(10,3,2,1)");
  CHECK(b.contains(11));
  CHECK_FALSE(b.contains(12));
  CHECK(b.min_above(12) == 15);
  CHECK_FALSE(GroundSet::parse("all\\fin{5}").contains(5));
  CHECK_FALSE(GroundSet::parse("ap(0,2)").contains(7));
}

TEST_CASE("run classification examples") {
  auto evens = GroundSet::parse("ap(0,2)");
  auto rc = evens.runs(2);
  CHECK(rc.kind == RunClassification::Kind::none_beyond);
  CHECK(rc.bound == 0);
  CHECK_FALSE(rc.arbitrarily_long);

  auto blocks = GroundSet::parse("blocks(10,3,2,1)");
  rc = blocks.runs(5);
  CHECK(rc.kind == RunClassification::Kind::infinitely_many);
  CHECK(rc.arbitrarily_long);

  auto mod3 = GroundSet::parse("ap(0,3)|ap(1,3)");
  rc = mod3.runs(2);
  CHECK(rc.kind == RunClassification::Kind::infinitely_many);
  CHECK_FALSE(rc.arbitrarily_long);
  rc = mod3.runs(3);
  CHECK(rc.kind == RunClassification::Kind::none_beyond);

  rc = GroundSet::parse("fin{4,5,6}|ap(11,2)").runs(2);
  CHECK(rc.kind == RunClassification::Kind::finitely_many);
  CHECK(rc.bound == 5);  // {5,6} is the last two-element run start
}

TEST_CASE("run classification is consistent with direct scans") {
  for (const auto& [src, naive] : naive_catalog()) {
    CAPTURE(src);
    GroundSet g = GroundSet::parse(src);
    for (Nat l : {1, 2, 3, 5}) {
      auto rc = g.runs(l);
      auto run_at = [&](Nat i) {
        for (Nat j = 0; j < l; ++j)
          if (!naive(i + j)) return false;
        return true;
      };
      if (rc.kind == RunClassification::Kind::infinitely_many) {
        for (Nat bound : {100, 900}) {
          bool found = false;
          for (Nat i = bound + 1; i <= bound + 2500 && !found; ++i)
            found = run_at(i) && g.contains(i);
          CHECK(found);
        }
      } else {
        for (Nat i = rc.bound + 1; i <= 3000; ++i) CHECK_FALSE(run_at(i));
        if (rc.kind == RunClassification::Kind::finitely_many) {
          CHECK(run_at(rc.bound));
        }
      }
    }
  }
}

TEST_CASE("arbitrarily long runs only with growing blocks or cofinite part") {
  CHECK(GroundSet::parse("blocks(10,3,2,1)").arbitrarily_long_runs());
  CHECK(GroundSet::parse("all").arbitrarily_long_runs());
  CHECK(GroundSet::parse("seg(3)\\fin{5}").arbitrarily_long_runs());
  CHECK_FALSE(GroundSet::parse("ap(0,2)").arbitrarily_long_runs());
  CHECK_FALSE(GroundSet::parse("blocks(10,4,3,0)").arbitrarily_long_runs());
}

TEST_CASE("cofinite tail detection") {
  CHECK(GroundSet::parse("all").cofinite_from() == 0);
  CHECK(GroundSet::parse("seg(3)\\fin{5}").cofinite_from() == 6);
  CHECK_FALSE(GroundSet::parse("ap(0,2)").cofinite_from().has_value());
  CHECK_FALSE(GroundSet::parse("blocks(10,3,2,1)").cofinite_from().has_value());
  // growing blocks whose gaps the periodic part always covers
  GroundSet glued = GroundSet::parse("blocks(0,1,1,1)|ap(1,3)|ap(2,3)");
  auto cf = glued.cofinite_from();
  REQUIRE(cf.has_value());
  for (Nat x = *cf; x <= *cf + 2000; ++x) CHECK(glued.contains(x));
  // growing blocks against evens: gap parities alternate, holes recur
  GroundSet unglued = GroundSet::parse("ap(0,2)|blocks(9,2,2,1)");
  CHECK_FALSE(unglued.cofinite_from().has_value());
}

TEST_CASE("union of two growing blocks components is rejected") {
  CHECK_THROWS_AS(GroundSet::parse("blocks(10,3,2,1)|blocks(20,5,1,1)"),
                  RejectError);
}

TEST_CASE("invalid constructor parameters are rejected") {
  CHECK_THROWS_AS(GroundSet::parse("ap(3,0)"), RejectError);
  CHECK_THROWS_AS(GroundSet::parse("blocks(1,0,2,1)"), RejectError);
  CHECK_THROWS_AS(GroundSet::parse("blocks(1,2,0,1)"), RejectError);
}

TEST_CASE("parse errors carry positions") {
  try {
    GroundSet::parse("ap(1,2)|bogus");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.pos >= 8);
  }
}

TEST_CASE("finite sets are not infinite") {
  GroundSet f = GroundSet::parse("fin{1,2,3}");
  CHECK_FALSE(f.is_infinite());
  CHECK(f.contains(2));
  CHECK(f.min_above(1) == 2);
  CHECK_THROWS_AS(f.min_above(3), PrecondError);
}

TEST_CASE("count_below") {
  GroundSet g = GroundSet::parse("ap(0,2)");
  CHECK(g.count_below(10, 100) == 5);
  CHECK(g.count_below(10, 3) == 3);  // capped
}

TEST_CASE("random ground sets accept membership and tails coherently") {
  testutil::Rng rng(31337);
  for (int i = 0; i < 200; ++i) {
    GroundSet g = testutil::random_groundset(rng);
    Nat cur = -1;
    for (int j = 0; j < 30; ++j) {
      Nat nxt = g.min_above(cur);
      CHECK(g.contains(nxt));
      for (Nat x = cur + 1; x < nxt; ++x) CHECK_FALSE(g.contains(x));
      cur = nxt;
    }
  }
}

TEST_SUITE_END();
