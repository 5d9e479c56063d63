#include "doctest.h"

#include "test_util.hpp"
#include "ufam/adequacy.hpp"

using namespace ufam;
namespace tu = testutil;

namespace {
FamilyBuilder FB(const char* s) { return FamilyBuilder::parse(s); }
GroundSet GS(const char* s) { return GroundSet::parse(s); }

// the witness construction: a tail block around k glued onto a set with
// arbitrarily long runs placed far above
const char* kAnchored = "fin{5,6,7,8,9,10,11,12,13,14}|blocks(100,3,2,1)";
}  // namespace

TEST_SUITE_BEGIN("adequacy");

TEST_CASE("omega adequacy is the arbitrarily-long-run predicate") {
  CHECK(is_omega_adequate(GS("blocks(10,3,2,1)")));
  CHECK_FALSE(is_omega_adequate(GS("ap(0,2)")));
  CHECK(is_omega_adequate(GS("all")));
  CHECK_FALSE(is_omega_adequate(GS("blocks(10,4,3,0)")));
}

TEST_CASE("witness set membership") {
  CHECK(m_set_contains(FB("pow(2)"), GS("fin{4,5,6}|ap(11,2)"), 4));
  CHECK_FALSE(m_set_contains(FB("pow(2)"), GS("ap(0,2)"), 4));
  CHECK(m_set_contains(FB("sum(diag(n),pow(1))"), GS(kAnchored), 5));
  CHECK_FALSE(m_set_contains(FB("sum(diag(n),pow(1))"), GS(kAnchored), 6));
  CHECK_THROWS_AS(m_set_contains(FB("schreier"), GS("all"), 3), PrecondError);
  CHECK_THROWS_AS(m_set_contains(FB("pow(2)"), GS("ap(0,2)"), 3), PrecondError);
}

TEST_CASE("rank-2 adequacy needs three consecutive members") {
  auto t = is_adequate(FB("pow(2)"), GS("fin{4,5,6}|ap(11,2)"));
  CHECK(t.verdict);
  CHECK(t.kase == AdequacyTranscript::Case::rank2);
  CHECK(t.certified);
  REQUIRE(!t.witnesses.empty());
  CHECK(t.witnesses[0].n == 4);

  t = is_adequate(FB("pow(2)"), GS("ap(0,2)"));
  CHECK_FALSE(t.verdict);
  CHECK(t.certified);
}

TEST_CASE("finite ranks beyond two add the infinitely-many-runs clause") {
  // a single window of three consecutive members is enough one level down
  GroundSet single = GS("fin{4,5,6}|ap(11,2)");
  CHECK(is_adequate(FB("pow(2)"), single).verdict);
  CHECK_FALSE(is_adequate(FB("pow(3)"), single).verdict);

  GroundSet rich = GS("fin{4,5,6,7}|blocks(11,4,3,0)");
  auto t = is_adequate(FB("pow(3)"), rich);
  CHECK(t.verdict);
  CHECK(t.kase == AdequacyTranscript::Case::successor);
  REQUIRE(!t.witnesses.empty());
  CHECK(t.witnesses[0].n == 4);
  REQUIRE(t.witnesses[0].sub);
  CHECK(t.witnesses[0].sub->verdict);
  // needs a window of five members and infinitely many of four
  CHECK_FALSE(is_adequate(FB("pow(4)"), rich).verdict);
}

TEST_CASE("omega-uniform adequacy coincides with omega adequacy on the catalog") {
  for (const char* bs : {"schreier", "diag(2n+1)", "sum(pow(2),schreier)"}) {
    for (const auto& src : tu::catalog_sources()) {
      CAPTURE(std::string(bs));
      CAPTURE(src);
      GroundSet M = GS(src.c_str());
      auto t = is_adequate(FB(bs), M);
      CHECK(t.verdict == is_omega_adequate(M));
      CHECK(t.kase == AdequacyTranscript::Case::limit);
      CHECK(t.certified);
      if (t.verdict) CHECK(!t.witnesses.empty());
    }
  }
}

TEST_CASE("successor of omega: anchored witness with an adequate tail") {
  auto t = is_adequate(FB("sum(diag(n),pow(1))"), GS(kAnchored));
  CHECK(t.verdict);
  CHECK(t.kase == AdequacyTranscript::Case::successor);
  CHECK(t.certified);
  REQUIRE(!t.witnesses.empty());
  CHECK(t.witnesses[0].n == 5);
  REQUIRE(t.witnesses[0].sub);
  CHECK(t.witnesses[0].sub->verdict);
  CHECK(t.witnesses[0].sub->kase == AdequacyTranscript::Case::limit);

  // growing blocks alone never contain their own minimal extensions
  t = is_adequate(FB("sum(diag(n),pow(1))"), GS("blocks(10,3,2,1)"));
  CHECK_FALSE(t.verdict);
  CHECK(t.certified);

  // an omega-adequate tail is not enough when the anchored interval is clipped
  GroundSet clipped = GS("fin{5,6,7,8,9,10,11,12,13}|blocks(100,3,2,1)");
  CHECK_FALSE(is_adequate(FB("sum(diag(n),pow(1))"), clipped).verdict);
}

TEST_CASE("limit ranks above omega require a cofinite tail") {
  auto t = is_adequate(FB("sum(diag(n),diag(n))"), GS("all"));
  CHECK(t.verdict);
  CHECK(t.kase == AdequacyTranscript::Case::limit);
  CHECK(t.certified);
  CHECK(!t.witnesses.empty());
  for (const auto& w : t.witnesses) {
    REQUIRE(w.sub);
    CHECK(w.sub->verdict);
  }
  CHECK(is_adequate(FB("iter(diag(n),n+1)"), GS("seg(7)\\fin{9}")).verdict);
  CHECK_FALSE(is_adequate(FB("sum(diag(n),diag(n))"), GS("blocks(10,3,2,1)")).verdict);
  CHECK_FALSE(is_adequate(FB("iter(diag(n),n+1)"), GS("ap(0,2)")).verdict);
}

TEST_CASE("rank below two is rejected") {
  CHECK_THROWS_AS(is_adequate(FB("pow(1)"), GS("all")), PrecondError);
  CHECK_THROWS_AS(is_adequate(FB("point"), GS("all")), PrecondError);
  CHECK_THROWS_AS(is_adequate(FB("pow(2)"), GS("fin{1,2,3}")), PrecondError);
}

TEST_CASE("adequacy is monotone under enlarging the ground set") {
  std::vector<const char*> builders = {"pow(2)", "pow(3)", "schreier",
                                       "sum(diag(n),pow(1))"};
  std::vector<std::pair<const char*, const char*>> pairs = {
      {"ap(0,2)", "ap(0,2)|ap(1,4)"},
      {"blocks(10,3,2,1)", "blocks(10,3,2,1)|fin{9}"},
      {"fin{4,5,6}|ap(11,2)", "fin{3,4,5,6}|ap(11,2)"},
      {"blocks(10,4,3,0)", "fin{30,31,32,33}|blocks(10,4,3,0)"},
      {"ap(1,3)|ap(2,3)", "all"},
  };
  for (const char* bs : builders) {
    for (auto [small, large] : pairs) {
      CAPTURE(std::string(bs));
      CAPTURE(std::string(small));
      if (is_adequate(FB(bs), GS(small)).verdict)
        CHECK(is_adequate(FB(bs), GS(large)).verdict);
    }
  }
}

TEST_CASE("adequate verdicts carry verified witness chains") {
  for (const char* bs : {"pow(2)", "pow(3)", "schreier", "sum(diag(n),pow(1))"}) {
    for (const auto& src : tu::catalog_sources()) {
      GroundSet M = GS(src.c_str());
      auto t = is_adequate(FB(bs), M);
      if (!t.verdict) continue;
      CHECK(!t.witnesses.empty());
      for (const auto& w : t.witnesses)
        if (w.sub) CHECK(w.sub->verdict);
      // the first successor witness is a genuine member of the witness set
      if (t.kase == AdequacyTranscript::Case::successor && t.witnesses[0].n) {
        Ordinal rank = FB(bs).uniform_rank();
        if (rank.classify() == Ordinal::Kind::successor)
          CHECK(m_set_contains(FB(bs), M, *t.witnesses[0].n));
      }
    }
  }
}

TEST_SUITE_END();
