#include "doctest.h"

#include "test_util.hpp"
#include "ufam/derivative.hpp"

using namespace ufam;
namespace tu = testutil;

namespace {
FamilyBuilder FB(const char* s) { return FamilyBuilder::parse(s); }
GroundSet GS(const char* s) { return GroundSet::parse(s); }
}  // namespace

TEST_SUITE_BEGIN("derivative");

TEST_CASE("limit point characterization basics") {
  auto v = is_limit_point(FB("pow(2)"), GS("all"), FinSet{3, 4});
  CHECK(v.is_limit);
  CHECK(v.reason == LimitReason::ok);
  CHECK(v.run.u.empty());
  CHECK(v.run.p == 3);
  CHECK(v.run.m == 1);

  v = is_limit_point(FB("schreier"), GS("ap(0,2)"), FinSet{2, 4, 6});
  CHECK_FALSE(v.is_limit);
  CHECK(v.reason == LimitReason::terminal_run_too_short);

  v = is_limit_point(FB("pow(3)"), GS("fin{4,5}|cut(ap(0,2),6)"), FinSet{4, 5, 8});
  CHECK_FALSE(v.is_limit);
  CHECK(v.reason == LimitReason::terminal_run_too_short);

  // run long enough but the predecessor is missing
  v = is_limit_point(FB("pow(2)"), GS("fin{3,4}|ap(7,3)"), FinSet{3, 4});
  CHECK_FALSE(v.is_limit);
  CHECK(v.reason == LimitReason::predecessor_not_in_m);

  v = is_limit_point(FB("pow(2)"), GS("all"), FinSet{0, 1});
  CHECK_FALSE(v.is_limit);
  CHECK(v.reason == LimitReason::min_too_small_unsupported);

  CHECK_THROWS_AS(is_limit_point(FB("pow(2)"), GS("all"), FinSet{1, 2, 3}),
                  PrecondError);
  CHECK_THROWS_AS(is_limit_point(FB("pow(2)"), GS("ap(0,2)"), FinSet{3, 4}),
                  PrecondError);  // not inside M
}

TEST_CASE("witness oracle constructs converging members") {
  auto ws = witness_oracle(FB("pow(2)"), GS("all"), FinSet{3, 4}, 3);
  REQUIRE(ws.size() == 3);
  CHECK(ws[0] == FinSet{2, 5});
  CHECK(ws[1] == FinSet{2, 6});
  CHECK(ws[2] == FinSet{2, 7});

  CHECK(witness_oracle(FB("schreier"), GS("ap(0,2)"), FinSet{2, 4, 6}, 3).empty());
  CHECK(witness_oracle(FB("pow(2)"), GS("all"), FinSet{0, 1}, 5).empty());
}

TEST_CASE("witness shape follows the convergence lemma") {
  FamilyBuilder b = FB("schreier");
  GroundSet all = GS("all");
  FinSet t{4, 5, 6, 7, 8};  // terminal run from p = 4, u empty
  auto ws = witness_oracle(b, all, t, 8);
  REQUIRE(ws.size() == 8);
  FinSet prev;
  for (const auto& s : ws) {
    CHECK(b.member_restricted(s, all));
    CHECK(s.min_or() == 3);  // p - 1
    CHECK(lex_compare(s, t) == std::strong_ordering::less);
    if (!prev.empty()) CHECK(lex_compare(prev, s) == std::strong_ordering::less);
    prev = s;
  }
  // strictly increasing tails certify convergence from below
  for (std::size_t i = 1; i < ws.size(); ++i)
    CHECK(ws[i].elements()[1] > ws[i - 1].elements()[1]);
}

TEST_CASE("characterization agrees with the oracle on enumerated members") {
  std::vector<const char*> builders = {"pow(2)", "pow(3)", "schreier",
                                       "sum(diag(n),pow(1))"};
  for (const char* bs : builders) {
    FamilyBuilder b = FB(bs);
    for (const auto& src : tu::catalog_sources()) {
      CAPTURE(std::string(bs));
      CAPTURE(src);
      GroundSet M = GS(src.c_str());
      auto members = b.enumerate_bounded(M, 80, 1, 64);
      for (const auto& t : members) {
        bool characterized = is_limit_point(b, M, t).is_limit;
        bool certified = witness_oracle(b, M, t, 10).size() == 10;
        CHECK(characterized == certified);
      }
    }
  }
}

TEST_CASE("finite derivative membership for k-element families") {
  CHECK(finite_derivative_member_pow(3, GS("all"), FinSet{5, 6, 7}, 2));
  CHECK_FALSE(finite_derivative_member_pow(3, GS("ap(0,2)"), FinSet{4, 6, 8}, 2));
  // inside a constant-length block, a terminal run of two cannot reach level 3
  GroundSet m = GS("fin{0,1,2,3,4,5,6,7,8,9}|blocks(15,3,4,0)");
  CHECK_FALSE(finite_derivative_member_pow(4, m, FinSet{2, 16, 17, 18}, 3));
  CHECK_THROWS_AS(finite_derivative_member_pow(3, GS("all"), FinSet{5, 6, 7}, 1),
                  PrecondError);
  CHECK_THROWS_AS(finite_derivative_member_pow(3, GS("all"), FinSet{5, 6, 7}, 3),
                  PrecondError);
  CHECK_THROWS_AS(finite_derivative_member_pow(3, GS("all"), FinSet{5, 6}, 2),
                  PrecondError);
}

TEST_CASE("level membership is monotone in the level") {
  GroundSet m = GS("all");
  for (Nat k : {4, 5}) {
    auto subsets = tu::subsets_of(m, 9, k);
    for (const auto& v : subsets) {
      if ((Nat)v.size() != k) continue;
      FinSet t(v);
      for (Nat l = 3; l < k; ++l)
        if (finite_derivative_member_pow(k, m, t, l))
          CHECK(finite_derivative_member_pow(k, m, t, l - 1));
    }
  }
}

TEST_CASE("level membership steps down through sections") {
  GroundSet m = GS("fin{2,3}|seg(5)");
  Nat k = 4, l = 2;
  auto subsets = tu::subsets_of(m, 14, k);
  for (const auto& v : subsets) {
    if ((Nat)v.size() != k) continue;
    FinSet t(v);
    if (!finite_derivative_member_pow(k, m, t, l)) continue;
    auto run = decompose_terminal_run(t);
    if (run.u.empty()) continue;  // t is a minimal extension, the other case
    Nat head = t.min_or();
    CHECK(finite_derivative_member_pow(k - 1, m.cut_above(head), t.drop_min(), l));
  }
}

TEST_CASE("verified sufficiency for general families") {
  // a member of the diagonal family whose terminal run sits inside a block
  GroundSet m = GS("blocks(10,3,2,1)");
  FinSet t{10, 11, 15, 16, 17, 22, 23, 29, 30, 31, 32};
  REQUIRE(FB("schreier").member_restricted(t, m));
  CHECK(finite_derivative_sufficient(FB("schreier"), m, t, 3));
  CHECK_FALSE(finite_derivative_sufficient(FB("schreier"), m, t, 4));  // m = 3
  CHECK_FALSE(finite_derivative_sufficient(FB("schreier"), GS("ap(0,2)"),
                                           FinSet{2, 4, 6}, 1));
  CHECK(finite_derivative_sufficient(FB("pow(2)"), GS("all"), FinSet{3, 4}, 1));
  CHECK(finite_derivative_sufficient(FB("pow(2)"), GS("all"), FinSet{3, 4}, 1) ==
        is_limit_point(FB("pow(2)"), GS("all"), FinSet{3, 4}).is_limit);
}

TEST_CASE("sufficiency implies the oracle succeeds at level one") {
  FamilyBuilder b = FB("schreier");
  for (const auto& src : tu::catalog_sources()) {
    GroundSet M = GS(src.c_str());
    for (const auto& t : b.enumerate_bounded(M, 40, 1, 48)) {
      if (finite_derivative_sufficient(b, M, t, 1))
        CHECK(witness_oracle(b, M, t, 5).size() == 5);
    }
  }
}

TEST_CASE("index of k-element restrictions: exact top case") {
  auto r = cb_index_pow(3, GS("all"));
  CHECK(r.index == 3);
  CHECK(r.certified);
  CHECK(r.violated.empty());

  r = cb_index_pow(3, GS("ap(0,2)"));
  CHECK(r.index == 1);
  CHECK_FALSE(r.certified);
  CHECK(r.violated.size() == 2);

  r = cb_index_pow(3, GS("blocks(10,4,3,0)"));
  CHECK(r.index == 2);
  CHECK_FALSE(r.certified);
  CHECK_FALSE(r.clause_long_run);
  CHECK(r.clause_infinitely_many);

  r = cb_index_pow(3, GS("fin{30,31,32,33}|blocks(10,4,3,0)"));
  CHECK(r.index == 3);
  CHECK(r.certified);

  r = cb_index_pow(4, GS("blocks(10,3,2,1)"));
  CHECK(r.index == 4);
  CHECK(r.certified);

  CHECK_THROWS_AS(cb_index_pow(2, GS("all")), PrecondError);
}

TEST_CASE("index omega equals adequacy for omega-uniform families") {
  CHECK(cb_index_omega(FB("schreier"), GS("blocks(10,3,2,1)")));
  CHECK_FALSE(cb_index_omega(FB("schreier"), GS("ap(0,2)")));
  CHECK(cb_index_omega(FB("schreier"), GS("all")));
  CHECK_THROWS_AS(cb_index_omega(FB("pow(2)"), GS("all")), PrecondError);
  for (const auto& src : tu::catalog_sources()) {
    GroundSet M = GS(src.c_str());
    for (const char* bs : {"schreier", "diag(2n+1)", "sum(pow(2),schreier)"})
      CHECK(cb_index_omega(FB(bs), M) == is_omega_adequate(M));
  }
}

TEST_CASE("index of adequate restrictions is the uniform rank") {
  CHECK(cb_index_adequate(FB("pow(2)"), GS("fin{4,5,6}|ap(11,2)")) ==
        Ordinal::natural(2));
  CHECK(cb_index_adequate(FB("schreier"), GS("blocks(10,3,2,1)")) ==
        Ordinal::omega());
  AdequacyTranscript tr;
  CHECK(cb_index_adequate(FB("sum(diag(n),pow(1))"),
                          GS("fin{5,6,7,8,9,10,11,12,13,14}|blocks(100,3,2,1)"),
                          &tr) == Ordinal::parse("w+1"));
  CHECK(tr.verdict);
  CHECK(tr.kase == AdequacyTranscript::Case::successor);
  CHECK_THROWS_AS(cb_index_adequate(FB("pow(2)"), GS("ap(0,2)")), PrecondError);
}

TEST_CASE("isolated members exist in every restriction") {
  CHECK(nash_williams_demo(FB("pow(2)"), GS("all")) == FinSet{2, 4});
  CHECK(nash_williams_demo(FB("schreier"), GS("all")) == FinSet{2, 3, 5});
  std::vector<const char*> builders = {"pow(2)", "pow(3)", "schreier",
                                       "sum(schreier,pow(1))", "sum(diag(n),pow(1))"};
  for (const char* bs : builders) {
    FamilyBuilder b = FB(bs);
    for (const auto& src : tu::catalog_sources()) {
      CAPTURE(std::string(bs));
      CAPTURE(src);
      GroundSet M = GS(src.c_str());
      FinSet t = nash_williams_demo(b, M);
      CHECK(b.member_restricted(t, M));
      auto v = is_limit_point(b, M, t);
      CHECK_FALSE(v.is_limit);
      CHECK(v.reason == LimitReason::terminal_run_too_short);
    }
  }
}

TEST_CASE("limit points commute with prepending a fixed head") {
  // with a gap after the head, the head does not affect the verdict
  FamilyBuilder b = FB("pow(3)");
  GroundSet all = GS("all");
  for (Nat head : {2, 3}) {
    FamilyBuilder bu = b.restrict_step(head);
    for (FinSet t : {FinSet{head + 2, head + 3}, FinSet{head + 3, head + 5},
                     FinSet{head + 4, head + 5}}) {
      auto whole = is_limit_point(b, all, FinSet{head}.union_with(t));
      auto part = is_limit_point(bu, all, t);
      CHECK(whole.is_limit == part.is_limit);
    }
  }
}

TEST_SUITE_END();
