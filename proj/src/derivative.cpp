#include "ufam/derivative.hpp"

#include <algorithm>

namespace ufam {

const char* limit_reason_name(LimitReason r) {
  switch (r) {
    case LimitReason::ok: return "ok";
    case LimitReason::terminal_run_too_short: return "terminal_run_too_short";
    case LimitReason::predecessor_not_in_m: return "predecessor_not_in_M";
    case LimitReason::min_too_small_unsupported: return "min_too_small_unsupported";
  }
  return "?";
}

LimitVerdict is_limit_point(const FamilyBuilder& B, const GroundSet& M,
                            const FinSet& t) {
  if (!B.member_restricted(t, M))
    throw PrecondError("limit-point test requires t in F|M");
  LimitVerdict v;
  v.run = decompose_terminal_run(t);
  if (t.min_or() <= 1) {
    v.reason = LimitReason::min_too_small_unsupported;
    return v;
  }
  // sanity: the terminal run must be the minimal extension of its head
  {
    FamilyBuilder fu = B;
    for (Nat x : v.run.u.elements()) fu = fu.restrict_step(x);
    FinSet tp = fu.t_min(v.run.p);
    if (!(v.run.u.union_with(tp) == t))
      throw PrecondError("member does not decompose as head + minimal extension");
  }
  if (v.run.m < 1) {
    v.reason = LimitReason::terminal_run_too_short;
    return v;
  }
  if (v.run.p - 1 < B.base() || !M.contains(v.run.p - 1)) {
    v.reason = LimitReason::predecessor_not_in_m;
    return v;
  }
  v.is_limit = true;
  return v;
}

std::vector<FinSet> witness_oracle(const FamilyBuilder& B, const GroundSet& M,
                                   const FinSet& t, Nat count) {
  if (!B.member_restricted(t, M))
    throw PrecondError("witness oracle requires t in F|M");
  std::vector<FinSet> out;
  TerminalRun run = decompose_terminal_run(t);
  if (run.p == 0 || run.p - 1 < B.base() || !M.contains(run.p - 1)) return out;
  ExprPtr cur = B.expr();
  for (Nat x : run.u.elements()) cur = section(cur, x);
  cur = section(cur, run.p - 1);
  if (expr_is_point(cur)) return out;  // head + {p-1} is itself a member
  FamilyBuilder fb(B.expr(), B.base());
  FinSet head = run.u.with_appended(run.p - 1);
  Nat q = t.max_or();
  for (Nat i = 0; i < count; ++i) {
    q = M.min_above(q);
    out.push_back(fb.complete_prefix(head.with_appended(q), M));
  }
  return out;
}

bool finite_derivative_member_pow(Nat k, const GroundSet& M, const FinSet& t,
                                  Nat l) {
  if (!(2 <= l && l < k))
    throw PrecondError("level must satisfy 2 <= l < k");
  if ((Nat)t.size() != k) throw PrecondError("t must have exactly k elements");
  for (Nat x : t.elements())
    if (!M.contains(x)) throw PrecondError("t must be a subset of M");
  TerminalRun run = decompose_terminal_run(t);
  if (run.m < l) return false;
  if (run.p == 0 || !M.contains(run.p - 1)) return false;
  return M.runs(l + 1).kind == RunClassification::Kind::infinitely_many;
}

bool finite_derivative_sufficient(const FamilyBuilder& B, const GroundSet& M,
                                  const FinSet& t, Nat l) {
  if (l < 1) throw PrecondError("level must be >= 1");
  if (!B.member_restricted(t, M))
    throw PrecondError("sufficiency test requires t in F|M");
  TerminalRun run = decompose_terminal_run(t);
  if (run.m < l) return false;
  if (run.p == 0 || run.p - 1 < B.base() || !M.contains(run.p - 1)) return false;
  ExprPtr cur = B.expr();
  for (Nat x : run.u.elements()) {
    if (expr_is_point(cur)) return false;
    cur = section(cur, x);
  }
  if (expr_is_point(cur)) return false;
  cur = section(cur, run.p - 1);
  if (uniform_rank(cur) < Ordinal::natural(l)) return false;
  return M.runs(l + 1).kind == RunClassification::Kind::infinitely_many;
}

namespace {

// Placement of a derivative-level witness: some p with {p-1, ..., p+m} in M,
// l <= m <= k-1, and k-1-m further elements of M available below p-1.
bool level_placed(Nat k, Nat l, const GroundSet& M) {
  auto longruns = M.runs(l + 2);
  if (longruns.kind == RunClassification::Kind::none_beyond) return false;
  if (longruns.kind == RunClassification::Kind::infinitely_many)
    return true;  // a late run leaves arbitrarily many elements below
  for (auto [a, b] : M.maximal_runs_up_to(longruns.bound)) {
    if (b - a + 1 < l + 2) continue;
    for (Nat q = a; q + l + 1 <= b; ++q) {  // q plays p-1
      Nat m = std::min<Nat>(k - 1, b - q - 1);
      if (m < l) continue;
      if (M.count_below(q, k) >= k - 1 - m) return true;
    }
  }
  return false;
}

bool level_nonempty(Nat k, Nat l, const GroundSet& M) {
  if (l >= 2 &&
      M.runs(l + 1).kind != RunClassification::Kind::infinitely_many)
    return false;
  return level_placed(k, l, M);
}

}  // namespace

CbPowResult cb_index_pow(Nat k, const GroundSet& M) {
  if (k <= 2) throw PrecondError("the index theorem applies for k > 2");
  if (!M.is_infinite()) throw PrecondError("M must be infinite");
  CbPowResult r;
  r.k = k;
  r.clause_long_run = M.runs(k + 1).kind != RunClassification::Kind::none_beyond;
  r.clause_infinitely_many =
      M.runs(k).kind == RunClassification::Kind::infinitely_many;
  if (r.clause_long_run && r.clause_infinitely_many) {
    r.index = k;
    r.certified = true;
    r.level_lower = r.level_upper = k - 1;
    return r;
  }
  if (!r.clause_long_run)
    r.violated.push_back("long_run_with_predecessor");
  if (!r.clause_infinitely_many)
    r.violated.push_back("infinitely_many_k_runs");
  Nat level = 0;
  for (Nat l = k - 1; l >= 1; --l) {
    if (level_nonempty(k, l, M)) {
      level = l;
      break;
    }
  }
  r.level_lower = r.level_upper = level;
  r.index = level + 1;
  r.certified = false;
  return r;
}

bool cb_index_omega(const FamilyBuilder& B, const GroundSet& M) {
  if (!(B.uniform_rank() == Ordinal::omega()))
    throw PrecondError("omega-index test requires an omega-uniform family");
  return is_adequate(B, M).verdict;
}

Ordinal cb_index_adequate(const FamilyBuilder& B, const GroundSet& M,
                          AdequacyTranscript* transcript) {
  AdequacyTranscript t = is_adequate(B, M);
  if (!t.verdict)
    throw PrecondError("ground set is not adequate for this family; no index claim");
  if (transcript) *transcript = std::move(t);
  return B.uniform_rank();
}

FinSet nash_williams_demo(const FamilyBuilder& B, const GroundSet& M) {
  Ordinal rank = B.uniform_rank();
  if (rank < Ordinal::natural(2))
    throw PrecondError("demo requires uniform rank >= 2");
  if (!M.is_infinite()) throw PrecondError("M must be infinite");
  FinSet u;
  if (!rank.is_finite()) u = B.finite_rank_reduction(M, 2, 1);
  ExprPtr cur = B.expr();
  for (Nat x : u.elements()) cur = section(cur, x);
  Nat lo = std::max<Nat>({1, B.base() - 1, u.max_or()});
  while (uniform_rank(cur).finite_value() > 2) {
    Nat n = M.min_above(lo);
    u = u.with_appended(n);
    cur = section(cur, n);
    lo = n;
  }
  Nat p = M.min_above(lo);
  Nat q = M.min_above(p + 1);  // q - 1 > p keeps the terminal run a singleton
  FinSet t = u.with_appended(p).with_appended(q);
  LimitVerdict v = is_limit_point(B, M, t);
  if (v.is_limit || v.reason != LimitReason::terminal_run_too_short)
    throw PrecondError("constructed witness failed verification");
  return t;
}

}  // namespace ufam
