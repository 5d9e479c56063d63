#pragma once

#include <string>
#include <vector>

#include "ufam/adequacy.hpp"
#include "ufam/common.hpp"
#include "ufam/family.hpp"
#include "ufam/finset.hpp"
#include "ufam/groundset.hpp"
#include "ufam/ordinal.hpp"

namespace ufam {

enum class LimitReason {
  ok,
  terminal_run_too_short,
  predecessor_not_in_m,
  min_too_small_unsupported,
};

const char* limit_reason_name(LimitReason r);

/// Verdict of the limit-point characterization for t inside F|M.
/// is_limit implies reason == ok, run.m >= 1 and run.p - 1 in M.
struct LimitVerdict {
  bool is_limit{false};
  TerminalRun run;
  LimitReason reason{LimitReason::ok};
};

/// Characterization-based limit-point test. pre: t in F|M. Points with
/// min(t) <= 1 are not claimed either way (reason min_too_small_unsupported).
LimitVerdict is_limit_point(const FamilyBuilder& B, const GroundSet& M,
                            const FinSet& t);

/// Constructs up to `count` members u + {p-1} + v_i of F|M converging to t
/// from below, with strictly increasing min(v_i). A full list for every count
/// certifies limit-point status independently of the characterization.
std::vector<FinSet> witness_oracle(const FamilyBuilder& B, const GroundSet& M,
                                   const FinSet& t, Nat count);

/// Exact membership of t in the l-th derivative of the restriction of the
/// k-element family. pre: 2 <= l < k, t in M^[k].
bool finite_derivative_member_pow(Nat k, const GroundSet& M, const FinSet& t,
                                  Nat l);

/// One-sided sufficiency for t in the l-th derivative of F|M: true only when
/// every premise is verified. pre: l >= 1, t in F|M.
bool finite_derivative_sufficient(const FamilyBuilder& B, const GroundSet& M,
                                  const FinSet& t, Nat l);

/// Result of the k-element-family index computation. The full index k is
/// certified exactly; lower indices are derived from the level
/// characterizations and flagged certified=false.
struct CbPowResult {
  Nat k{0};
  Nat index{0};
  bool certified{false};
  Nat level_lower{0};
  Nat level_upper{0};
  bool clause_long_run{false};         // some {p-1, ..., p+k-1} inside M
  bool clause_infinitely_many{false};  // infinitely many k-element runs
  std::vector<std::string> violated;
};

CbPowResult cb_index_pow(Nat k, const GroundSet& M);  // pre: k > 2, M infinite

/// Whether F|M has index omega, decided through adequacy. pre: rank == omega.
bool cb_index_omega(const FamilyBuilder& B, const GroundSet& M);

/// Index of F|M for an adequate M: the uniform rank, with the adequacy
/// transcript as certificate. Rejects non-adequate M.
Ordinal cb_index_adequate(const FamilyBuilder& B, const GroundSet& M,
                          AdequacyTranscript* transcript = nullptr);

/// A member of F|M that is provably not a limit point, built by reducing to a
/// 2-uniform tail and leaving a singleton terminal run. pre: rank >= 2.
FinSet nash_williams_demo(const FamilyBuilder& B, const GroundSet& M);

}  // namespace ufam
