#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ufam/common.hpp"
#include "ufam/finset.hpp"
#include "ufam/groundset.hpp"
#include "ufam/ordinal.hpp"

namespace ufam {

/// Affine map n -> a*n + b on the naturals. Strictly increasing iff a >= 1.
struct Affine {
  Nat a{0}, b{0};
  Nat operator()(Nat n) const { return a * n + b; }
  bool strictly_increasing() const { return a >= 1; }
  std::string str() const;
};

class FamilyExpr;
using ExprPtr = std::shared_ptr<const FamilyExpr>;

/// Expression node denoting a uniform family on an arbitrary final segment.
///   point        {empty set}, rank 0
///   pow(k)       k-element subsets, rank k
///   diag(f)      section at n is pow(f(n)); rank omega (f strictly increasing)
///   sum(F, G)    {s+t : s in G, t in F, max(s) < min(t)}; rank(F) + rank(G)
///   iter(B, f)   section at n is the f(n)-fold sum chain of B; rank(B)*omega
class FamilyExpr {
 public:
  struct Point {};
  struct Pow {
    Nat k;
  };
  struct Diag {
    Affine f;
  };
  struct Sum {
    ExprPtr upper;  // F: the part appended on top
    ExprPtr lower;  // G: the initial part, consumed first
  };
  struct Iter {
    ExprPtr body;
    Affine reps;
  };
  using Node = std::variant<Point, Pow, Diag, Sum, Iter>;

  explicit FamilyExpr(Node n) : node_(std::move(n)) {}
  const Node& node() const { return node_; }

  static ExprPtr point();
  static ExprPtr pow(Nat k);                    // k >= 1
  static ExprPtr diag(Affine f);                // f strictly increasing
  static ExprPtr sum(ExprPtr upper, ExprPtr lower);  // point operands collapse
  static ExprPtr iter(ExprPtr body, Affine f);  // body != point, f increasing

  /// m-fold sum chain of body (m = 0 gives point).
  static ExprPtr chain(ExprPtr body, Nat m);

 private:
  Node node_;
};

bool expr_is_point(const ExprPtr& e);
Ordinal uniform_rank(const ExprPtr& e);
/// Section F_{n}: builder for {s : {n} + s in F, n < min(s)}.
ExprPtr section(const ExprPtr& e, Nat n);  // pre: e != point
std::string expr_str(const ExprPtr& e);

/// A uniform family presented as an expression together with the start of the
/// final segment it lives on. Immutable value type.
class FamilyBuilder {
 public:
  FamilyBuilder() : base_(0), expr_(FamilyExpr::point()) {}
  FamilyBuilder(ExprPtr expr, Nat base = 0);

  static FamilyBuilder parse(std::string_view dsl);
  static FamilyBuilder schreier();  // diag(n) on base 0

  Nat base() const { return base_; }
  const ExprPtr& expr() const { return expr_; }
  bool is_point() const { return expr_is_point(expr_); }
  std::string str() const;

  Ordinal uniform_rank() const { return ufam::uniform_rank(expr_); }

  /// F -> F_{n} as a builder on base n+1. pre: n >= base, family not point.
  FamilyBuilder restrict_step(Nat n) const;

  /// Membership in F (no ground-set restriction).
  bool member(const FinSet& t) const;
  bool member_restricted(const FinSet& t, const GroundSet& M) const;

  /// t_n: the unique member that is an initial segment of {n, n+1, ...};
  /// always an interval. pre: n >= base.
  FinSet t_min(Nat n) const;
  /// |t_n| without materializing; saturates at the cap (returns cap+1).
  Nat t_min_length(Nat n, Nat cap = Nat{1} << 40) const;

  /// Least member of F|M extending the proper prefix w (w inside M).
  /// Rejects w already in F, w not a prefix of any member, or w not in M.
  FinSet min_completion(const FinSet& w, const GroundSet& M) const;

  /// Like min_completion but w may already be a member (returned unchanged).
  FinSet complete_prefix(const FinSet& w, const GroundSet& M) const;

  /// Least member of F|M. pre: M infinite (above base).
  FinSet least_member(const GroundSet& M) const;

  /// Immediate lexicographic successor of t within F|M. pre: t in F|M.
  FinSet lex_next(const FinSet& t, const GroundSet& M) const;

  /// Ordinal position of t in (F|M, <lex). pre: t in F|M.
  Ordinal lex_rank(const FinSet& t, const GroundSet& M) const;

  /// Finite u inside M with F_u of finite uniform rank >= k, found by
  /// descending along M. pre: rank >= omega. Elements are taken above floor.
  FinSet finite_rank_reduction(const GroundSet& M, Nat k, Nat floor = -1) const;

  /// First `count` members of F|M in lexicographic order (successor chain).
  std::vector<FinSet> enumerate(const GroundSet& M, std::size_t count) const;

  /// Lexicographically ascending members of F|M with min > min_gt and
  /// max <= max_le, at most `count` of them.
  std::vector<FinSet> enumerate_bounded(const GroundSet& M, std::size_t count,
                                        Nat min_gt, Nat max_le) const;

 private:
  Nat base_;
  ExprPtr expr_;

  FinSet complete_down(ExprPtr cur, FinSet prefix, const GroundSet& M) const;
};

}  // namespace ufam
