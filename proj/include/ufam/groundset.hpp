#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ufam/common.hpp"
#include "ufam/finset.hpp"

namespace ufam {

/// Classification of the starts i with {i, ..., i+l-1} contained in M.
/// none_beyond: no run start anywhere (bound is a horizon above which this is
/// certified directly). finitely_many: at least one start, none above bound.
struct RunClassification {
  enum class Kind { none_beyond, finitely_many, infinitely_many };
  Kind kind{Kind::none_beyond};
  bool arbitrarily_long{false};
  Nat bound{0};
};

/// Result of the anchored-interval analysis: the starts n in M with
/// {n, ..., n+len(n)-1} contained in M, for a nondecreasing length function
/// with len(n) > n. Either a complete finite candidate list, or all elements
/// of M from `infinite_from` on qualify (cofinite ground sets).
struct AnchoredStarts {
  std::vector<Nat> finite_candidates;  // sorted, exhaustive when !infinite
  bool infinite{false};
  Nat infinite_from{0};
};

/// Finitely described subset of the naturals with decidable membership,
/// tails, and exact run-structure predicates. Every accepted value is held in
/// the normal form
///   finite include set  |  ultimately periodic part  |  one growing blocks
///   part, minus a finite exclude set,
/// with includes disjoint from the rest and excludes inside the infinite
/// support. Expressions that defeat this normal form are rejected with a
/// diagnostic at construction.
class GroundSet {
 public:
  struct PeriodicPart {
    Nat period{0};
    std::vector<char> residue_mask;  // size period
    std::vector<Nat> residues;       // sorted members of the mask
    Nat threshold{0};                // applies to x >= threshold
  };
  // k-th block is [start_k, start_k + len0 + len_step*k) with
  // start_{k+1} = start_k + len_k + gap; len_step >= 1 here (constant-length
  // blocks normalize into the periodic part).
  struct BlocksPart {
    Nat start{0}, gap{1}, len0{1}, len_step{1};
    Nat block_start(Nat k) const {
      return start + k * (len0 + gap) + len_step * k * (k - 1) / 2;
    }
    Nat block_len(Nat k) const { return len0 + len_step * k; }
  };

  GroundSet() = default;  // empty set

  static GroundSet parse(std::string_view dsl);
  static GroundSet final_segment(Nat n);
  static GroundSet finite(const FinSet& f);
  static GroundSet arithmetic(Nat first, Nat step);
  static GroundSet blocks(Nat start, Nat gap, Nat len0, Nat len_step);

  GroundSet union_with(const GroundSet& other) const;
  GroundSet minus_finite(const FinSet& f) const;
  GroundSet cut_above(Nat n) const;  // intersection with (n, infinity)

  bool contains(Nat x) const;
  bool is_infinite() const;
  bool empty() const;
  bool has_element_above(Nat k) const;
  Nat min_above(Nat k) const;  // least element > k; pre: one exists

  /// Exact classification of runs of length >= l (l >= 1).
  RunClassification runs(Nat l) const;
  bool arbitrarily_long_runs() const;

  /// Least T with [T, infinity) contained in M, when M has a cofinite tail.
  std::optional<Nat> cofinite_from() const { return cofinite_from_; }

  /// Number of elements < x, counting at most cap.
  Nat count_below(Nat x, Nat cap) const;

  /// All maximal intervals [a, b] of consecutive members intersecting
  /// [0, horizon], reported as (a, b) pairs (b may exceed horizon).
  std::vector<std::pair<Nat, Nat>> maximal_runs_up_to(Nat horizon) const;

  /// Anchored-interval analysis; len must be nondecreasing with len(n) > n.
  /// Candidates below `floor` are not reported. Throws RejectError when the
  /// normal form cannot certify the answer within budget.
  AnchoredStarts anchored_starts(const std::function<Nat(Nat)>& len, Nat floor) const;

  std::string str() const;  // canonical normal-form DSL (reparseable)

  const std::optional<PeriodicPart>& periodic() const { return periodic_; }
  const std::optional<BlocksPart>& growing_blocks() const { return blocks_; }
  const std::vector<Nat>& includes() const { return include_; }
  const std::vector<Nat>& excludes() const { return exclude_; }

 private:
  std::vector<Nat> include_;
  std::vector<Nat> exclude_;
  std::optional<PeriodicPart> periodic_;
  std::optional<BlocksPart> blocks_;
  std::optional<Nat> cofinite_from_;
  // for blocks+periodic mixes: bound on consecutive periodic-covered gaps
  std::optional<Nat> glue_streak_cap_;

  void canonicalize();
  void compute_cofinite();
  bool infinite_part_contains(Nat x) const;
  std::optional<Nat> infinite_part_min_above(Nat k) const;
  bool excluded(Nat x) const;
  // largest circular streak of consecutive residues inside the mask; period
  // if the mask is full
  Nat periodic_streak() const;
  Nat scan_base() const;  // beyond this, membership is purely periodic/blocks
};

}  // namespace ufam
