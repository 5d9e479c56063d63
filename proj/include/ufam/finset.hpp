#pragma once

#include <compare>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "ufam/common.hpp"

namespace ufam {

/// Finite strictly increasing set of naturals (possibly empty).
/// max of the empty set is the sentinel -1.
class FinSet {
 public:
  FinSet() = default;
  explicit FinSet(std::vector<Nat> elems);  // validates strict increase
  FinSet(std::initializer_list<Nat> elems);

  const std::vector<Nat>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  bool contains(Nat x) const;

  Nat min_or(Nat sentinel = -1) const { return elems_.empty() ? sentinel : elems_.front(); }
  Nat max_or(Nat sentinel = -1) const { return elems_.empty() ? sentinel : elems_.back(); }

  FinSet with_appended(Nat x) const;          // pre: x > max
  FinSet prefix(std::size_t count) const;     // first count elements
  FinSet drop_min() const;                    // pre: nonempty
  FinSet union_with(const FinSet& other) const;

  std::string str() const;                    // {2,5,9} / {}
  static FinSet parse(std::string_view text);

  friend bool operator==(const FinSet& a, const FinSet& b) { return a.elems_ == b.elems_; }

 private:
  std::vector<Nat> elems_;
};

/// Lexicographic order: s < t iff the least element of the symmetric
/// difference belongs to s. Total; equal iff identical.
std::strong_ordering lex_compare(const FinSet& s, const FinSet& t);

/// True iff s = t restricted to an initial interval [0, n]; the empty set is
/// an initial segment of everything.
bool is_initial_segment(const FinSet& s, const FinSet& t);

/// Decomposition t = u + {p, p+1, ..., p+m} where the interval is the maximal
/// terminal run of consecutive integers in t; hence p-1 is not in t and
/// max(u) < p-1.
struct TerminalRun {
  FinSet u;
  Nat p{0};
  Nat m{0};
};

TerminalRun decompose_terminal_run(const FinSet& t);  // pre: t nonempty

}  // namespace ufam
