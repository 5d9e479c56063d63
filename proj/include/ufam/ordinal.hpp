#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "ufam/common.hpp"

namespace ufam {

/// Ordinal in Cantor normal form below epsilon_0: a sum of terms w^e * c with
/// exponents strictly decreasing and coefficients >= 1. The empty sum is 0.
/// Values are immutable and canonical: equal iff the term lists are identical.
class Ordinal {
 public:
  struct Term;  // defined below, recursive through Ordinal
  using TermList = std::vector<Term>;

  enum class Kind { zero, successor, limit };

  Ordinal() = default;  // zero

  static Ordinal natural(Nat n);
  static Ordinal omega();
  static Ordinal omega_pow(const Ordinal& e, Nat coefficient = 1);

  const TermList& terms() const;
  bool is_zero() const;
  bool is_finite() const;
  Nat finite_value() const;  // pre: is_finite()

  Kind classify() const;
  Ordinal predecessor() const;     // pre: classify() == successor
  bool is_indecomposable() const;  // pre: nonzero; true iff a single w^e term

  std::string str() const;
  static Ordinal parse(std::string_view text);

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);
  friend Ordinal ord_add(const Ordinal& a, const Ordinal& b);
  friend Ordinal ord_mul_omega(const Ordinal& a);

 private:
  TermList terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  Nat coefficient;
};

inline const Ordinal::TermList& Ordinal::terms() const { return terms_; }
inline bool Ordinal::is_zero() const { return terms_.empty(); }

/// Ordinal sum a + b, with the usual left absorption of terms of a below the
/// leading exponent of b.
Ordinal ord_add(const Ordinal& a, const Ordinal& b);

/// a * omega = w^(e+1) where e is the leading exponent of a. pre: a > 0.
Ordinal ord_mul_omega(const Ordinal& a);

}  // namespace ufam
