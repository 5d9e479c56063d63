#include "ufam/ordinal.hpp"

#include <algorithm>

#include "ufam/parse_util.hpp"

namespace ufam {

Ordinal Ordinal::natural(Nat n) {
  if (n < 0) throw PrecondError("ordinals carry no negative values");
  Ordinal o;
  if (n > 0) o.terms_.push_back(Term{Ordinal(), n});
  return o;
}

Ordinal Ordinal::omega() { return omega_pow(natural(1)); }

Ordinal Ordinal::omega_pow(const Ordinal& e, Nat coefficient) {
  if (coefficient < 1) throw PrecondError("coefficient must be >= 1");
  Ordinal o;
  o.terms_.push_back(Term{e, coefficient});
  return o;
}

bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

Nat Ordinal::finite_value() const {
  if (!is_finite()) throw PrecondError("ordinal is not finite");
  return terms_.empty() ? 0 : terms_[0].coefficient;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = a.terms_[i].exponent <=> b.terms_[i].exponent;
    if (c != 0) return c;
    auto d = a.terms_[i].coefficient <=> b.terms_[i].coefficient;
    if (d != 0) return d;
  }
  // A strict prefix is strictly smaller: the extra terms are a positive tail.
  return a.terms_.size() <=> b.terms_.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) { return (a <=> b) == 0; }

Ordinal::Kind Ordinal::classify() const {
  if (terms_.empty()) return Kind::zero;
  return terms_.back().exponent.is_zero() ? Kind::successor : Kind::limit;
}

Ordinal Ordinal::predecessor() const {
  if (classify() != Kind::successor)
    throw PrecondError("predecessor of a non-successor ordinal");
  Ordinal r = *this;
  if (r.terms_.back().coefficient > 1)
    r.terms_.back().coefficient -= 1;
  else
    r.terms_.pop_back();
  return r;
}

bool Ordinal::is_indecomposable() const {
  if (is_zero())
    throw PrecondError("indecomposability is defined for nonzero ordinals");
  return terms_.size() == 1 && terms_[0].coefficient == 1;
}

Ordinal ord_add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& lead = b.terms()[0].exponent;
  Ordinal r;
  // keep a's terms strictly above b's leading exponent
  std::size_t i = 0;
  while (i < a.terms().size() && a.terms()[i].exponent > lead) {
    r.terms_.push_back(a.terms()[i]);
    ++i;
  }
  Ordinal::Term head = b.terms()[0];
  if (i < a.terms().size() && a.terms()[i].exponent == lead)
    head.coefficient += a.terms()[i].coefficient;
  r.terms_.push_back(head);
  r.terms_.insert(r.terms_.end(), b.terms().begin() + 1, b.terms().end());
  return r;
}

Ordinal ord_mul_omega(const Ordinal& a) {
  if (a.is_zero()) throw PrecondError("0 * omega is not used here; argument must be positive");
  return Ordinal::omega_pow(ord_add(a.terms()[0].exponent, Ordinal::natural(1)));
}

namespace {

// textual form: terms largest first, '+'-separated; a term is NAT, or
// w[^ATOM][*NAT] where ATOM is NAT, w, or a parenthesized ordinal.
void print_ordinal(const Ordinal& o, std::string& out) {
  if (o.is_zero()) {
    out += '0';
    return;
  }
  bool first = true;
  for (const auto& t : o.terms()) {
    if (!first) out += '+';
    first = false;
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coefficient);
      continue;
    }
    out += 'w';
    if (!(t.exponent == Ordinal::natural(1))) {
      out += '^';
      if (t.exponent.is_finite()) {
        out += std::to_string(t.exponent.finite_value());
      } else if (t.exponent == Ordinal::omega()) {
        out += 'w';
      } else {
        out += '(';
        print_ordinal(t.exponent, out);
        out += ')';
      }
    }
    if (t.coefficient != 1) {
      out += '*';
      out += std::to_string(t.coefficient);
    }
  }
}

Ordinal parse_ordinal_expr(Cursor& c);

Ordinal parse_exponent_atom(Cursor& c) {
  c.skip_ws();
  if (c.accept('(')) {
    Ordinal e = parse_ordinal_expr(c);
    c.expect(')');
    return e;
  }
  if (c.accept_word("w")) return Ordinal::omega();
  return Ordinal::natural(c.nat());
}

Ordinal parse_ordinal_expr(Cursor& c) {
  std::vector<Ordinal::Term> terms;
  bool saw_zero = false;
  while (true) {
    c.skip_ws();
    Ordinal::Term t{Ordinal(), 1};
    if (c.accept_word("w")) {
      t.exponent = Ordinal::natural(1);
      if (c.accept('^')) t.exponent = parse_exponent_atom(c);
      if (c.accept('*')) t.coefficient = c.nat();
      if (t.coefficient < 1) c.fail("coefficient must be >= 1");
    } else {
      Nat n = c.nat();
      if (n == 0) {
        if (!terms.empty()) c.fail("'0' cannot follow other terms");
        saw_zero = true;
      }
      t.exponent = Ordinal();
      t.coefficient = n;
    }
    if (!saw_zero) {
      if (!terms.empty() && !(t.exponent < terms.back().exponent))
        c.fail("exponents must be strictly decreasing");
      terms.push_back(t);
    }
    if (!c.accept('+')) break;
    if (saw_zero) c.fail("'0' cannot be followed by '+'");
  }
  Ordinal out;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it)
    out = ord_add(Ordinal::omega_pow(it->exponent, it->coefficient), out);
  return out;
}

}  // namespace

std::string Ordinal::str() const {
  std::string out;
  print_ordinal(*this, out);
  return out;
}

Ordinal Ordinal::parse(std::string_view text) {
  Cursor c(text);
  Ordinal o = parse_ordinal_expr(c);
  c.expect_end();
  return o;
}

}  // namespace ufam
