#include "ufam/family.hpp"

#include <algorithm>

#include "ufam/parse_util.hpp"

namespace ufam {

std::string Affine::str() const {
  if (a == 0) return std::to_string(b);
  std::string s;
  if (a != 1) s += std::to_string(a);
  s += 'n';
  if (b != 0) s += "+" + std::to_string(b);
  return s;
}

ExprPtr FamilyExpr::point() {
  static const ExprPtr p = std::make_shared<const FamilyExpr>(Node{Point{}});
  return p;
}

ExprPtr FamilyExpr::pow(Nat k) {
  if (k < 1) throw PrecondError("pow(k) requires k >= 1");
  return std::make_shared<const FamilyExpr>(Node{Pow{k}});
}

ExprPtr FamilyExpr::diag(Affine f) {
  if (!f.strictly_increasing())
    throw PrecondError("diag requires a strictly increasing affine map");
  return std::make_shared<const FamilyExpr>(Node{Diag{f}});
}

ExprPtr FamilyExpr::sum(ExprPtr upper, ExprPtr lower) {
  if (expr_is_point(lower)) return upper;
  if (expr_is_point(upper)) return lower;
  return std::make_shared<const FamilyExpr>(Node{Sum{std::move(upper), std::move(lower)}});
}

ExprPtr FamilyExpr::iter(ExprPtr body, Affine f) {
  if (expr_is_point(body)) throw PrecondError("iter body must not be point");
  if (!f.strictly_increasing())
    throw PrecondError("iter requires a strictly increasing affine map");
  return std::make_shared<const FamilyExpr>(Node{Iter{std::move(body), f}});
}

ExprPtr FamilyExpr::chain(ExprPtr body, Nat m) {
  ExprPtr r = point();
  for (Nat i = 0; i < m; ++i) r = sum(r, body);
  return r;
}

bool expr_is_point(const ExprPtr& e) {
  return std::holds_alternative<FamilyExpr::Point>(e->node());
}

Ordinal uniform_rank(const ExprPtr& e) {
  return std::visit(
      [](const auto& n) -> Ordinal {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FamilyExpr::Point>) return Ordinal();
        if constexpr (std::is_same_v<T, FamilyExpr::Pow>)
          return Ordinal::natural(n.k);
        if constexpr (std::is_same_v<T, FamilyExpr::Diag>) return Ordinal::omega();
        if constexpr (std::is_same_v<T, FamilyExpr::Sum>)
          return ord_add(uniform_rank(n.upper), uniform_rank(n.lower));
        if constexpr (std::is_same_v<T, FamilyExpr::Iter>)
          return ord_mul_omega(uniform_rank(n.body));
      },
      e->node());
}

ExprPtr section(const ExprPtr& e, Nat n) {
  return std::visit(
      [&](const auto& node) -> ExprPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, FamilyExpr::Point>)
          throw PrecondError("point has no sections");
        if constexpr (std::is_same_v<T, FamilyExpr::Pow>)
          return node.k == 1 ? FamilyExpr::point() : FamilyExpr::pow(node.k - 1);
        if constexpr (std::is_same_v<T, FamilyExpr::Diag>) {
          Nat k = node.f(n);
          return k == 0 ? FamilyExpr::point() : FamilyExpr::pow(k);
        }
        if constexpr (std::is_same_v<T, FamilyExpr::Sum>)
          return FamilyExpr::sum(node.upper, section(node.lower, n));
        if constexpr (std::is_same_v<T, FamilyExpr::Iter>)
          return FamilyExpr::chain(node.body, node.reps(n));
      },
      e->node());
}

std::string expr_str(const ExprPtr& e) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FamilyExpr::Point>) return "point";
        if constexpr (std::is_same_v<T, FamilyExpr::Pow>)
          return "pow(" + std::to_string(n.k) + ")";
        if constexpr (std::is_same_v<T, FamilyExpr::Diag>)
          return "diag(" + n.f.str() + ")";
        if constexpr (std::is_same_v<T, FamilyExpr::Sum>)
          return "sum(" + expr_str(n.upper) + "," + expr_str(n.lower) + ")";
        if constexpr (std::is_same_v<T, FamilyExpr::Iter>)
          return "iter(" + expr_str(n.body) + "," + n.reps.str() + ")";
      },
      e->node());
}

FamilyBuilder::FamilyBuilder(ExprPtr expr, Nat base)
    : base_(base), expr_(std::move(expr)) {
  if (base_ < 0) throw PrecondError("base must be a natural");
}

FamilyBuilder FamilyBuilder::schreier() {
  return FamilyBuilder(FamilyExpr::diag(Affine{1, 0}), 0);
}

std::string FamilyBuilder::str() const {
  std::string s = expr_str(expr_);
  if (base_ != 0) s += "@" + std::to_string(base_);
  return s;
}

FamilyBuilder FamilyBuilder::restrict_step(Nat n) const {
  if (is_point()) throw PrecondError("point admits no restriction step");
  if (n < base_) throw PrecondError("restriction index below the family base");
  return FamilyBuilder(section(expr_, n), n + 1);
}

bool FamilyBuilder::member(const FinSet& t) const {
  if (!t.empty() && t.min_or() < base_) return false;
  ExprPtr cur = expr_;
  for (Nat x : t.elements()) {
    if (expr_is_point(cur)) return false;
    cur = section(cur, x);
  }
  return expr_is_point(cur);
}

bool FamilyBuilder::member_restricted(const FinSet& t, const GroundSet& M) const {
  for (Nat x : t.elements())
    if (!M.contains(x)) return false;
  return member(t);
}

FinSet FamilyBuilder::t_min(Nat n) const {
  if (n < base_) throw PrecondError("t_min index below the family base");
  std::vector<Nat> elems;
  ExprPtr cur = expr_;
  Nat x = n;
  while (!expr_is_point(cur)) {
    elems.push_back(x);
    cur = section(cur, x);
    ++x;
    if ((Nat)elems.size() > (Nat{1} << 22))
      throw PrecondError("t_min too large to materialize");
  }
  return FinSet(std::move(elems));
}

Nat FamilyBuilder::t_min_length(Nat n, Nat cap) const {
  if (n < base_) throw PrecondError("t_min index below the family base");
  Nat total = 0;
  ExprPtr cur = expr_;
  Nat x = n;
  while (!expr_is_point(cur)) {
    if (const auto* p = std::get_if<FamilyExpr::Pow>(&cur->node())) {
      total += p->k;
      break;
    }
    // consume a whole pow-segment of a sum at once
    if (const auto* s = std::get_if<FamilyExpr::Sum>(&cur->node())) {
      if (const auto* p = std::get_if<FamilyExpr::Pow>(&s->lower->node())) {
        total += p->k;
        x += p->k;
        cur = s->upper;
        if (total > cap) return cap + 1;
        continue;
      }
    }
    ++total;
    cur = section(cur, x);
    ++x;
    if (total > cap) return cap + 1;
  }
  return std::min(total, cap + 1);
}

FinSet FamilyBuilder::complete_down(ExprPtr cur, FinSet prefix,
                                    const GroundSet& M) const {
  std::vector<Nat> elems = prefix.elements();
  Nat last = std::max(prefix.max_or(), base_ - 1);
  while (!expr_is_point(cur)) {
    Nat next = M.min_above(last);
    cur = section(cur, next);
    elems.push_back(next);
    last = next;
    if ((Nat)elems.size() > (Nat{1} << 22))
      throw PrecondError("completion too large to materialize");
  }
  return FinSet(std::move(elems));
}

FinSet FamilyBuilder::complete_prefix(const FinSet& w, const GroundSet& M) const {
  if (!w.empty() && w.min_or() < base_)
    throw PrecondError("prefix starts below the family base");
  for (Nat x : w.elements())
    if (!M.contains(x))
      throw PrecondError("prefix element " + std::to_string(x) +
                         " lies outside the ground set");
  ExprPtr cur = expr_;
  for (Nat x : w.elements()) {
    if (expr_is_point(cur))
      throw PrecondError("prefix extends beyond a member of the family");
    cur = section(cur, x);
  }
  if (!expr_is_point(cur) && !M.is_infinite() &&
      !M.has_element_above(std::max(w.max_or(), base_ - 1)))
    throw PrecondError("ground set cannot extend the prefix");
  return complete_down(cur, w, M);
}

FinSet FamilyBuilder::min_completion(const FinSet& w, const GroundSet& M) const {
  {
    ExprPtr cur = expr_;
    bool overrun = false;
    for (Nat x : w.elements()) {
      if (expr_is_point(cur)) {
        overrun = true;
        break;
      }
      cur = section(cur, x);
    }
    if (!overrun && expr_is_point(cur))
      throw PrecondError("prefix is already a member of the family");
  }
  return complete_prefix(w, M);
}

FinSet FamilyBuilder::least_member(const GroundSet& M) const {
  return complete_down(expr_, FinSet(), M);
}

FinSet FamilyBuilder::lex_next(const FinSet& t, const GroundSet& M) const {
  if (!member_restricted(t, M))
    throw PrecondError("lex_next argument is not a member of the restriction");
  if (t.empty()) throw PrecondError("the point family has no successor chains");
  FinSet u = t.prefix(t.size() - 1);
  Nat next = M.min_above(t.max_or());
  ExprPtr cur = expr_;
  for (Nat x : u.elements()) cur = section(cur, x);
  cur = section(cur, next);
  return complete_down(cur, u.with_appended(next), M);
}

Ordinal FamilyBuilder::lex_rank(const FinSet& t, const GroundSet& M) const {
  if (!member_restricted(t, M))
    throw PrecondError("lex_rank argument is not a member of the restriction");
  Ordinal r;
  ExprPtr cur = expr_;
  Nat lo = base_ - 1;
  for (Nat x : t.elements()) {
    Nat n = lo;
    while (M.has_element_above(n)) {
      n = M.min_above(n);
      if (n >= x) break;
      r = ord_add(r, Ordinal::omega_pow(ufam::uniform_rank(section(cur, n))));
    }
    cur = section(cur, x);
    lo = x;
  }
  return r;
}

FinSet FamilyBuilder::finite_rank_reduction(const GroundSet& M, Nat k,
                                            Nat floor) const {
  Ordinal rank = uniform_rank();
  if (rank < Ordinal::omega())
    throw PrecondError("finite_rank_reduction requires rank >= omega");
  std::vector<Nat> u;
  ExprPtr cur = expr_;
  Nat lo = std::max(floor, base_ - 1);
  while (true) {
    Ordinal r = ufam::uniform_rank(cur);
    if (r.is_finite()) break;
    if (r.classify() == Ordinal::Kind::successor) {
      Nat n = M.min_above(lo);
      u.push_back(n);
      cur = section(cur, n);
      lo = n;
    } else {
      // limit: section ranks increase along the base; take the first index
      // whose section is either still infinite or finite with rank >= k
      Nat n = lo, guard = 0;
      while (true) {
        n = M.min_above(n);
        Ordinal sr = ufam::uniform_rank(section(cur, n));
        if (!sr.is_finite() || sr.finite_value() >= k) break;
        if (++guard > (Nat{1} << 20))
          throw RejectError("finite_rank_reduction exceeded budget");
      }
      u.push_back(n);
      cur = section(cur, n);
      lo = n;
    }
  }
  return FinSet(std::move(u));
}

std::vector<FinSet> FamilyBuilder::enumerate(const GroundSet& M,
                                             std::size_t count) const {
  std::vector<FinSet> out;
  if (count == 0 || is_point()) return out;
  FinSet t = least_member(M);
  out.push_back(t);
  while (out.size() < count) {
    t = lex_next(t, M);
    out.push_back(t);
  }
  return out;
}

std::vector<FinSet> FamilyBuilder::enumerate_bounded(const GroundSet& M,
                                                     std::size_t count,
                                                     Nat min_gt,
                                                     Nat max_le) const {
  std::vector<FinSet> out;
  if (count == 0) return out;
  std::vector<Nat> prefix;
  auto rec = [&](auto&& self, const ExprPtr& cur, Nat lo) -> void {
    if (out.size() >= count) return;
    if (expr_is_point(cur)) {
      out.emplace_back(prefix);
      return;
    }
    Nat n = lo;
    while (M.has_element_above(n)) {
      n = M.min_above(n);
      if (n > max_le) break;
      if (prefix.empty() && n <= min_gt) continue;
      prefix.push_back(n);
      self(self, section(cur, n), n);
      prefix.pop_back();
      if (out.size() >= count) return;
    }
  };
  rec(rec, expr_, base_ - 1);
  return out;
}

namespace {

Affine parse_affine(Cursor& c) {
  c.skip_ws();
  Affine f{0, 0};
  bool have_coef = false;
  Nat coef = 0;
  if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
    coef = c.nat();
    have_coef = true;
  }
  if (c.accept('n')) {
    f.a = have_coef ? coef : 1;
    if (c.accept('+')) f.b = c.nat();
  } else {
    if (!have_coef) c.fail("expected an affine map");
    f.b = coef;
  }
  return f;
}

ExprPtr parse_family_expr(Cursor& c) {
  c.skip_ws();
  if (c.accept_word("point")) return FamilyExpr::point();
  if (c.accept_word("pow")) {
    c.expect('(');
    Nat k = c.nat();
    c.expect(')');
    return FamilyExpr::pow(k);
  }
  if (c.accept_word("schreier")) return FamilyExpr::diag(Affine{1, 0});
  if (c.accept_word("diag")) {
    c.expect('(');
    Affine f = parse_affine(c);
    c.expect(')');
    return FamilyExpr::diag(f);
  }
  if (c.accept_word("sum")) {
    c.expect('(');
    ExprPtr upper = parse_family_expr(c);
    c.expect(',');
    ExprPtr lower = parse_family_expr(c);
    c.expect(')');
    return FamilyExpr::sum(std::move(upper), std::move(lower));
  }
  if (c.accept_word("iter")) {
    c.expect('(');
    ExprPtr body = parse_family_expr(c);
    c.expect(',');
    Affine f = parse_affine(c);
    c.expect(')');
    return FamilyExpr::iter(std::move(body), f);
  }
  c.fail("expected a family expression (point, pow, schreier, diag, sum, iter)");
}

}  // namespace

FamilyBuilder FamilyBuilder::parse(std::string_view dsl) {
  Cursor c(dsl);
  ExprPtr e = parse_family_expr(c);
  Nat base = 0;
  if (c.accept('@')) base = c.nat();
  c.expect_end();
  return FamilyBuilder(std::move(e), base);
}

}  // namespace ufam
