#include "ufam/finset.hpp"

#include <algorithm>

#include "ufam/parse_util.hpp"

namespace ufam {

FinSet::FinSet(std::vector<Nat> elems) : elems_(std::move(elems)) {
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (elems_[i] < 0) throw PrecondError("finite sets hold naturals only");
    if (i > 0 && elems_[i] <= elems_[i - 1])
      throw PrecondError("finite set elements must be strictly increasing");
  }
}

FinSet::FinSet(std::initializer_list<Nat> elems)
    : FinSet(std::vector<Nat>(elems)) {}

bool FinSet::contains(Nat x) const {
  return std::binary_search(elems_.begin(), elems_.end(), x);
}

FinSet FinSet::with_appended(Nat x) const {
  if (x <= max_or()) throw PrecondError("appended element must exceed max");
  FinSet r = *this;
  r.elems_.push_back(x);
  return r;
}

FinSet FinSet::prefix(std::size_t count) const {
  FinSet r;
  r.elems_.assign(elems_.begin(), elems_.begin() + std::min(count, elems_.size()));
  return r;
}

FinSet FinSet::drop_min() const {
  if (empty()) throw PrecondError("drop_min on the empty set");
  FinSet r;
  r.elems_.assign(elems_.begin() + 1, elems_.end());
  return r;
}

FinSet FinSet::union_with(const FinSet& other) const {
  std::vector<Nat> merged;
  std::set_union(elems_.begin(), elems_.end(), other.elems_.begin(),
                 other.elems_.end(), std::back_inserter(merged));
  FinSet r;
  r.elems_ = std::move(merged);
  return r;
}

std::string FinSet::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(elems_[i]);
  }
  out += '}';
  return out;
}

FinSet FinSet::parse(std::string_view text) {
  Cursor c(text);
  c.expect('{');
  std::vector<Nat> elems;
  c.skip_ws();
  if (!c.accept('}')) {
    elems.push_back(c.nat());
    while (c.accept(',')) elems.push_back(c.nat());
    c.expect('}');
  }
  c.expect_end();
  return FinSet(std::move(elems));
}

std::strong_ordering lex_compare(const FinSet& s, const FinSet& t) {
  const auto& a = s.elements();
  const auto& b = t.elements();
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i])
      // the smaller element is the least of the symmetric difference
      return a[i] < b[i] ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  if (a.size() == b.size()) return std::strong_ordering::equal;
  // one is a proper prefix of the other: the extension owns min of the
  // symmetric difference, so the extension is lexicographically smaller
  return a.size() > b.size() ? std::strong_ordering::less : std::strong_ordering::greater;
}

bool is_initial_segment(const FinSet& s, const FinSet& t) {
  if (s.size() > t.size()) return false;
  return std::equal(s.elements().begin(), s.elements().end(), t.elements().begin());
}

TerminalRun decompose_terminal_run(const FinSet& t) {
  if (t.empty()) throw PrecondError("cannot decompose the empty set");
  const auto& e = t.elements();
  std::size_t i = e.size() - 1;
  while (i > 0 && e[i - 1] + 1 == e[i]) --i;
  TerminalRun r;
  r.u = t.prefix(i);
  r.p = e[i];
  r.m = e.back() - e[i];
  return r;
}

}  // namespace ufam
