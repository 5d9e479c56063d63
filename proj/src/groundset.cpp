#include "ufam/groundset.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "ufam/parse_util.hpp"

namespace ufam {

namespace {

constexpr Nat kPeriodCap = Nat{1} << 20;
constexpr Nat kMixPeriodCap = 4096;  // blocks + periodic coexistence
constexpr Nat kIterCap = Nat{1} << 20;

using I128 = __int128;

I128 block_start128(const GroundSet::BlocksPart& b, Nat k) {
  return I128(b.start) + I128(k) * (b.len0 + b.gap) +
         I128(b.len_step) * k * (k - 1) / 2;
}

// largest k with block_start(k) <= x, or -1
Nat block_index_at_or_below(const GroundSet::BlocksPart& b, Nat x) {
  if (x < b.start) return -1;
  Nat lo = 0, hi = 1;
  while (block_start128(b, hi) <= x) {
    lo = hi;
    hi *= 2;
  }
  while (lo + 1 < hi) {
    Nat mid = lo + (hi - lo) / 2;
    if (block_start128(b, mid) <= x)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

std::vector<Nat> sorted_unique(std::vector<Nat> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

bool GroundSet::infinite_part_contains(Nat x) const {
  if (x < 0) return false;
  if (periodic_ && x >= periodic_->threshold &&
      periodic_->residue_mask[x % periodic_->period])
    return true;
  if (blocks_) {
    Nat k = block_index_at_or_below(*blocks_, x);
    if (k >= 0 && x < blocks_->block_start(k) + blocks_->block_len(k)) return true;
  }
  return false;
}

bool GroundSet::excluded(Nat x) const {
  return std::binary_search(exclude_.begin(), exclude_.end(), x);
}

bool GroundSet::contains(Nat x) const {
  if (x < 0) return false;
  if (std::binary_search(include_.begin(), include_.end(), x)) return true;
  return infinite_part_contains(x) && !excluded(x);
}

bool GroundSet::is_infinite() const { return periodic_ || blocks_; }

bool GroundSet::empty() const { return !is_infinite() && include_.empty(); }

bool GroundSet::has_element_above(Nat k) const {
  if (is_infinite()) return true;
  return !include_.empty() && include_.back() > k;
}

std::optional<Nat> GroundSet::infinite_part_min_above(Nat k) const {
  std::optional<Nat> best;
  if (periodic_) {
    const auto& p = *periodic_;
    Nat lo = std::max(k + 1, p.threshold);
    Nat cand = -1;
    for (Nat r : p.residues) {
      Nat delta = ((r - lo) % p.period + p.period) % p.period;
      Nat x = lo + delta;
      if (cand < 0 || x < cand) cand = x;
    }
    if (cand >= 0) best = cand;
  }
  if (blocks_) {
    const auto& b = *blocks_;
    Nat cand;
    if (k + 1 <= b.start) {
      cand = b.start;
    } else {
      Nat kb = block_index_at_or_below(b, k);
      Nat end = b.block_start(kb) + b.block_len(kb);
      cand = (k + 1 < end) ? k + 1 : b.block_start(kb + 1);
    }
    if (!best || cand < *best) best = cand;
  }
  return best;
}

Nat GroundSet::min_above(Nat k) const {
  std::optional<Nat> best;
  auto it = std::upper_bound(include_.begin(), include_.end(), k);
  if (it != include_.end()) best = *it;
  Nat probe = k;
  for (std::size_t guard = 0; guard <= exclude_.size(); ++guard) {
    auto cand = infinite_part_min_above(probe);
    if (!cand) break;
    if (excluded(*cand)) {
      probe = *cand;
      continue;
    }
    if (!best || *cand < *best) best = *cand;
    break;
  }
  if (!best)
    throw PrecondError("ground set has no element above " + std::to_string(k));
  return *best;
}

Nat GroundSet::count_below(Nat x, Nat cap) const {
  Nat count = 0, cur = -1;
  while (count < cap && has_element_above(cur)) {
    cur = min_above(cur);
    if (cur >= x) break;
    ++count;
  }
  return count;
}

Nat GroundSet::scan_base() const {
  Nat b = 0;
  if (periodic_) b = std::max(b, periodic_->threshold);
  if (!include_.empty()) b = std::max(b, include_.back() + 1);
  if (!exclude_.empty()) b = std::max(b, exclude_.back() + 1);
  return b;
}

Nat GroundSet::periodic_streak() const {
  if (!periodic_) return 0;
  const auto& p = *periodic_;
  if ((Nat)p.residues.size() == p.period) return p.period;  // full: caller checks
  Nat best = 0, cur = 0;
  for (Nat i = 0; i < 2 * p.period; ++i) {
    if (p.residue_mask[i % p.period]) {
      ++cur;
      best = std::max(best, cur);
    } else {
      cur = 0;
    }
  }
  return std::min(best, p.period);
}

bool GroundSet::arbitrarily_long_runs() const {
  if (blocks_) return true;
  return periodic_ && (Nat)periodic_->residues.size() == periodic_->period;
}

RunClassification GroundSet::runs(Nat l) const {
  if (l < 1) throw PrecondError("run length must be >= 1");
  RunClassification rc;
  rc.arbitrarily_long = arbitrarily_long_runs();
  if (blocks_) {
    // growing block lengths supply runs of every length, infinitely often;
    // the finite exclude set cannot thin them out
    rc.kind = RunClassification::Kind::infinitely_many;
    return rc;
  }
  Nat period = periodic_ ? periodic_->period : 1;
  if (periodic_) {
    Nat streak = (Nat)periodic_->residues.size() == periodic_->period
                     ? l  // full mask: every length occurs
                     : periodic_streak();
    if (streak >= l) {
      rc.kind = RunClassification::Kind::infinitely_many;
      return rc;
    }
  }
  // Beyond scan_base()+period the run predicate is purely periodic and was
  // just ruled out, so a complete scan below that horizon is exact.
  Nat horizon = scan_base() + period;
  Nat last_start = -1;
  for (Nat i = 0; i < horizon; ++i) {
    bool run = true;
    for (Nat j = 0; j < l; ++j)
      if (!contains(i + j)) {
        run = false;
        break;
      }
    if (run) last_start = i;
  }
  if (last_start < 0) {
    rc.kind = RunClassification::Kind::none_beyond;
    rc.bound = 0;
  } else {
    rc.kind = RunClassification::Kind::finitely_many;
    rc.bound = last_start;
  }
  return rc;
}

std::vector<std::pair<Nat, Nat>> GroundSet::maximal_runs_up_to(Nat horizon) const {
  std::vector<std::pair<Nat, Nat>> out;
  Nat cur = -1;
  while (has_element_above(cur)) {
    Nat a = min_above(cur);
    if (a > horizon) break;
    Nat b = a, steps = 0;
    while (contains(b + 1)) {
      ++b;
      if (++steps > kIterCap) throw RejectError("run extension exceeded budget");
    }
    out.emplace_back(a, b);
    cur = b;
  }
  return out;
}

void GroundSet::compute_cofinite() {
  cofinite_from_ = std::nullopt;
  glue_streak_cap_ = std::nullopt;
  Nat excl_hi = exclude_.empty() ? 0 : exclude_.back() + 1;
  if (periodic_ && (Nat)periodic_->residues.size() == periodic_->period) {
    cofinite_from_ = std::max(periodic_->threshold, excl_hi);
    return;
  }
  if (!(periodic_ && blocks_)) return;
  // Growing blocks interleaved with a partial periodic part: the set has a
  // cofinite tail iff eventually every inter-block gap is covered by the
  // periodic part. The gap positions evolve through a finite state cycle of
  // (block start mod p, block length mod p).
  const auto& pp = *periodic_;
  const auto& bb = *blocks_;
  if (pp.period > kMixPeriodCap)
    throw RejectError(
        "period too large to certify run structure alongside growing blocks");
  Nat k = 0;
  while (blocks_->block_start(k) < std::max(pp.threshold, excl_hi)) {
    ++k;
    if (k > kIterCap) throw RejectError("blocks analysis exceeded budget");
  }
  std::map<std::pair<Nat, Nat>, Nat> seen;  // state -> block index
  std::vector<char> covered_flags;
  Nat k0 = k;
  Nat covered_streak_cap = 0, cur_streak = 0;
  while (true) {
    Nat bs = 0;
    {
      I128 v = block_start128(bb, k);
      if (v > (I128(1) << 62)) throw RejectError("blocks analysis overflow");
      bs = (Nat)v;
    }
    Nat len = bb.block_len(k);
    std::pair<Nat, Nat> state{bs % pp.period, len % pp.period};
    auto it = seen.find(state);
    if (it != seen.end()) {
      // full cycle observed
      bool all_covered = true;
      for (Nat j = it->second - k0; j < (Nat)covered_flags.size(); ++j)
        if (!covered_flags[j]) all_covered = false;
      if (all_covered) {
        cofinite_from_ = std::max({bb.block_start(it->second), pp.threshold, excl_hi});
      }
      glue_streak_cap_ = covered_streak_cap + 2;
      return;
    }
    seen.emplace(state, k);
    bool covered = true;
    for (Nat g = 0; g < bb.gap; ++g) {
      Nat pos = bs + len + g;
      if (!(pos >= pp.threshold && pp.residue_mask[pos % pp.period])) {
        covered = false;
        break;
      }
    }
    covered_flags.push_back(covered ? 1 : 0);
    if (covered) {
      ++cur_streak;
      covered_streak_cap = std::max(covered_streak_cap, cur_streak);
    } else {
      cur_streak = 0;
    }
    ++k;
    if (k - k0 > kIterCap)
      throw RejectError("gap coverage cycle not found within budget");
  }
}

void GroundSet::canonicalize() {
  include_ = sorted_unique(std::move(include_));
  exclude_ = sorted_unique(std::move(exclude_));
  std::vector<Nat> ex;
  for (Nat x : exclude_)
    if (infinite_part_contains(x) &&
        !std::binary_search(include_.begin(), include_.end(), x))
      ex.push_back(x);
  exclude_ = std::move(ex);
  std::vector<Nat> inc;
  for (Nat x : include_)
    if (!(infinite_part_contains(x) && !excluded(x))) inc.push_back(x);
  include_ = std::move(inc);
  compute_cofinite();
}

GroundSet GroundSet::final_segment(Nat n) {
  if (n < 0) throw RejectError("final segment start must be a natural");
  GroundSet g;
  g.periodic_ = PeriodicPart{1, {1}, {0}, n};
  g.canonicalize();
  return g;
}

GroundSet GroundSet::finite(const FinSet& f) {
  GroundSet g;
  g.include_ = f.elements();
  g.canonicalize();
  return g;
}

GroundSet GroundSet::arithmetic(Nat first, Nat step) {
  if (first < 0 || step < 1) throw RejectError("ap(first, step) requires step >= 1");
  GroundSet g;
  PeriodicPart p;
  p.period = step;
  p.residue_mask.assign(step, 0);
  p.residue_mask[first % step] = 1;
  p.residues = {first % step};
  p.threshold = first;
  g.periodic_ = std::move(p);
  g.canonicalize();
  return g;
}

GroundSet GroundSet::blocks(Nat start, Nat gap, Nat len0, Nat len_step) {
  if (start < 0 || gap < 1 || len0 < 1 || len_step < 0)
    throw RejectError("blocks(start, gap, len0, len_step) requires gap >= 1 and len0 >= 1");
  GroundSet g;
  if (len_step == 0) {
    // constant-length blocks are ultimately periodic with period len0 + gap
    PeriodicPart p;
    p.period = len0 + gap;
    p.residue_mask.assign(p.period, 0);
    for (Nat i = 0; i < len0; ++i) {
      Nat r = (start + i) % p.period;
      if (!p.residue_mask[r]) {
        p.residue_mask[r] = 1;
        p.residues.push_back(r);
      }
    }
    std::sort(p.residues.begin(), p.residues.end());
    p.threshold = start;
    g.periodic_ = std::move(p);
  } else {
    g.blocks_ = BlocksPart{start, gap, len0, len_step};
  }
  g.canonicalize();
  return g;
}

GroundSet GroundSet::union_with(const GroundSet& other) const {
  if (blocks_ && other.blocks_)
    throw RejectError(
        "union of two growing blocks components interleaves their supports; "
        "run structure cannot be certified");
  GroundSet r;
  r.blocks_ = blocks_ ? blocks_ : other.blocks_;
  std::vector<Nat> staged_include = include_;
  staged_include.insert(staged_include.end(), other.include_.begin(),
                        other.include_.end());
  if (periodic_ && other.periodic_) {
    const auto& a = *periodic_;
    const auto& b = *other.periodic_;
    Nat period = std::lcm(a.period, b.period);
    if (period > kPeriodCap)
      throw RejectError("union period exceeds the certification cap");
    PeriodicPart p;
    p.period = period;
    p.residue_mask.assign(period, 0);
    p.threshold = std::max(a.threshold, b.threshold);
    for (Nat r2 = 0; r2 < period; ++r2) {
      if (a.residue_mask[r2 % a.period] || b.residue_mask[r2 % b.period]) {
        p.residue_mask[r2] = 1;
        p.residues.push_back(r2);
      }
    }
    // members of either part below the merged threshold become includes
    for (const auto* part : {&a, &b}) {
      for (Nat x = part->threshold; x < p.threshold; ++x)
        if (part->residue_mask[x % part->period]) staged_include.push_back(x);
    }
    r.periodic_ = std::move(p);
  } else if (periodic_ || other.periodic_) {
    r.periodic_ = periodic_ ? periodic_ : other.periodic_;
  }
  for (const auto& e : {exclude_, other.exclude_}) {
    for (Nat x : e)
      if (!contains(x) && !other.contains(x)) r.exclude_.push_back(x);
  }
  r.include_ = std::move(staged_include);
  r.canonicalize();
  return r;
}

GroundSet GroundSet::minus_finite(const FinSet& f) const {
  GroundSet r = *this;
  r.cofinite_from_.reset();
  std::vector<Nat> inc;
  for (Nat x : r.include_)
    if (!f.contains(x)) inc.push_back(x);
  r.include_ = std::move(inc);
  for (Nat x : f.elements()) r.exclude_.push_back(x);
  r.canonicalize();
  return r;
}

GroundSet GroundSet::cut_above(Nat n) const {
  GroundSet r;
  for (Nat x : include_)
    if (x > n) r.include_.push_back(x);
  for (Nat x : exclude_)
    if (x > n) r.exclude_.push_back(x);
  if (periodic_) {
    r.periodic_ = periodic_;
    r.periodic_->threshold = std::max(periodic_->threshold, n + 1);
  }
  if (blocks_) {
    const auto& b = *blocks_;
    if (b.start > n) {
      r.blocks_ = b;
    } else {
      Nat k = block_index_at_or_below(b, n);
      Nat end = b.block_start(k) + b.block_len(k);
      for (Nat x = n + 1; x < end; ++x) r.include_.push_back(x);
      Nat k0 = k + 1;
      r.blocks_ = BlocksPart{b.block_start(k0), b.gap, b.block_len(k0), b.len_step};
    }
  }
  r.canonicalize();
  return r;
}

AnchoredStarts GroundSet::anchored_starts(const std::function<Nat(Nat)>& len,
                                          Nat floor) const {
  AnchoredStarts out;
  if (floor < 0) floor = 0;
  auto check_direct = [&](Nat n) {
    Nat l = len(n);
    for (Nat j = 0; j < l; ++j)
      if (!contains(n + j)) return false;
    return true;
  };
  if (cofinite_from_) {
    Nat t = std::max(*cofinite_from_, floor);
    Nat cur = floor - 1;
    while (has_element_above(cur)) {
      cur = min_above(cur);
      if (cur >= t) break;
      if (check_direct(cur)) out.finite_candidates.push_back(cur);
    }
    out.infinite = true;
    out.infinite_from = t;
    return out;
  }
  const Nat streak = periodic_ && (Nat)periodic_->residues.size() != periodic_->period
                         ? periodic_streak()
                         : 0;
  const Nat period = periodic_ ? periodic_->period : 1;
  const Nat direct_hi = std::max(scan_base() + period, streak + period) + 4;
  Nat cur = floor - 1;
  while (has_element_above(cur)) {
    cur = min_above(cur);
    if (cur > direct_hi) break;
    if (check_direct(cur)) out.finite_candidates.push_back(cur);
  }
  if (!blocks_) return out;  // beyond direct_hi runs are capped by the streak

  // Glued-chain analysis: maximal solid intervals made of consecutive blocks
  // whose gaps the periodic part covers, extended by periodic streaks on both
  // sides. A candidate needs its whole interval inside one chain; since
  // len(n) > n and chain starts grow quadratically while spans grow linearly,
  // only finitely many chains can host one.
  const auto& bb = *blocks_;
  const Nat glue_cap = glue_streak_cap_ ? *glue_streak_cap_ : 2;
  auto gap_covered = [&](Nat block_idx) {
    if (!periodic_) return false;
    Nat base = bb.block_start(block_idx) + bb.block_len(block_idx);
    for (Nat g = 0; g < bb.gap; ++g) {
      Nat pos = base + g;
      if (!(pos >= periodic_->threshold && periodic_->residue_mask[pos % periodic_->period]))
        return false;
    }
    return true;
  };
  auto periodic_member = [&](Nat pos) {
    return periodic_ && pos >= periodic_->threshold &&
           periodic_->residue_mask[pos % periodic_->period];
  };
  Nat k = 0, guard = 0;
  while (true) {
    if (++guard > kIterCap) throw RejectError("anchored analysis exceeded budget");
    Nat cs = bb.block_start(k);
    for (Nat back = 1; back <= period + 1 && periodic_member(cs - 1); ++back) --cs;
    Nat j = k;
    while (gap_covered(j)) {
      ++j;
      if (j - k > kIterCap) throw RejectError("anchored chain exceeded budget");
    }
    Nat ce = bb.block_start(j) + bb.block_len(j) - 1;
    for (Nat fwd = 1; fwd <= period + 1 && periodic_member(ce + 1); ++fwd) ++ce;
    // candidates n in chain with n + len(n) - 1 <= ce
    Nat lo = std::max({cs, direct_hi + 1, floor});
    if (lo <= ce && lo + len(lo) - 1 <= ce) {
      Nat a = lo, b = ce;
      while (a < b) {  // largest n with the interval inside the chain
        Nat mid = a + (b - a + 1) / 2;
        if (mid + len(mid) - 1 <= ce)
          a = mid;
        else
          b = mid - 1;
      }
      for (Nat n = lo; n <= a; ++n) {
        // chains are solid intervals of members, excludes already fall below
        // scan_base < direct_hi
        out.finite_candidates.push_back(n);
        if ((Nat)out.finite_candidates.size() > 100000)
          throw RejectError("anchored candidate set exceeded budget");
      }
    }
    k = j + 1;
    // over-estimate of any future chain span: at most glue_cap+2 glued blocks
    // of at most block_len(k + glue_cap + 2) each, plus streaks on both sides
    Nat future_span =
        (glue_cap + 2) * (bb.block_len(k + glue_cap + 2) + bb.gap) + 2 * streak + 4;
    if (bb.block_start(k) > future_span && bb.block_start(k) > direct_hi) break;
  }
  out.finite_candidates = sorted_unique(std::move(out.finite_candidates));
  return out;
}

std::string GroundSet::str() const {
  std::string parts;
  auto add_part = [&](const std::string& s) {
    if (!parts.empty()) parts += '|';
    parts += s;
  };
  if (!include_.empty()) {
    std::string s = "fin{";
    for (std::size_t i = 0; i < include_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(include_[i]);
    }
    s += '}';
    add_part(s);
  }
  if (periodic_) {
    const auto& p = *periodic_;
    if (p.period == 1) {
      add_part("seg(" + std::to_string(p.threshold) + ")");
    } else {
      for (Nat r : p.residues) {
        Nat first = p.threshold + ((r - p.threshold) % p.period + p.period) % p.period;
        add_part("ap(" + std::to_string(first) + "," + std::to_string(p.period) + ")");
      }
    }
  }
  if (blocks_) {
    add_part("blocks(" + std::to_string(blocks_->start) + "," +
             std::to_string(blocks_->gap) + "," + std::to_string(blocks_->len0) +
             "," + std::to_string(blocks_->len_step) + ")");
  }
  if (parts.empty()) parts = "fin{}";
  if (!exclude_.empty()) {
    parts += "\\fin{";
    for (std::size_t i = 0; i < exclude_.size(); ++i) {
      if (i) parts += ',';
      parts += std::to_string(exclude_[i]);
    }
    parts += '}';
  }
  return parts;
}

namespace {

FinSet parse_finset_body(Cursor& c) {
  c.expect('{');
  std::vector<Nat> elems;
  c.skip_ws();
  if (!c.accept('}')) {
    elems.push_back(c.nat());
    while (c.accept(',')) elems.push_back(c.nat());
    c.expect('}');
  }
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return FinSet(std::move(elems));
}

GroundSet parse_gs_expr(Cursor& c);

GroundSet parse_gs_term(Cursor& c) {
  c.skip_ws();
  if (c.accept_word("all")) return GroundSet::final_segment(0);
  if (c.accept_word("seg")) {
    c.expect('(');
    Nat n = c.nat();
    c.expect(')');
    return GroundSet::final_segment(n);
  }
  if (c.accept_word("fin")) return GroundSet::finite(parse_finset_body(c));
  if (c.accept_word("ap")) {
    c.expect('(');
    Nat a = c.nat();
    c.expect(',');
    Nat d = c.nat();
    c.expect(')');
    return GroundSet::arithmetic(a, d);
  }
  if (c.accept_word("blocks")) {
    c.expect('(');
    Nat s = c.nat();
    c.expect(',');
    Nat g = c.nat();
    c.expect(',');
    Nat l = c.nat();
    c.expect(',');
    Nat dl = c.nat();
    c.expect(')');
    return GroundSet::blocks(s, g, l, dl);
  }
  if (c.accept_word("cut")) {
    c.expect('(');
    GroundSet g = parse_gs_expr(c);
    c.expect(',');
    Nat n = c.nat();
    c.expect(')');
    return g.cut_above(n);
  }
  c.fail("expected a ground-set term (all, seg, fin, ap, blocks, cut)");
}

GroundSet parse_gs_expr(Cursor& c) {
  GroundSet g = parse_gs_term(c);
  while (true) {
    if (c.accept('|')) {
      g = g.union_with(parse_gs_term(c));
    } else if (c.accept('\\')) {
      c.skip_ws();
      if (!c.accept_word("fin")) c.fail("'\\' must be followed by fin{...}");
      g = g.minus_finite(parse_finset_body(c));
    } else {
      break;
    }
  }
  return g;
}

}  // namespace

GroundSet GroundSet::parse(std::string_view dsl) {
  Cursor c(dsl);
  GroundSet g = parse_gs_expr(c);
  c.expect_end();
  return g;
}

}  // namespace ufam
