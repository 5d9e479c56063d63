#include "ufam/ftree.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ufam {

namespace {

using nlohmann::json;

constexpr Nat kExpandCap = Nat{1} << 20;

Nat child_floor(const FamilyBuilder& B, const FinSet& node) {
  return std::max(node.max_or(), B.base() - 1);
}

// contribution of the node s+{n}: {n} + t_{n+1} of the family restricted
// along s (the parent prefix)
FinSet contribution(const FamilyBuilder& B, const FinSet& node) {
  FinSet parent = node.prefix(node.size() - 1);
  ExprPtr cur = B.expr();
  for (Nat x : parent.elements()) cur = section(cur, x);
  FamilyBuilder rest(cur, node.max_or());
  return FinSet{node.max_or()}.union_with(rest.t_min(node.max_or() + 1));
}

struct NodeOrder {
  bool operator()(const FinSet& a, const FinSet& b) const {
    if (a.max_or() != b.max_or()) return a.max_or() < b.max_or();
    if (a.size() != b.size()) return a.size() < b.size();
    return lex_compare(a, b) == std::strong_ordering::less;
  }
};

void collect_nodes(const FamilyBuilder& B, const FTreeSchema& T,
                   const FinSet& node, Nat bound, std::vector<FinSet>& out) {
  const auto* rule = T.match(node);
  if (!rule) return;
  GroundSet succ = rule->successors.cut_above(child_floor(B, node));
  Nat n = child_floor(B, node);
  while (succ.has_element_above(n)) {
    n = succ.min_above(n);
    if (n > bound) break;
    FinSet child = node.with_appended(n);
    NodeStatus st = node_status(B, child);
    if (st == NodeStatus::internal || st == NodeStatus::terminal) {
      out.push_back(child);
      if ((Nat)out.size() > kExpandCap) throw RejectError("tree expansion budget exceeded");
      if (st == NodeStatus::internal) collect_nodes(B, T, child, bound, out);
    }
  }
}

}  // namespace

const FTreeSchema::Rule* FTreeSchema::match(const FinSet& node) const {
  const Rule* best = nullptr;
  for (const auto& r : rules) {
    if (!is_initial_segment(r.prefix, node)) continue;
    if (!best || r.prefix.size() > best->prefix.size()) best = &r;
  }
  return best;
}

FTreeSchema FTreeSchema::parse_json(const std::string& text) {
  json j = json::parse(text);
  FTreeSchema t;
  if (j.contains("depth")) t.depth = j["depth"].get<Nat>();
  for (const auto& jn : j.at("nodes")) {
    Rule r;
    std::vector<Nat> prefix;
    for (const auto& x : jn.at("prefix")) prefix.push_back(x.get<Nat>());
    r.prefix = FinSet(std::move(prefix));
    r.successors_src = jn.at("successors").get<std::string>();
    r.successors = GroundSet::parse(r.successors_src);
    if (jn.contains("terminal")) r.terminal_declared = jn["terminal"].get<bool>();
    t.rules.push_back(std::move(r));
  }
  return t;
}

FTreeSchema FTreeSchema::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PrecondError("cannot open schema file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

NodeStatus node_status(const FamilyBuilder& B, const FinSet& s) {
  if (!s.empty() && s.min_or() < B.base()) return NodeStatus::invalid;
  ExprPtr cur = B.expr();
  for (Nat x : s.elements()) {
    if (expr_is_point(cur)) return NodeStatus::invalid;
    cur = section(cur, x);
  }
  if (expr_is_point(cur)) return NodeStatus::member;
  Ordinal r = uniform_rank(cur);
  if (r == Ordinal::omega()) return NodeStatus::terminal;
  return r > Ordinal::omega() ? NodeStatus::internal : NodeStatus::invalid;
}

bool a_front_member(const FamilyBuilder& B, const FinSet& s) {
  if (!s.empty() && s.min_or() < B.base())
    throw PrecondError("prefix starts below the family base");
  ExprPtr cur = B.expr();
  for (Nat x : s.elements()) {
    if (expr_is_point(cur))
      throw PrecondError("set is not a prefix of any member");
    cur = section(cur, x);
  }
  if (expr_is_point(cur)) return false;  // a full member, past the cut
  return uniform_rank(cur) == Ordinal::omega();
}

FTreeValidation validate_ftree(const FamilyBuilder& B, const FTreeSchema& T) {
  if (!(B.uniform_rank() > Ordinal::omega()))
    throw PrecondError("tree schemas require uniform rank above omega");
  FTreeValidation v;
  auto flag = [&](std::string msg) {
    v.valid = false;
    v.violations.push_back(std::move(msg));
  };
  if (!T.match(FinSet{}))
    flag("no rule covers the root");
  for (const auto& r : T.rules) {
    const std::string where = "rule at " + r.prefix.str();
    // the rule prefix must be reachable through internal nodes
    bool reachable = true;
    for (std::size_t i = 0; i + 1 <= r.prefix.size(); ++i) {
      FinSet anc = r.prefix.prefix(i);
      NodeStatus st = node_status(B, anc);
      if (st != NodeStatus::internal) {
        flag(where + ": ancestor " + anc.str() + " is not an internal node");
        reachable = false;
        break;
      }
      const auto* arule = T.match(anc);
      Nat next = r.prefix.elements()[i];
      if (!arule || !arule->successors.contains(next) ||
          next <= child_floor(B, anc)) {
        flag(where + ": ancestor successor set misses " + std::to_string(next));
        reachable = false;
        break;
      }
    }
    if (!reachable) continue;
    NodeStatus st = node_status(B, r.prefix);
    if (st == NodeStatus::invalid || st == NodeStatus::member) {
      flag(where + ": prefix leaves the front closure");
      continue;
    }
    bool terminal = st == NodeStatus::terminal;
    if (r.terminal_declared && *r.terminal_declared != terminal)
      flag(where + ": declared terminal=" + (*r.terminal_declared ? "true" : "false") +
           " but the restriction rank says otherwise");
    if (!terminal) {
      GroundSet succ = r.successors.cut_above(child_floor(B, r.prefix));
      if (!succ.is_infinite())
        flag(where + ": successor set is not infinite above the prefix");
    }
  }
  if (!v.valid) return v;
  // sampled materialization: children must stay inside the front closure
  std::vector<FinSet> frontier{FinSet{}};
  for (Nat d = 0; d < T.depth && !frontier.empty(); ++d) {
    std::vector<FinSet> next;
    for (const auto& node : frontier) {
      if (node_status(B, node) != NodeStatus::internal) continue;
      const auto* rule = T.match(node);
      GroundSet succ = rule->successors.cut_above(child_floor(B, node));
      Nat n = child_floor(B, node);
      for (int c = 0; c < 3 && succ.has_element_above(n); ++c) {
        n = succ.min_above(n);
        FinSet child = node.with_appended(n);
        NodeStatus st = node_status(B, child);
        if (st == NodeStatus::invalid || st == NodeStatus::member) {
          flag("sampled node " + child.str() + " leaves the front closure");
          continue;
        }
        next.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  return v;
}

std::vector<FinSet> tree_nodes_up_to(const FamilyBuilder& B, const FTreeSchema& T,
                                     Nat bound) {
  std::vector<FinSet> nodes;
  collect_nodes(B, T, FinSet{}, bound, nodes);
  std::sort(nodes.begin(), nodes.end(), NodeOrder{});
  return nodes;
}

std::vector<FinSet> et_expand_up_to(const FamilyBuilder& B, const FTreeSchema& T,
                                    Nat bound) {
  std::vector<FinSet> out;
  for (const auto& node : tree_nodes_up_to(B, T, bound))
    out.push_back(contribution(B, node));
  return out;
}

std::vector<FinSet> et_expand(const FamilyBuilder& B, const FTreeSchema& T,
                              std::size_t budget) {
  std::vector<FinSet> out;
  if (budget == 0) return out;
  Nat bound = 8;
  while (true) {
    auto nodes = tree_nodes_up_to(B, T, bound);
    if (nodes.size() >= budget || bound > kExpandCap) {
      for (std::size_t i = 0; i < std::min(budget, nodes.size()); ++i)
        out.push_back(contribution(B, nodes[i]));
      return out;
    }
    bound *= 2;
  }
}

namespace {

AdequacyTranscript certificate_rec(const FamilyBuilder& B, const FTreeSchema& T,
                                   const ExprPtr& cur, const FinSet& node) {
  AdequacyTranscript t;
  t.verdict = true;
  t.certified = true;
  Ordinal rank = uniform_rank(cur);
  if (rank == Ordinal::omega()) {
    t.kase = AdequacyTranscript::Case::limit;
    t.note = "terminal: minimal extensions of unbounded length lie in the expansion";
    AdequacyTranscript::Witness w;
    w.n = node.max_or(-1) + 1;
    w.rank = "w";
    t.witnesses.push_back(std::move(w));
    return t;
  }
  const auto* rule = T.match(node);
  GroundSet succ = rule->successors.cut_above(child_floor(B, node));
  bool limit_case = rank.classify() == Ordinal::Kind::limit;
  t.kase = limit_case ? AdequacyTranscript::Case::limit
                      : AdequacyTranscript::Case::successor;
  t.note = limit_case
               ? "subtree certificates of unbounded rank"
               : "tree children witness the successor clause; their expansions "
                 "stay inside this one";
  Nat n = child_floor(B, node);
  int picks = limit_case ? 2 : 1;
  for (int i = 0; i < picks && succ.has_element_above(n); ++i) {
    n = succ.min_above(n);
    FinSet child = node.with_appended(n);
    auto sub = std::make_shared<AdequacyTranscript>(
        certificate_rec(B, T, section(cur, n), child));
    AdequacyTranscript::Witness w;
    if (limit_case)
      w.v = FinSet{n};
    else
      w.n = n;
    w.rank = uniform_rank(section(cur, n)).str();
    w.sub = std::move(sub);
    t.witnesses.push_back(std::move(w));
  }
  return t;
}

}  // namespace

AdequacyTranscript et_adequate_certificate(const FamilyBuilder& B,
                                           const FTreeSchema& T) {
  FTreeValidation v = validate_ftree(B, T);
  if (!v.valid)
    throw PrecondError("certificate requires a validated tree schema");
  return certificate_rec(B, T, B.expr(), FinSet{});
}

namespace {

// |t_n| as an affine function of n, when the expression avoids iter
std::optional<Affine> affine_tmin_len(const ExprPtr& e) {
  return std::visit(
      [](const auto& n) -> std::optional<Affine> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FamilyExpr::Point>) return Affine{0, 0};
        if constexpr (std::is_same_v<T, FamilyExpr::Pow>) return Affine{0, n.k};
        if constexpr (std::is_same_v<T, FamilyExpr::Diag>)
          // {n} plus a block of f(n) further elements
          return Affine{n.f.a, n.f.b + 1};
        if constexpr (std::is_same_v<T, FamilyExpr::Sum>) {
          auto lo = affine_tmin_len(n.lower);
          auto hi = affine_tmin_len(n.upper);
          if (!lo || !hi) return std::nullopt;
          // lower part first, upper part starting right after it
          Affine shifted{1 + lo->a, lo->b};  // n + len_lower(n)
          return Affine{lo->a + hi->a * shifted.a, lo->b + hi->a * shifted.b + hi->b};
        }
        if constexpr (std::is_same_v<T, FamilyExpr::Iter>) return std::nullopt;
      },
      e->node());
}

// bound on gaps between consecutive elements of S beyond its finite prelude
std::optional<Nat> eventual_gap_bound(const GroundSet& S) {
  std::optional<Nat> best;
  if (S.periodic()) {
    const auto& p = *S.periodic();
    Nat worst = 0;
    for (std::size_t i = 0; i < p.residues.size(); ++i) {
      Nat next = (i + 1 < p.residues.size()) ? p.residues[i + 1]
                                             : p.residues[0] + p.period;
      worst = std::max(worst, next - p.residues[i]);
    }
    best = worst;
  }
  if (S.growing_blocks()) {
    Nat g = S.growing_blocks()->gap + 1;
    if (!best || g < *best) best = g;
  }
  return best;
}

}  // namespace

std::optional<GroundSet> et_groundset(const FamilyBuilder& B,
                                      const FTreeSchema& T) {
  FTreeValidation v = validate_ftree(B, T);
  if (!v.valid) return std::nullopt;
  // root contribution at n covers [n, n + len(n+1)]; once len outgrows the
  // gaps of the root successor set the union is a final segment
  auto len = affine_tmin_len(B.expr());
  if (!len) return std::nullopt;
  const auto* root = T.match(FinSet{});
  GroundSet succ = root->successors.cut_above(B.base() - 1);
  auto gap = eventual_gap_bound(succ);
  if (!gap || !succ.is_infinite()) return std::nullopt;
  Nat prelude = 0;
  if (!succ.includes().empty()) prelude = succ.includes().back() + 1;
  if (!succ.excludes().empty())
    prelude = std::max(prelude, succ.excludes().back() + 1);
  if (succ.periodic()) prelude = std::max(prelude, succ.periodic()->threshold);
  if (succ.growing_blocks())
    prelude = std::max(prelude, succ.growing_blocks()->start);
  // smallest n0 in S beyond the prelude with len(n+1) >= gap for all n >= n0
  Nat n0 = succ.min_above(std::max<Nat>(prelude, 0) - 1);
  while (len->a * (n0 + 1) + len->b < *gap) n0 = succ.min_above(n0);
  Nat segment_from = n0;
  // everything below n0 contributed by small nodes, enumerated completely
  std::vector<Nat> below;
  for (const auto& c : et_expand_up_to(B, T, n0)) {
    for (Nat x : c.elements())
      if (x < segment_from) below.push_back(x);
  }
  std::sort(below.begin(), below.end());
  below.erase(std::unique(below.begin(), below.end()), below.end());
  GroundSet out = GroundSet::final_segment(segment_from);
  if (!below.empty()) out = out.union_with(GroundSet::finite(FinSet(below)));
  return out;
}

}  // namespace ufam
