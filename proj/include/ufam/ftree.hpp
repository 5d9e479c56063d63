#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ufam/adequacy.hpp"
#include "ufam/common.hpp"
#include "ufam/family.hpp"
#include "ufam/finset.hpp"
#include "ufam/groundset.hpp"

namespace ufam {

/// Finite description of an infinitely branching well-founded tree whose
/// terminal nodes are exactly the prefixes with an omega-uniform remainder.
/// A node takes its successor set from the rule with the longest listed
/// prefix that is an initial segment of it; terminality is always computed,
/// declared flags are only checked.
struct FTreeSchema {
  struct Rule {
    FinSet prefix;
    GroundSet successors;
    std::string successors_src;
    std::optional<bool> terminal_declared;
  };
  std::vector<Rule> rules;
  Nat depth{4};

  static FTreeSchema parse_json(const std::string& text);
  static FTreeSchema load_file(const std::string& path);
  const Rule* match(const FinSet& node) const;
};

struct FTreeValidation {
  bool valid{true};
  std::vector<std::string> violations;
};

/// How a prefix sits relative to the front: past a member / a member /
/// internal (rank above omega) / terminal (rank exactly omega).
enum class NodeStatus { invalid, member, internal, terminal };
NodeStatus node_status(const FamilyBuilder& B, const FinSet& s);

/// True iff the restriction chain along s lands on uniform rank exactly
/// omega. Rejects s that is not a prefix of any member.
bool a_front_member(const FamilyBuilder& B, const FinSet& s);

/// Structural check of the three tree conditions on the schema.
/// pre: uniform rank of B above omega.
FTreeValidation validate_ftree(const FamilyBuilder& B, const FTreeSchema& T);

/// First `budget` blocks {n} + t_{n+1}^{F_s} contributed by tree nodes
/// s + {n}, in the canonical order (max element, then depth, then lex).
std::vector<FinSet> et_expand(const FamilyBuilder& B, const FTreeSchema& T,
                              std::size_t budget);

/// All contributions from nodes whose elements stay <= bound; complete for
/// that horizon.
std::vector<FinSet> et_expand_up_to(const FamilyBuilder& B, const FTreeSchema& T,
                                    Nat bound);

/// All tree nodes with elements <= bound, in canonical order.
std::vector<FinSet> tree_nodes_up_to(const FamilyBuilder& B, const FTreeSchema& T,
                                     Nat bound);

/// Adequacy certificate for the expansion set, built by induction on the
/// rank along the tree (independent of is_adequate).
AdequacyTranscript et_adequate_certificate(const FamilyBuilder& B,
                                           const FTreeSchema& T);

/// Exact ground-set form of the expansion set, when the root contributions
/// have affine lengths and eventually merge into a final segment.
std::optional<GroundSet> et_groundset(const FamilyBuilder& B,
                                      const FTreeSchema& T);

}  // namespace ufam
