#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ufam/common.hpp"
#include "ufam/family.hpp"
#include "ufam/finset.hpp"
#include "ufam/groundset.hpp"

namespace ufam {

/// Evidence tree for an adequacy decision. verdict=true implies witnesses is
/// nonempty and every subtranscript verdict is true. certified marks verdicts
/// established exactly from the ground set's normal form (as opposed to a
/// bounded search that came up empty).
struct AdequacyTranscript {
  enum class Case { rank2, successor, limit };

  bool verdict{false};
  Case kase{Case::rank2};
  bool certified{true};
  Nat window{0};
  std::string note;

  struct Witness {
    std::optional<Nat> n;       // successor/rank2 witness index
    std::optional<FinSet> v;    // limit-case finite descent
    std::string rank;           // uniform rank of the restricted family
    std::shared_ptr<AdequacyTranscript> sub;
  };
  std::vector<Witness> witnesses;
};

const char* adequacy_case_name(AdequacyTranscript::Case c);

/// Arbitrarily long intervals of consecutive integers.
bool is_omega_adequate(const GroundSet& M);

/// Membership of n in the witness set M(F). pre: uniform rank of B is a
/// successor >= 2 and n lies in M.
bool m_set_contains(const FamilyBuilder& B, const GroundSet& M, Nat n);

/// Full adequacy decision with transcript. pre: uniform rank >= 2, M infinite
/// above the family base. `window` caps the candidate search only where the
/// normal form leaves the witness set infinite.
AdequacyTranscript is_adequate(const FamilyBuilder& B, const GroundSet& M,
                               Nat window = 64);

}  // namespace ufam
