#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coshom/chain.hpp"
#include "coshom/cosheaf.hpp"
#include "coshom/field.hpp"
#include "coshom/simplicial_complex.hpp"

namespace coshom {

/// A partial matching: a set of (facet, coface) pairs. Pairs are stored as
/// given; whether they form a *valid* matching (genuine facet relations, no
/// simplex reused) is checked by validate_matching, so tests can build broken
/// instances on purpose.
class PartialMatching {
public:
    PartialMatching() = default;

    /// Records the pair (facet ◁ coface). No validation here.
    void add_pair(const Simplex& facet, const Simplex& coface);

    /// All pairs, sorted by (facet, coface) for determinism.
    const std::vector<std::pair<Simplex, Simplex>>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }

    /// True when s appears in any pair (either side).
    bool is_matched(const Simplex& s) const;
    /// The coface s is matched with, when s appears as the facet of a pair.
    std::optional<Simplex> coface_of(const Simplex& s) const;
    /// The facet s is matched with, when s appears as the coface of a pair.
    std::optional<Simplex> facet_of(const Simplex& s) const;

    bool operator==(const PartialMatching&) const = default;

private:
    std::vector<std::pair<Simplex, Simplex>> pairs_;
};

/// Reports every defect of the matching relative to the complex: pairs whose
/// simplices are missing from k, pairs that are not genuine facet relations,
/// and simplices appearing in more than one pair. Empty report = valid.
std::vector<std::string> validate_matching(const SimplicialComplex& k,
                                           const PartialMatching& matching);

/// True when every level digraph is cycle-free. The level-d digraph has one
/// node per matched pair whose facet has dimension d, and an edge
/// (sigma, tau) -> (sigma', tau') whenever sigma' != sigma and sigma' is a
/// facet of tau. Requires a valid matching.
bool is_acyclic(const SimplicialComplex& k, const PartialMatching& matching);

/// True when every matched facet map facet_map(tau, sigma) is square and
/// invertible (0x0 counts as invertible). Requires a valid acyclic matching.
bool is_cosheaf_compatible(const PartialMatching& matching, const Cosheaf& c);

/// Optional filter on candidate pairs for generate_matching; receives
/// (facet, coface) and may veto the pairing.
using PairPredicate = std::function<bool(const Simplex&, const Simplex&)>;

/// Greedy coreduction. Repeatedly: (a) if some unprocessed simplex tau has
/// exactly one unprocessed facet sigma, facet_map(tau, sigma) is invertible,
/// and the predicate (if any) allows it, pair (sigma ◁ tau); (b) otherwise
/// mark the lexicographically smallest unprocessed simplex of minimal
/// dimension critical. Scan order is dimension-major ascending, lex within a
/// dimension. The result is always valid, acyclic, and c-compatible.
PartialMatching generate_matching(const SimplicialComplex& k, const Cosheaf& c,
                                  const PairPredicate& allowed = {});

/// A zig-zag (sigma_1 ◁ tau_1 ▷ sigma_2 ◁ tau_2 ▷ ... ◁ tau_m) with every
/// (sigma_i ◁ tau_i) a matched pair, sigma_{i+1} a facet of tau_i, and
/// sigma_{i+1} != sigma_i.
struct SigmaPath {
    std::vector<std::pair<Simplex, Simplex>> steps;
    bool operator==(const SigmaPath&) const = default;
};

/// All paths whose first facet sigma_1 is a facet of alpha and whose last
/// coface tau_m has omega as a facet. Requires dim alpha = dim omega + 1 and
/// an acyclic matching (otherwise enumeration could diverge).
std::vector<SigmaPath> enumerate_paths(const SimplicialComplex& k,
                                       const PartialMatching& matching,
                                       const Simplex& alpha, const Simplex& omega);

/// The signed composite
///   +/- [ C^{-1}(tau_m > sigma_m) . C(tau_{m-1} > sigma_m) . ...
///         . C(tau_1 > sigma_2) . C^{-1}(tau_1 > sigma_1) ],
/// a matrix stalk(sigma_1) -> stalk(tau_m). The sign is
/// (-1)^m * prod_i [tau_i : sigma_i] * prod_{i>=2} [tau_{i-1} : sigma_i],
/// computed in the cosheaf's field. Throws when a matched map is not
/// invertible (the matching is then not compatible with c).
Matrix path_weight(const SigmaPath& path, const Cosheaf& c);

/// The block stalk(alpha) -> stalk(omega) of the compressed boundary:
/// the direct term [alpha:omega] * facet_map(alpha, omega) plus, for each
/// path rho, [tau_m:omega] * facet_map(tau_m, omega) . weight(rho)
/// . facet_map(alpha, sigma_1) * [alpha:sigma_1].
Matrix morse_boundary_block(const Simplex& alpha, const Simplex& omega,
                            const PartialMatching& matching, const Cosheaf& c);

/// Critical (unmatched) simplices of k in dimension-major, lex order.
std::vector<Simplex> critical_simplices(const SimplicialComplex& k,
                                        const PartialMatching& matching);

/// The compressed complex plus the data needed to audit it against the full
/// complex.
struct MorseComplexData {
    /// Degree-k space = direct sum of stalks over critical k-simplices (lex
    /// order); boundaries from morse_boundary_block; labels name the critical
    /// simplices' coordinates.
    ChainComplex complex;
    /// Critical simplices per degree, lex order.
    std::vector<std::vector<Simplex>> critical;
    /// Homology dimensions of `complex` and of the uncompressed complex.
    std::vector<std::size_t> morse_homology;
    std::vector<std::size_t> standard_homology;
    /// True when the two homology dimension vectors agree degree-wise.
    bool quasi_isomorphic = false;
};

/// Builds the compressed complex for a valid, acyclic, c-compatible matching.
/// Checks that consecutive compressed boundaries compose to zero before
/// construction and names the first failing (alpha, omega'') block if not
/// (that would be an internal bug, not bad input).
MorseComplexData assemble_morse_complex(const SimplicialComplex& k, const Cosheaf& c,
                                        const PartialMatching& matching);

} // namespace coshom
