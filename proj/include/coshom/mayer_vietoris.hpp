#pragma once

#include <string>
#include <vector>

#include "coshom/chain.hpp"
#include "coshom/cosheaf.hpp"
#include "coshom/morse.hpp"
#include "coshom/simplicial_complex.hpp"

namespace coshom {

/// A two-piece cover of a complex: k = union(l, m), i = intersection(l, m).
struct Decomposition {
    SimplicialComplex k, l, m, i;
};

/// Validates that l and m are subcomplexes of k covering it and computes the
/// intersection.
Decomposition check_decomposition(const SimplicialComplex& k, const SimplicialComplex& l,
                                  const SimplicialComplex& m);

/// The short exact sequence
///   0 -> C(I) --p--> C(L) + C(M) --q--> C(K) -> 0
/// with p = (include into L, include into M) stacked and
/// q = (include into K | -include into K). The middle term concatenates the
/// L basis then the M basis; `middle_grouping[d]` permutes those columns into
/// the (L-only, I-inside-L, I-inside-M, M-only) block picture: entry j of the
/// grouping is the middle-basis index that comes j-th in the regrouped order.
struct MayerVietorisData {
    Decomposition dec;
    ShortExactSequence ses;
    std::vector<std::vector<std::size_t>> middle_grouping;
};

/// Builds and verifies the sequence; exactness failure (impossible for valid
/// input) aborts naming the offending degree.
MayerVietorisData build_mv_ses(const Decomposition& d, const Cosheaf& c);

/// True when no pair straddles the subcomplex boundary: for every pair,
/// the facet lies in m exactly when the coface does.
bool matching_subcomplex_compatible(const PartialMatching& matching,
                                    const SimplicialComplex& m);

/// The pairs lying inside m. Requires a compatible matching; the result is
/// acyclic whenever the input is (its level digraphs are subgraphs).
PartialMatching restrict_matching(const PartialMatching& matching,
                                  const SimplicialComplex& m);

/// One homology-level face of the commuting cube: the map induced by one of
/// the four inclusions (I->L, I->M, L->K, M->K) in one degree, computed both
/// on the full complexes and on the compressed ones.
struct CubeEdge {
    std::string inclusion;
    int degree = 0;
    std::size_t standard_rank = 0;
    std::size_t morse_rank = 0;
    /// Ranks agree (the homology dimensions of the endpoints agree by the
    /// per-piece quasi-isomorphism checks).
    bool agrees = false;
};

/// The compressed Mayer-Vietoris sequence plus the audit trail tying it back
/// to the standard one.
struct MorseMVData {
    /// 0 -> M(I) -> M(L) + M(M) -> M(K) -> 0 over critical cells.
    ShortExactSequence ses;
    /// Compression data for I, L, M, K in that order.
    MorseComplexData left, piece_l, piece_m, right;
    /// Same convention as MayerVietorisData::middle_grouping.
    std::vector<std::vector<std::size_t>> middle_grouping;
    std::vector<CubeEdge> cube;
    /// True when every cube edge agrees and every piece is quasi-isomorphic
    /// to its uncompressed complex.
    bool cube_commutes = false;
};

/// Builds the compressed sequence for a matching compatible with the cosheaf
/// and with both cover pieces. Verifies exactness, the vanishing of boundary
/// blocks that would leave a piece (a theorem; violation aborts), and the
/// homology-level cube.
MorseMVData build_morse_mv_ses(const Decomposition& d, const Cosheaf& c,
                               const PartialMatching& matching);

/// Verdict of comparing two long exact sequences up to isomorphism: node
/// dimensions must agree and corresponding maps must have equal ranks.
struct LESComparison {
    bool isomorphic = false;
    /// Names the first differing node or map when not isomorphic.
    std::string first_difference;
};

LESComparison compare_les(const LESReport& a, const LESReport& b);

} // namespace coshom
