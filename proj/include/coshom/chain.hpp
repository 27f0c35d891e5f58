#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coshom/cosheaf.hpp"
#include "coshom/field.hpp"
#include "coshom/simplicial_complex.hpp"

namespace coshom {

/// Names one coordinate of a graded piece: which simplex the coordinate
/// belongs to and which local costalk coordinate it is.
struct BasisLabel {
    Simplex simplex;
    std::size_t coordinate;
    bool operator==(const BasisLabel&) const = default;
};

/// A finite chain complex of F_p vector spaces concentrated in degrees
/// 0..top_degree(), with labeled bases so block structure (which coordinate
/// belongs to which simplex) survives assembly.
class ChainComplex {
public:
    /// dims[k] is the dimension in degree k; boundaries[k-1] is the map
    /// degree k -> k-1 (so boundaries.size() + 1 == dims.size() unless both
    /// are empty); labels may be empty for synthetic complexes. The
    /// composite of consecutive boundaries is checked to vanish.
    ChainComplex(PrimeField field, std::vector<std::size_t> dims,
                 std::vector<Matrix> boundaries,
                 std::vector<std::vector<BasisLabel>> labels = {});

    PrimeField field() const { return field_; }
    /// Highest degree carrying a space, or -1 for the empty complex.
    int top_degree() const { return static_cast<int>(dims_.size()) - 1; }
    /// Dimension in degree k; 0 outside 0..top_degree().
    std::size_t dim(int k) const;
    /// The boundary map C_k -> C_{k-1}, materialized as a zero map of the
    /// right shape outside the stored range.
    Matrix boundary(int k) const;

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<BasisLabel>& labels(int k) const;
    /// Offset of the first coordinate of simplex s inside degree k.
    std::size_t simplex_offset(int k, const Simplex& s) const;

    bool operator==(const ChainComplex&) const = default;

private:
    PrimeField field_;
    std::vector<std::size_t> dims_;
    std::vector<Matrix> boundaries_;
    std::vector<std::vector<BasisLabel>> labels_;
    std::vector<std::map<Simplex, std::size_t>> offsets_;
};

/// The chain complex of a validated cosheaf: degree-k space is the direct
/// sum of costalks over k-simplices (in the complex's lexicographic order),
/// boundary blocks are incidence-signed facet maps.
ChainComplex assemble(const SimplicialComplex& k, const Cosheaf& c);

/// Degree-wise direct sum; labels concatenate (a's block first).
ChainComplex direct_sum_complex(const ChainComplex& a, const ChainComplex& b);

/// Homology in one degree with deterministic cycle representatives and
/// coordinates for arbitrary cycles. Valid for any integer degree (zero
/// space outside the complex's range).
class HomologyGroup {
public:
    HomologyGroup(const ChainComplex& cc, int degree);

    int degree() const { return degree_; }
    std::size_t dimension() const { return sq_.dim(); }
    /// Representing cycles, as coordinate vectors in degree `degree`.
    const std::vector<Vec>& representatives() const { return sq_.representatives(); }
    /// Coordinates of the class of `cycle` in the representative basis;
    /// nullopt when the vector is not a cycle.
    std::optional<Vec> class_coords(const Vec& cycle) const { return sq_.coords(cycle); }

private:
    int degree_;
    Subquotient sq_;
};

inline HomologyGroup homology(const ChainComplex& cc, int degree) {
    return HomologyGroup(cc, degree);
}

/// All homology dimensions, degrees 0..top_degree() (empty for the empty
/// complex).
std::vector<std::size_t> homology_dimensions(const ChainComplex& cc);

/// A degree-wise linear map commuting with the boundaries. Stores value
/// copies of its endpoints; levels outside the stored range materialize as
/// zero maps.
class ChainMap {
public:
    ChainMap(ChainComplex source, ChainComplex target, std::vector<Matrix> levels);

    const ChainComplex& source() const { return source_; }
    const ChainComplex& target() const { return target_; }
    Matrix level(int k) const;

    bool operator==(const ChainMap&) const = default;

private:
    ChainComplex source_;
    ChainComplex target_;
    std::vector<Matrix> levels_;
};

/// The chain map a cosheaf morphism induces (block-diagonal components).
ChainMap chain_map_of_morphism(const SimplicialComplex& k, const CosheafMorphism& phi);

/// The chain map including a complex assembled over a subcomplex into one
/// assembled over a larger complex with the same stalk data (both must carry
/// basis labels; every labeled coordinate of `sub` must exist in `super`).
ChainMap inclusion_chain_map(const ChainComplex& sub, const ChainComplex& super);

/// Matrix of H_k(source) -> H_k(target), [z] -> [phi_k z], in the
/// deterministic homology bases.
Matrix induced_map(const ChainMap& phi, int k);

/// True when the induced map is an isomorphism in every degree.
bool is_quasi_isomorphism(const ChainMap& phi);

/// 0 -> left -> middle -> right -> 0, validated degree-wise at construction:
/// p injective, q surjective, q.p = 0, rank p + rank q = dim middle.
class ShortExactSequence {
public:
    ShortExactSequence(ChainMap p, ChainMap q);

    const ChainComplex& left() const { return p_.source(); }
    const ChainComplex& middle() const { return p_.target(); }
    const ChainComplex& right() const { return q_.target(); }
    const ChainMap& p() const { return p_; }
    const ChainMap& q() const { return q_; }

private:
    ChainMap p_;
    ChainMap q_;
};

/// Degree-wise exactness audit (empty = exact); used by the constructor,
/// exposed for tests.
std::vector<std::string> check_exactness(const ChainMap& p, const ChainMap& q);

/// The snake-lemma connecting map H_k(right) -> H_{k-1}(left): lift a cycle
/// through q, push it through the middle boundary, pull back through p, and
/// take the class. The result does not depend on the lift choices.
Matrix connecting_homomorphism(const ShortExactSequence& s, int k);
/// Same, but the two internal solves eliminate columns in the given orders:
/// lift_order permutes q's degree-k columns (middle basis), pullback_order
/// permutes p's degree-(k-1) columns (left basis); exercises lift
/// independence.
Matrix connecting_homomorphism(const ShortExactSequence& s, int k,
                               const std::vector<std::size_t>& lift_order,
                               const std::vector<std::size_t>& pullback_order);

/// One node of the long exact sequence: which homology group it is and its
/// dimension.
struct LESNode {
    std::string label; // e.g. "H_2(left)"
    int degree;
    std::size_t dimension;
    bool operator==(const LESNode&) const = default;
};

/// The long exact sequence ... -> H_k(left) -> H_k(middle) -> H_k(right)
/// -> H_{k-1}(left) -> ... with every map materialized and an exactness
/// verdict at every node (image of the incoming map = kernel of the
/// outgoing one, by rank counting).
struct LESReport {
    std::vector<LESNode> nodes;
    std::vector<Matrix> maps; // maps[i]: nodes[i] -> nodes[i+1]
    std::vector<bool> exact_at;
    bool all_exact = true;
};

LESReport long_exact_sequence(const ShortExactSequence& s);

} // namespace coshom
