#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "coshom/field.hpp"
#include "coshom/simplicial_complex.hpp"

namespace coshom {

/// Costalk data over a simplicial complex: a finite-dimensional vector space
/// per simplex and a linear map into each facet's costalk. Only
/// codimension-1 maps are stored; deeper maps are composites, which is
/// well-defined once the codimension-2 squares commute (see
/// validate_cosheaf).
///
/// Maps touching a zero-dimensional costalk are forced (the unique map of
/// that shape) and need not be stored; facet_map materializes them.
class Cosheaf {
public:
    Cosheaf(SimplicialComplex base, PrimeField field)
        : base_(std::move(base)), field_(field) {}

    const SimplicialComplex& base() const { return base_; }
    PrimeField field() const { return field_; }

    /// Dimension of the costalk at s (0 unless set). s must be in the base.
    std::size_t stalk_dim(const Simplex& s) const;
    void set_stalk_dim(const Simplex& s, std::size_t d);

    /// True when facet_map(coface, facet) can be produced: either a map was
    /// stored or one side is zero-dimensional (forced shape).
    bool has_facet_map(const Simplex& coface, const Simplex& facet) const;
    /// The stored codimension-1 map, or the forced zero map when either
    /// costalk is zero-dimensional. Throws when the pair is not a facet pair
    /// of the base or a required map is missing.
    Matrix facet_map(const Simplex& coface, const Simplex& facet) const;
    /// Stores a map; shape agreement is checked by validate_cosheaf, not
    /// here, so tests can build deliberately broken instances.
    void set_facet_map(const Simplex& coface, const Simplex& facet, Matrix m);

    /// Composite map costalk(sigma) -> costalk(tau) for any face tau of
    /// sigma; identity when tau = sigma. Requires a validated instance for
    /// the result to be chain-independent.
    Matrix extension_map(const Simplex& sigma, const Simplex& tau) const;

    bool operator==(const Cosheaf& rhs) const;

private:
    SimplicialComplex base_;
    PrimeField field_;
    std::map<Simplex, std::size_t> stalks_;
    std::map<std::pair<Simplex, Simplex>, Matrix> maps_;
};

/// Full functoriality audit: missing or misshapen facet maps, and every
/// codimension-2 square C(tau >= tau'') . C(sigma >= tau) =
/// C(tau' >= tau'') . C(sigma >= tau') that fails to commute. An empty
/// report means the data is a genuine cosheaf.
std::vector<std::string> validate_cosheaf(const Cosheaf& c);

/// All costalks F^d, all facet maps identity.
Cosheaf constant_cosheaf(const SimplicialComplex& k, std::size_t d, PrimeField field);
/// Costalk F at `at`, zero elsewhere.
Cosheaf skyscraper_cosheaf(const SimplicialComplex& k, const Simplex& at, PrimeField field);
/// Stalk-wise direct sum; facet maps become block-diagonal.
Cosheaf direct_sum(const Cosheaf& a, const Cosheaf& b);
/// View data on a subcomplex as data on the larger complex, zero outside.
Cosheaf extend_by_zero(const Cosheaf& c, const SimplicialComplex& k);
/// Keep only the costalks and maps over a subcomplex.
Cosheaf restrict(const Cosheaf& c, const SimplicialComplex& sub);

/// A map of cosheaves over a shared base: one matrix per simplex, natural
/// with respect to the facet maps (see validate_morphism). Unset components
/// default to zero maps of the forced shape.
class CosheafMorphism {
public:
    CosheafMorphism(Cosheaf source, Cosheaf target)
        : source_(std::move(source)), target_(std::move(target)) {}

    const Cosheaf& source() const { return source_; }
    const Cosheaf& target() const { return target_; }

    Matrix component(const Simplex& s) const;
    void set_component(const Simplex& s, Matrix m);

private:
    Cosheaf source_;
    Cosheaf target_;
    std::map<Simplex, Matrix> components_;
};

/// Reports base/field mismatches, bad component shapes, and every facet
/// pair whose naturality square fails.
std::vector<std::string> validate_morphism(const CosheafMorphism& phi);

/// The degree-k fibre cohomology cosheaf of a simplicial map given on
/// vertices: the costalk at tau is H^k of the subcomplex of `source` mapped
/// into the closed simplex tau, and facet maps are induced by cochain
/// restriction, all in deterministically chosen bases.
Cosheaf fibre_cohomology_cosheaf(const SimplicialComplex& source,
                                 const SimplicialComplex& target,
                                 const std::map<VertexId, VertexId>& vertex_map,
                                 std::size_t degree, PrimeField field);

} // namespace coshom
