#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "coshom/error.hpp"

namespace coshom {

using VertexId = std::uint32_t;

/// A simplex stored as its strictly increasing vertex list. The ascending
/// order doubles as the canonical local orientation, so incidence signs are
/// a pure function of vertex positions.
class Simplex {
public:
    explicit Simplex(std::vector<VertexId> vertices);
    Simplex(std::initializer_list<VertexId> vertices)
        : Simplex(std::vector<VertexId>(vertices)) {}

    std::size_t dim() const { return verts_.size() - 1; }
    const std::vector<VertexId>& vertices() const { return verts_; }

    /// The facet obtained by deleting the vertex at position i (0-based).
    Simplex facet(std::size_t i) const;

    /// True when `other` is a face of this simplex (vertex subset, any codim;
    /// includes equality).
    bool has_face(const Simplex& other) const;

    std::string to_string() const;

    auto operator<=>(const Simplex&) const = default; // lexicographic on vertices

private:
    std::vector<VertexId> verts_;
};

/// The incidence symbol: (-1)^i when tau is the i-th facet of sigma, else 0.
int incidence(const Simplex& sigma, const Simplex& tau);

/// A finite face-closed set of simplices, indexed by dimension. Within each
/// dimension simplices are kept sorted lexicographically; this fixed order
/// is what chain-level bases and tie-breaking rules are defined against.
class SimplicialComplex {
public:
    SimplicialComplex() = default; // empty complex

    /// Smallest face-closed complex containing all generators.
    static SimplicialComplex close_under_faces(const std::vector<Simplex>& generators);

    /// Top dimension, or -1 for the empty complex.
    int dim() const { return static_cast<int>(by_dim_.size()) - 1; }
    std::size_t size() const;
    bool empty() const { return by_dim_.empty(); }

    bool contains(const Simplex& s) const;
    /// All d-simplices in lexicographic order; empty list outside 0..dim.
    const std::vector<Simplex>& simplices(int d) const;
    /// Position of s within simplices(dim(s)); throws if absent.
    std::size_t index_of(const Simplex& s) const;
    /// Every simplex, dimension-major ascending, lexicographic within.
    std::vector<Simplex> all_simplices() const;

    bool is_subcomplex_of(const SimplicialComplex& other) const;

    /// All cofaces of s (simplices having s as a face, including s itself).
    std::vector<Simplex> open_star(const Simplex& s) const;

    bool operator==(const SimplicialComplex&) const = default;

private:
    std::vector<std::vector<Simplex>> by_dim_;
};

/// Union of two subcomplexes of a common complex (face-closed by closure of
/// the inputs).
SimplicialComplex complex_union(const SimplicialComplex& a, const SimplicialComplex& b);
SimplicialComplex complex_intersection(const SimplicialComplex& a, const SimplicialComplex& b);

} // namespace coshom
