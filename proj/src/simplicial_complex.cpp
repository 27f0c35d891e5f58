#include "coshom/simplicial_complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace coshom {

Simplex::Simplex(std::vector<VertexId> vertices) : verts_(std::move(vertices)) {
    if (verts_.empty()) throw InvalidInput("simplex needs at least one vertex");
    for (std::size_t i = 1; i < verts_.size(); ++i)
        if (verts_[i - 1] >= verts_[i])
            throw InvalidInput("simplex vertices must be strictly increasing: " + to_string());
}

Simplex Simplex::facet(std::size_t i) const {
    if (dim() < 1) throw InvalidInput("a vertex has no facets");
    if (i >= verts_.size())
        throw InvalidInput("facet index " + std::to_string(i) + " out of range for " +
                           to_string());
    std::vector<VertexId> v = verts_;
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
    return Simplex(std::move(v));
}

bool Simplex::has_face(const Simplex& other) const {
    return std::includes(verts_.begin(), verts_.end(), other.verts_.begin(),
                         other.verts_.end());
}

std::string Simplex::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < verts_.size(); ++i) os << (i ? "," : "") << verts_[i];
    os << ")";
    return os.str();
}

int incidence(const Simplex& sigma, const Simplex& tau) {
    if (sigma.dim() != tau.dim() + 1) return 0;
    const auto& sv = sigma.vertices();
    const auto& tv = tau.vertices();
    // tau must be sigma with exactly one vertex (position i) removed.
    std::size_t i = sv.size(); // removed position, if any
    std::size_t a = 0, b = 0;
    while (a < sv.size()) {
        if (b < tv.size() && sv[a] == tv[b]) {
            ++a, ++b;
        } else if (i == sv.size()) {
            i = a++;
        } else {
            return 0; // second mismatch: not a facet
        }
    }
    if (b != tv.size()) return 0;
    if (i == sv.size()) return 0; // identical lists can't happen (dims differ)
    return i % 2 == 0 ? +1 : -1;
}

SimplicialComplex SimplicialComplex::close_under_faces(const std::vector<Simplex>& generators) {
    std::set<Simplex> seen;
    std::vector<Simplex> stack = generators;
    while (!stack.empty()) {
        Simplex s = std::move(stack.back());
        stack.pop_back();
        if (!seen.insert(s).second) continue;
        if (s.dim() >= 1)
            for (std::size_t i = 0; i <= s.dim(); ++i) stack.push_back(s.facet(i));
    }
    SimplicialComplex k;
    for (const Simplex& s : seen) {
        if (k.by_dim_.size() <= s.dim()) k.by_dim_.resize(s.dim() + 1);
        k.by_dim_[s.dim()].push_back(s);
    }
    // std::set iterates lexicographically, which within a fixed dimension is
    // exactly the order we keep, so each bucket is already sorted.
    return k;
}

std::size_t SimplicialComplex::size() const {
    std::size_t n = 0;
    for (const auto& bucket : by_dim_) n += bucket.size();
    return n;
}

bool SimplicialComplex::contains(const Simplex& s) const {
    int d = static_cast<int>(s.dim());
    if (d > dim()) return false;
    const auto& bucket = by_dim_[static_cast<std::size_t>(d)];
    return std::binary_search(bucket.begin(), bucket.end(), s);
}

const std::vector<Simplex>& SimplicialComplex::simplices(int d) const {
    static const std::vector<Simplex> none;
    if (d < 0 || d > dim()) return none;
    return by_dim_[static_cast<std::size_t>(d)];
}

std::size_t SimplicialComplex::index_of(const Simplex& s) const {
    const auto& bucket = simplices(static_cast<int>(s.dim()));
    auto it = std::lower_bound(bucket.begin(), bucket.end(), s);
    if (it == bucket.end() || *it != s)
        throw InvalidInput("simplex " + s.to_string() + " is not in the complex");
    return static_cast<std::size_t>(it - bucket.begin());
}

std::vector<Simplex> SimplicialComplex::all_simplices() const {
    std::vector<Simplex> out;
    out.reserve(size());
    for (const auto& bucket : by_dim_) out.insert(out.end(), bucket.begin(), bucket.end());
    return out;
}

bool SimplicialComplex::is_subcomplex_of(const SimplicialComplex& other) const {
    for (const auto& bucket : by_dim_)
        for (const Simplex& s : bucket)
            if (!other.contains(s)) return false;
    return true;
}

std::vector<Simplex> SimplicialComplex::open_star(const Simplex& s) const {
    if (!contains(s)) throw InvalidInput("open_star: " + s.to_string() + " not in complex");
    std::vector<Simplex> out;
    for (int d = static_cast<int>(s.dim()); d <= dim(); ++d)
        for (const Simplex& x : simplices(d))
            if (x.has_face(s)) out.push_back(x);
    return out;
}

namespace {

SimplicialComplex from_sorted(std::vector<std::vector<Simplex>> by_dim) {
    // Rebuild through the closure so invariants hold even for callers that
    // passed non-closed data; cheap at the scales this library targets.
    std::vector<Simplex> gens;
    for (auto& bucket : by_dim) for (auto& s : bucket) gens.push_back(std::move(s));
    return SimplicialComplex::close_under_faces(gens);
}

} // namespace

SimplicialComplex complex_union(const SimplicialComplex& a, const SimplicialComplex& b) {
    std::vector<std::vector<Simplex>> merged;
    int top = std::max(a.dim(), b.dim());
    for (int d = 0; d <= top; ++d) {
        std::vector<Simplex> bucket;
        std::set_union(a.simplices(d).begin(), a.simplices(d).end(), b.simplices(d).begin(),
                       b.simplices(d).end(), std::back_inserter(bucket));
        merged.push_back(std::move(bucket));
    }
    return from_sorted(std::move(merged));
}

SimplicialComplex complex_intersection(const SimplicialComplex& a, const SimplicialComplex& b) {
    std::vector<std::vector<Simplex>> merged;
    int top = std::min(a.dim(), b.dim());
    for (int d = 0; d <= top; ++d) {
        std::vector<Simplex> bucket;
        std::set_intersection(a.simplices(d).begin(), a.simplices(d).end(),
                              b.simplices(d).begin(), b.simplices(d).end(),
                              std::back_inserter(bucket));
        merged.push_back(std::move(bucket));
    }
    return from_sorted(std::move(merged));
}

} // namespace coshom
