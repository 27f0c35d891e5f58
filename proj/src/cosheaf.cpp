#include "coshom/cosheaf.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace coshom {

namespace {

std::string shape_of(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

} // namespace

std::size_t Cosheaf::stalk_dim(const Simplex& s) const {
    if (!base_.contains(s))
        throw InvalidInput("stalk_dim: " + s.to_string() + " not in the base complex");
    auto it = stalks_.find(s);
    return it == stalks_.end() ? 0 : it->second;
}

void Cosheaf::set_stalk_dim(const Simplex& s, std::size_t d) {
    if (!base_.contains(s))
        throw InvalidInput("set_stalk_dim: " + s.to_string() + " not in the base complex");
    if (d == 0)
        stalks_.erase(s);
    else
        stalks_[s] = d;
}

bool Cosheaf::has_facet_map(const Simplex& coface, const Simplex& facet) const {
    if (maps_.count({coface, facet})) return true;
    return stalk_dim(coface) == 0 || stalk_dim(facet) == 0;
}

Matrix Cosheaf::facet_map(const Simplex& coface, const Simplex& facet) const {
    if (incidence(coface, facet) == 0)
        throw InvalidInput("facet_map: " + facet.to_string() + " is not a facet of " +
                           coface.to_string());
    auto it = maps_.find({coface, facet});
    if (it != maps_.end()) return it->second;
    std::size_t rows = stalk_dim(facet), cols = stalk_dim(coface);
    if (rows == 0 || cols == 0) return Matrix(rows, cols, field_);
    throw InvalidInput("missing facet map " + coface.to_string() + " -> " + facet.to_string());
}

void Cosheaf::set_facet_map(const Simplex& coface, const Simplex& facet, Matrix m) {
    if (!base_.contains(coface) || !base_.contains(facet))
        throw InvalidInput("set_facet_map: simplices must lie in the base complex");
    if (incidence(coface, facet) == 0)
        throw InvalidInput("set_facet_map: " + facet.to_string() + " is not a facet of " +
                           coface.to_string());
    maps_.insert_or_assign({coface, facet}, std::move(m));
}

Matrix Cosheaf::extension_map(const Simplex& sigma, const Simplex& tau) const {
    if (!base_.contains(sigma) || !base_.contains(tau))
        throw InvalidInput("extension_map: simplices must lie in the base complex");
    if (!sigma.has_face(tau))
        throw InvalidInput("extension_map: " + tau.to_string() + " is not a face of " +
                           sigma.to_string());
    Matrix m = Matrix::identity(stalk_dim(sigma), field_);
    // Walk down one facet at a time, always deleting the smallest vertex not
    // in tau; any descending chain works once the instance validates.
    Simplex cur = sigma;
    while (cur != tau) {
        const auto& cv = cur.vertices();
        const auto& tv = tau.vertices();
        std::size_t pos = 0, b = 0;
        for (std::size_t a = 0; a < cv.size(); ++a) {
            if (b < tv.size() && cv[a] == tv[b]) {
                ++b;
                continue;
            }
            pos = a;
            break;
        }
        Simplex nxt = cur.facet(pos);
        m = facet_map(cur, nxt) * m;
        cur = std::move(nxt);
    }
    return m;
}

bool Cosheaf::operator==(const Cosheaf& rhs) const {
    if (base_ != rhs.base_ || field_ != rhs.field_) return false;
    for (const auto& s : base_.all_simplices())
        if (stalk_dim(s) != rhs.stalk_dim(s)) return false;
    for (int d = 1; d <= base_.dim(); ++d)
        for (const auto& s : base_.simplices(d))
            for (std::size_t i = 0; i <= s.dim(); ++i) {
                Simplex t = s.facet(i);
                bool ha = has_facet_map(s, t), hb = rhs.has_facet_map(s, t);
                if (ha != hb) return false;
                if (ha && facet_map(s, t) != rhs.facet_map(s, t)) return false;
            }
    return true;
}

std::vector<std::string> validate_cosheaf(const Cosheaf& c) {
    std::vector<std::string> out;
    const SimplicialComplex& k = c.base();
    for (int d = 1; d <= k.dim(); ++d)
        for (const auto& s : k.simplices(d))
            for (std::size_t i = 0; i <= s.dim(); ++i) {
                Simplex t = s.facet(i);
                if (!c.has_facet_map(s, t)) {
                    out.push_back("missing facet map " + s.to_string() + " -> " +
                                  t.to_string());
                    continue;
                }
                Matrix m = c.facet_map(s, t);
                if (m.rows() != c.stalk_dim(t) || m.cols() != c.stalk_dim(s))
                    out.push_back("facet map " + s.to_string() + " -> " + t.to_string() +
                                  " has shape " + shape_of(m) + ", expected " +
                                  std::to_string(c.stalk_dim(t)) + "x" +
                                  std::to_string(c.stalk_dim(s)));
            }
    // Codimension-2 squares: delete vertex positions a then b-1, or b then a.
    for (int d = 2; d <= k.dim(); ++d)
        for (const auto& s : k.simplices(d))
            for (std::size_t a = 0; a + 1 <= s.dim(); ++a)
                for (std::size_t b = a + 1; b <= s.dim(); ++b) {
                    Simplex ta = s.facet(a), tb = s.facet(b);
                    Simplex tt = ta.facet(b - 1);
                    try {
                        Matrix lhs = c.facet_map(ta, tt) * c.facet_map(s, ta);
                        Matrix rhs = c.facet_map(tb, tt) * c.facet_map(s, tb);
                        if (lhs != rhs)
                            out.push_back("square " + s.to_string() + " => " +
                                          tt.to_string() + " does not commute");
                    } catch (const Error&) {
                        // missing/misshapen maps are already reported above
                    }
                }
    return out;
}

Cosheaf constant_cosheaf(const SimplicialComplex& k, std::size_t d, PrimeField field) {
    Cosheaf c(k, field);
    if (d == 0) return c;
    for (const auto& s : k.all_simplices()) c.set_stalk_dim(s, d);
    Matrix id = Matrix::identity(d, field);
    for (int dd = 1; dd <= k.dim(); ++dd)
        for (const auto& s : k.simplices(dd))
            for (std::size_t i = 0; i <= s.dim(); ++i) c.set_facet_map(s, s.facet(i), id);
    return c;
}

Cosheaf skyscraper_cosheaf(const SimplicialComplex& k, const Simplex& at, PrimeField field) {
    if (!k.contains(at))
        throw InvalidInput("skyscraper_cosheaf: " + at.to_string() + " not in the complex");
    Cosheaf c(k, field);
    c.set_stalk_dim(at, 1);
    return c; // every facet map touches a zero costalk, all forced
}

Cosheaf direct_sum(const Cosheaf& a, const Cosheaf& b) {
    if (a.base() != b.base() || a.field() != b.field())
        throw InvalidInput("direct_sum: summands must share base and field");
    Cosheaf c(a.base(), a.field());
    for (const auto& s : a.base().all_simplices())
        c.set_stalk_dim(s, a.stalk_dim(s) + b.stalk_dim(s));
    for (int d = 1; d <= a.base().dim(); ++d)
        for (const auto& s : a.base().simplices(d))
            for (std::size_t i = 0; i <= s.dim(); ++i) {
                Simplex t = s.facet(i);
                std::size_t rows = c.stalk_dim(t), cols = c.stalk_dim(s);
                if (rows == 0 || cols == 0) continue; // forced
                Matrix block(rows, cols, a.field());
                block.insert_block(0, 0, a.facet_map(s, t));
                block.insert_block(a.stalk_dim(t), a.stalk_dim(s), b.facet_map(s, t));
                c.set_facet_map(s, t, std::move(block));
            }
    return c;
}

Cosheaf extend_by_zero(const Cosheaf& c, const SimplicialComplex& k) {
    if (!c.base().is_subcomplex_of(k))
        throw InvalidInput("extend_by_zero: cosheaf base is not a subcomplex of the target");
    Cosheaf out(k, c.field());
    for (const auto& s : c.base().all_simplices()) out.set_stalk_dim(s, c.stalk_dim(s));
    for (int d = 1; d <= c.base().dim(); ++d)
        for (const auto& s : c.base().simplices(d))
            for (std::size_t i = 0; i <= s.dim(); ++i) {
                Simplex t = s.facet(i);
                if (c.stalk_dim(s) > 0 && c.stalk_dim(t) > 0)
                    out.set_facet_map(s, t, c.facet_map(s, t));
            }
    return out;
}

Cosheaf restrict(const Cosheaf& c, const SimplicialComplex& sub) {
    if (!sub.is_subcomplex_of(c.base()))
        throw InvalidInput("restrict: target is not a subcomplex of the cosheaf base");
    Cosheaf out(sub, c.field());
    for (const auto& s : sub.all_simplices()) out.set_stalk_dim(s, c.stalk_dim(s));
    for (int d = 1; d <= sub.dim(); ++d)
        for (const auto& s : sub.simplices(d))
            for (std::size_t i = 0; i <= s.dim(); ++i) {
                Simplex t = s.facet(i);
                if (c.stalk_dim(s) > 0 && c.stalk_dim(t) > 0)
                    out.set_facet_map(s, t, c.facet_map(s, t));
            }
    return out;
}

Matrix CosheafMorphism::component(const Simplex& s) const {
    auto it = components_.find(s);
    if (it != components_.end()) return it->second;
    return Matrix(target_.stalk_dim(s), source_.stalk_dim(s), source_.field());
}

void CosheafMorphism::set_component(const Simplex& s, Matrix m) {
    if (!source_.base().contains(s))
        throw InvalidInput("set_component: " + s.to_string() + " not in the base complex");
    components_.insert_or_assign(s, std::move(m));
}

std::vector<std::string> validate_morphism(const CosheafMorphism& phi) {
    std::vector<std::string> out;
    if (phi.source().base() != phi.target().base()) {
        out.push_back("source and target live on different base complexes");
        return out;
    }
    if (phi.source().field() != phi.target().field()) {
        out.push_back("source and target use different fields");
        return out;
    }
    const SimplicialComplex& k = phi.source().base();
    for (const auto& s : k.all_simplices()) {
        Matrix m = phi.component(s);
        if (m.rows() != phi.target().stalk_dim(s) || m.cols() != phi.source().stalk_dim(s))
            out.push_back("component at " + s.to_string() + " has shape " + shape_of(m));
    }
    for (int d = 1; d <= k.dim(); ++d)
        for (const auto& s : k.simplices(d))
            for (std::size_t i = 0; i <= s.dim(); ++i) {
                Simplex t = s.facet(i);
                try {
                    Matrix lhs = phi.target().facet_map(s, t) * phi.component(s);
                    Matrix rhs = phi.component(t) * phi.source().facet_map(s, t);
                    if (lhs != rhs)
                        out.push_back("naturality fails on " + s.to_string() + " -> " +
                                      t.to_string());
                } catch (const Error& e) {
                    out.push_back(std::string("naturality check on ") + s.to_string() +
                                  " -> " + t.to_string() + " failed: " + e.what());
                }
            }
    return out;
}

namespace {

/// Coboundary d_j: cochains on j-simplices -> cochains on (j+1)-simplices,
/// entries given by the incidence symbol (transpose of the boundary).
Matrix coboundary(const SimplicialComplex& x, int j, PrimeField f) {
    const auto& rows = x.simplices(j + 1);
    const auto& cols = x.simplices(j);
    Matrix m(rows.size(), cols.size(), f);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            m.set_int(r, c, incidence(rows[r], cols[c]));
    return m;
}

Simplex map_simplex(const Simplex& s, const std::map<VertexId, VertexId>& vm) {
    std::set<VertexId> image;
    for (VertexId v : s.vertices()) {
        auto it = vm.find(v);
        if (it == vm.end())
            throw InvalidInput("vertex map does not cover vertex " + std::to_string(v));
        image.insert(it->second);
    }
    return Simplex(std::vector<VertexId>(image.begin(), image.end()));
}

} // namespace

Cosheaf fibre_cohomology_cosheaf(const SimplicialComplex& source,
                                 const SimplicialComplex& target,
                                 const std::map<VertexId, VertexId>& vertex_map,
                                 std::size_t degree, PrimeField field) {
    // A simplicial map must carry every simplex of the source onto a simplex
    // of the target (vertex images, collapsed and sorted).
    std::map<Simplex, Simplex> image;
    for (const auto& s : source.all_simplices()) {
        Simplex img = map_simplex(s, vertex_map);
        if (!target.contains(img))
            throw InvalidInput("vertex map is not simplicial: image " + img.to_string() +
                               " of " + s.to_string() + " is not in the target complex");
        image.emplace(s, std::move(img));
    }

    // Fibre over tau: all source simplices mapped into the closed simplex
    // tau. Face-closed because images of faces are faces of images.
    auto fibre = [&](const Simplex& tau) {
        std::vector<Simplex> members;
        for (const auto& [s, img] : image)
            if (tau.has_face(img)) members.push_back(s);
        return SimplicialComplex::close_under_faces(members);
    };

    int k = static_cast<int>(degree);
    struct StalkData {
        SimplicialComplex fib;
        Subquotient coh;
    };
    std::map<Simplex, StalkData> stalks;
    for (const auto& tau : target.all_simplices()) {
        SimplicialComplex fib = fibre(tau);
        Matrix out = coboundary(fib, k, field);
        Matrix in = k == 0 ? Matrix(fib.simplices(0).size(), 0, field)
                           : coboundary(fib, k - 1, field);
        Subquotient coh(out, in);
        stalks.emplace(tau, StalkData{std::move(fib), std::move(coh)});
    }

    Cosheaf c(target, field);
    for (const auto& [tau, data] : stalks) c.set_stalk_dim(tau, data.coh.dim());
    for (int d = 1; d <= target.dim(); ++d)
        for (const auto& tau : target.simplices(d))
            for (std::size_t i = 0; i <= tau.dim(); ++i) {
                Simplex tp = tau.facet(i);
                const StalkData& big = stalks.at(tau);
                const StalkData& small = stalks.at(tp);
                if (big.coh.dim() == 0 || small.coh.dim() == 0) continue; // forced
                // Restrict each representative cocycle to the smaller fibre
                // and read off its class coordinates there.
                const auto& big_cells = big.fib.simplices(k);
                const auto& small_cells = small.fib.simplices(k);
                std::vector<Vec> cols;
                for (const Vec& rep : big.coh.representatives()) {
                    Vec restricted(small_cells.size(), 0);
                    for (std::size_t j = 0; j < small_cells.size(); ++j)
                        restricted[j] = rep[static_cast<std::size_t>(
                            std::lower_bound(big_cells.begin(), big_cells.end(),
                                             small_cells[j]) -
                            big_cells.begin())];
                    auto coords = small.coh.coords(restricted);
                    if (!coords)
                        throw InternalCheckFailure(
                            "restricted cocycle left the kernel at " + tp.to_string());
                    cols.push_back(*coords);
                }
                c.set_facet_map(tau, tp,
                                Matrix::from_columns(cols, small.coh.dim(), field));
            }
    return c;
}

} // namespace coshom
