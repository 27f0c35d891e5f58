#include "coshom/chain.hpp"

#include <algorithm>
#include <numeric>

namespace coshom {

namespace {

std::vector<std::size_t> natural(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace

ChainComplex::ChainComplex(PrimeField field, std::vector<std::size_t> dims,
                           std::vector<Matrix> boundaries,
                           std::vector<std::vector<BasisLabel>> labels)
    : field_(field), dims_(std::move(dims)), boundaries_(std::move(boundaries)),
      labels_(std::move(labels)) {
    if (dims_.empty()) {
        if (!boundaries_.empty() || !labels_.empty())
            throw InvalidInput("empty complex cannot carry boundaries or labels");
        return;
    }
    if (boundaries_.size() + 1 != dims_.size())
        throw InvalidInput("need exactly one boundary map per positive degree");
    for (std::size_t k = 1; k < dims_.size(); ++k) {
        const Matrix& b = boundaries_[k - 1];
        if (b.rows() != dims_[k - 1] || b.cols() != dims_[k] || b.field() != field_)
            throw InvalidInput("boundary in degree " + std::to_string(k) +
                               " has the wrong shape or field");
    }
    for (std::size_t k = 2; k < dims_.size(); ++k)
        if (!(boundaries_[k - 2] * boundaries_[k - 1]).is_zero())
            throw InvalidInput("boundary composite in degrees " + std::to_string(k) + "->" +
                               std::to_string(k - 2) + " is nonzero");
    if (!labels_.empty()) {
        if (labels_.size() != dims_.size())
            throw InvalidInput("label table must cover every degree");
        offsets_.resize(labels_.size());
        for (std::size_t k = 0; k < labels_.size(); ++k) {
            if (labels_[k].size() != dims_[k])
                throw InvalidInput("degree " + std::to_string(k) +
                                   " has labels for the wrong dimension");
            for (std::size_t i = 0; i < labels_[k].size(); ++i)
                offsets_[k].try_emplace(labels_[k][i].simplex, i);
        }
    }
}

std::size_t ChainComplex::dim(int k) const {
    if (k < 0 || k > top_degree()) return 0;
    return dims_[static_cast<std::size_t>(k)];
}

Matrix ChainComplex::boundary(int k) const {
    if (k >= 1 && k <= top_degree()) return boundaries_[static_cast<std::size_t>(k - 1)];
    return Matrix(dim(k - 1), dim(k), field_);
}

const std::vector<BasisLabel>& ChainComplex::labels(int k) const {
    static const std::vector<BasisLabel> none;
    if (labels_.empty() || k < 0 || k > top_degree()) return none;
    return labels_[static_cast<std::size_t>(k)];
}

std::size_t ChainComplex::simplex_offset(int k, const Simplex& s) const {
    if (offsets_.empty() || k < 0 || k > top_degree())
        throw InvalidInput("simplex_offset: no labels in degree " + std::to_string(k));
    const auto& table = offsets_[static_cast<std::size_t>(k)];
    auto it = table.find(s);
    if (it == table.end())
        throw InvalidInput("simplex_offset: " + s.to_string() + " has no coordinates in degree " +
                           std::to_string(k));
    return it->second;
}

ChainComplex assemble(const SimplicialComplex& k, const Cosheaf& c) {
    if (c.base() != k)
        throw InvalidInput("assemble: cosheaf lives on a different complex");
    auto violations = validate_cosheaf(c);
    if (!violations.empty())
        throw ValidationError("assemble: cosheaf is invalid (" +
                              std::to_string(violations.size()) +
                              " problem(s); first: " + violations.front() + ")");
    int top = k.dim();
    if (top < 0) return ChainComplex(c.field(), {}, {});

    std::vector<std::size_t> dims;
    std::vector<std::vector<BasisLabel>> labels;
    for (int d = 0; d <= top; ++d) {
        std::size_t total = 0;
        std::vector<BasisLabel> lab;
        for (const auto& s : k.simplices(d)) {
            std::size_t sd = c.stalk_dim(s);
            for (std::size_t i = 0; i < sd; ++i) lab.push_back({s, i});
            total += sd;
        }
        dims.push_back(total);
        labels.push_back(std::move(lab));
    }

    // Per-degree offsets of each simplex's block, in lexicographic order.
    auto offsets_for = [&](int d) {
        std::map<Simplex, std::size_t> off;
        std::size_t at = 0;
        for (const auto& s : k.simplices(d)) {
            off.emplace(s, at);
            at += c.stalk_dim(s);
        }
        return off;
    };

    std::vector<Matrix> boundaries;
    for (int d = 1; d <= top; ++d) {
        auto row_off = offsets_for(d - 1);
        auto col_off = offsets_for(d);
        Matrix bd(dims[static_cast<std::size_t>(d - 1)], dims[static_cast<std::size_t>(d)],
                  c.field());
        for (const auto& s : k.simplices(d)) {
            if (c.stalk_dim(s) == 0) continue;
            for (std::size_t i = 0; i <= s.dim(); ++i) {
                Simplex t = s.facet(i);
                if (c.stalk_dim(t) == 0) continue;
                std::uint32_t sign = c.field().from_int(incidence(s, t));
                bd.add_block(row_off.at(t), col_off.at(s),
                             c.facet_map(s, t).scaled(sign));
            }
        }
        boundaries.push_back(std::move(bd));
    }
    return ChainComplex(c.field(), std::move(dims), std::move(boundaries), std::move(labels));
}

ChainComplex direct_sum_complex(const ChainComplex& a, const ChainComplex& b) {
    if (a.field() != b.field())
        throw InvalidInput("direct_sum_complex: fields differ");
    int top = std::max(a.top_degree(), b.top_degree());
    if (top < 0) return ChainComplex(a.field(), {}, {});
    std::vector<std::size_t> dims;
    std::vector<Matrix> boundaries;
    std::vector<std::vector<BasisLabel>> labels;
    bool labeled = a.has_labels() && b.has_labels();
    for (int k = 0; k <= top; ++k) {
        dims.push_back(a.dim(k) + b.dim(k));
        if (labeled) {
            std::vector<BasisLabel> lab = a.labels(k);
            const auto& bl = b.labels(k);
            lab.insert(lab.end(), bl.begin(), bl.end());
            labels.push_back(std::move(lab));
        }
        if (k >= 1) {
            Matrix bd(a.dim(k - 1) + b.dim(k - 1), a.dim(k) + b.dim(k), a.field());
            bd.insert_block(0, 0, a.boundary(k));
            bd.insert_block(a.dim(k - 1), a.dim(k), b.boundary(k));
            boundaries.push_back(std::move(bd));
        }
    }
    // Concatenated labels can repeat a simplex across the two blocks, which
    // simplex_offset cannot disambiguate; keep labels only when disjoint.
    if (labeled)
        for (int k = 0; k <= top; ++k)
            for (const auto& la : a.labels(k))
                for (const auto& lb : b.labels(k))
                    if (la.simplex == lb.simplex) labeled = false;
    return ChainComplex(a.field(), std::move(dims), std::move(boundaries),
                        labeled ? std::move(labels) : std::vector<std::vector<BasisLabel>>{});
}

HomologyGroup::HomologyGroup(const ChainComplex& cc, int degree)
    : degree_(degree), sq_(cc.boundary(degree), cc.boundary(degree + 1)) {}

std::vector<std::size_t> homology_dimensions(const ChainComplex& cc) {
    std::vector<std::size_t> dims;
    for (int k = 0; k <= cc.top_degree(); ++k) dims.push_back(homology(cc, k).dimension());
    return dims;
}

ChainMap::ChainMap(ChainComplex source, ChainComplex target, std::vector<Matrix> levels)
    : source_(std::move(source)), target_(std::move(target)), levels_(std::move(levels)) {
    if (source_.field() != target_.field())
        throw InvalidInput("chain map endpoints use different fields");
    for (std::size_t k = 0; k < levels_.size(); ++k)
        if (levels_[k].rows() != target_.dim(static_cast<int>(k)) ||
            levels_[k].cols() != source_.dim(static_cast<int>(k)))
            throw InvalidInput("chain map level " + std::to_string(k) + " has the wrong shape");
    int top = std::max(source_.top_degree(), target_.top_degree());
    for (int k = 0; k <= top + 1; ++k)
        if (target_.boundary(k) * level(k) != level(k - 1) * source_.boundary(k))
            throw InvalidInput("chain map does not commute with boundaries at degree " +
                               std::to_string(k));
}

Matrix ChainMap::level(int k) const {
    if (k >= 0 && static_cast<std::size_t>(k) < levels_.size())
        return levels_[static_cast<std::size_t>(k)];
    return Matrix(target_.dim(k), source_.dim(k), source_.field());
}

ChainMap chain_map_of_morphism(const SimplicialComplex& k, const CosheafMorphism& phi) {
    auto violations = validate_morphism(phi);
    if (!violations.empty())
        throw InvalidInput("chain_map_of_morphism: morphism is invalid (first: " +
                           violations.front() + ")");
    ChainComplex src = assemble(k, phi.source());
    ChainComplex tgt = assemble(k, phi.target());
    std::vector<Matrix> levels;
    for (int d = 0; d <= k.dim(); ++d) {
        Matrix lv(tgt.dim(d), src.dim(d), src.field());
        for (const auto& s : k.simplices(d)) {
            if (phi.source().stalk_dim(s) == 0 || phi.target().stalk_dim(s) == 0) continue;
            lv.insert_block(tgt.simplex_offset(d, s), src.simplex_offset(d, s),
                            phi.component(s));
        }
        levels.push_back(std::move(lv));
    }
    return ChainMap(std::move(src), std::move(tgt), std::move(levels));
}

ChainMap inclusion_chain_map(const ChainComplex& sub, const ChainComplex& super) {
    // The empty complex includes anywhere via zero maps; it has no labels.
    if (sub.top_degree() < 0) return ChainMap(sub, super, {});
    if (!sub.has_labels() || !super.has_labels())
        throw InvalidInput("inclusion_chain_map: both complexes need basis labels");
    std::vector<Matrix> levels;
    for (int k = 0; k <= sub.top_degree(); ++k) {
        Matrix lv(super.dim(k), sub.dim(k), sub.field());
        const auto& labs = sub.labels(k);
        for (std::size_t i = 0; i < labs.size(); ++i)
            lv.set(super.simplex_offset(k, labs[i].simplex) + labs[i].coordinate, i, 1);
        levels.push_back(std::move(lv));
    }
    return ChainMap(sub, super, std::move(levels));
}

namespace {

Matrix induced_between(const ChainMap& phi, int k, const HomologyGroup& hs,
                       const HomologyGroup& ht) {
    Matrix lv = phi.level(k);
    std::vector<Vec> cols;
    for (const Vec& rep : hs.representatives()) {
        auto coords = ht.class_coords(lv.apply(rep));
        if (!coords)
            throw InternalCheckFailure(
                "induced_map: image of a cycle representative is not a cycle (degree " +
                std::to_string(k) + ")");
        cols.push_back(*coords);
    }
    return Matrix::from_columns(cols, ht.dimension(), phi.source().field());
}

Matrix connecting_between(const ShortExactSequence& s, int k, const HomologyGroup& hr,
                          const HomologyGroup& hl,
                          const std::vector<std::size_t>& lift_order,
                          const std::vector<std::size_t>& pullback_order) {
    Matrix qk = s.q().level(k);
    Matrix pk1 = s.p().level(k - 1);
    Matrix mid_bd = s.middle().boundary(k);
    std::vector<Vec> cols;
    for (const Vec& z : hr.representatives()) {
        auto x = qk.solve_with_column_order(z, lift_order);
        if (!x)
            throw InternalCheckFailure("connecting map: cycle failed to lift through q");
        Vec y = mid_bd.apply(*x);
        auto w = pk1.solve_with_column_order(y, pullback_order);
        if (!w)
            throw InternalCheckFailure(
                "connecting map: middle boundary failed to pull back through p");
        auto cls = hl.class_coords(*w);
        if (!cls)
            throw InternalCheckFailure("connecting map: pulled-back chain is not a cycle");
        cols.push_back(*cls);
    }
    return Matrix::from_columns(cols, hl.dimension(), s.left().field());
}

} // namespace

Matrix induced_map(const ChainMap& phi, int k) {
    return induced_between(phi, k, homology(phi.source(), k), homology(phi.target(), k));
}

bool is_quasi_isomorphism(const ChainMap& phi) {
    int top = std::max(phi.source().top_degree(), phi.target().top_degree());
    for (int k = 0; k <= top; ++k)
        if (!induced_map(phi, k).invertible()) return false;
    return true;
}

std::vector<std::string> check_exactness(const ChainMap& p, const ChainMap& q) {
    std::vector<std::string> out;
    if (p.target() != q.source()) {
        out.push_back("the maps do not share a middle complex");
        return out;
    }
    int top = std::max({p.source().top_degree(), p.target().top_degree(),
                        q.target().top_degree()});
    for (int k = 0; k <= top; ++k) {
        Matrix pk = p.level(k), qk = q.level(k);
        std::size_t rp = pk.rank(), rq = qk.rank();
        if (rp != p.source().dim(k))
            out.push_back("degree " + std::to_string(k) + ": first map is not injective");
        if (rq != q.target().dim(k))
            out.push_back("degree " + std::to_string(k) + ": second map is not surjective");
        if (!(qk * pk).is_zero())
            out.push_back("degree " + std::to_string(k) + ": composite is nonzero");
        if (rp + rq != p.target().dim(k))
            out.push_back("degree " + std::to_string(k) +
                          ": image of first map differs from kernel of second");
    }
    return out;
}

ShortExactSequence::ShortExactSequence(ChainMap p, ChainMap q)
    : p_(std::move(p)), q_(std::move(q)) {
    auto violations = check_exactness(p_, q_);
    if (!violations.empty())
        throw InternalCheckFailure("short exact sequence invariant failed: " +
                                   violations.front());
}

Matrix connecting_homomorphism(const ShortExactSequence& s, int k,
                               const std::vector<std::size_t>& lift_order,
                               const std::vector<std::size_t>& pullback_order) {
    return connecting_between(s, k, homology(s.right(), k), homology(s.left(), k - 1),
                              lift_order, pullback_order);
}

Matrix connecting_homomorphism(const ShortExactSequence& s, int k) {
    return connecting_homomorphism(s, k, natural(s.middle().dim(k)),
                                   natural(s.left().dim(k - 1)));
}

LESReport long_exact_sequence(const ShortExactSequence& s) {
    LESReport report;
    int top = std::max({s.left().top_degree(), s.middle().top_degree(),
                        s.right().top_degree()});
    // One homology computation per (complex, degree); every map below
    // reuses these groups.
    std::vector<HomologyGroup> hl, hm, hr;
    for (int d = 0; d <= top; ++d) {
        hl.push_back(homology(s.left(), d));
        hm.push_back(homology(s.middle(), d));
        hr.push_back(homology(s.right(), d));
    }
    for (int d = top; d >= 0; --d) {
        auto du = static_cast<std::size_t>(d);
        report.nodes.push_back(
            {"H_" + std::to_string(d) + "(left)", d, hl[du].dimension()});
        report.nodes.push_back(
            {"H_" + std::to_string(d) + "(middle)", d, hm[du].dimension()});
        report.nodes.push_back(
            {"H_" + std::to_string(d) + "(right)", d, hr[du].dimension()});
        report.maps.push_back(induced_between(s.p(), d, hl[du], hm[du]));
        report.maps.push_back(induced_between(s.q(), d, hm[du], hr[du]));
        if (d > 0)
            report.maps.push_back(connecting_between(s, d, hr[du], hl[du - 1],
                                                     natural(s.middle().dim(d)),
                                                     natural(s.left().dim(d - 1))));
    }
    for (std::size_t i = 0; i < report.nodes.size(); ++i) {
        std::size_t rank_in = i == 0 ? 0 : report.maps[i - 1].rank();
        std::size_t rank_out = i + 1 == report.nodes.size() ? 0 : report.maps[i].rank();
        bool composite_zero = i == 0 || i + 1 == report.nodes.size() ||
                              (report.maps[i] * report.maps[i - 1]).is_zero();
        bool exact = composite_zero && rank_in + rank_out == report.nodes[i].dimension;
        report.exact_at.push_back(exact);
        report.all_exact = report.all_exact && exact;
    }
    return report;
}

} // namespace coshom
