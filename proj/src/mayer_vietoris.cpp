#include "coshom/mayer_vietoris.hpp"

#include <algorithm>

#include "coshom/error.hpp"

namespace coshom {

namespace {

void verify_decomposition(const Decomposition& d, const std::string& who) {
    if (!d.l.is_subcomplex_of(d.k))
        throw InvalidInput(who + ": L is not a subcomplex of K");
    if (!d.m.is_subcomplex_of(d.k))
        throw InvalidInput(who + ": M is not a subcomplex of K");
    if (complex_union(d.l, d.m) != d.k)
        throw InvalidInput(who + ": L and M do not cover K");
    if (complex_intersection(d.l, d.m) != d.i)
        throw InvalidInput(who + ": I is not the intersection of L and M");
}

/// 0 -> left -> cl + cm -> right -> 0 from the four labeled inclusions,
/// with the M->K inclusion negated.
ShortExactSequence ses_from_inclusions(const ChainComplex& left, const ChainComplex& cl,
                                       const ChainComplex& cm, const ChainComplex& right) {
    ChainMap il = inclusion_chain_map(left, cl);
    ChainMap im = inclusion_chain_map(left, cm);
    ChainMap lk = inclusion_chain_map(cl, right);
    ChainMap mk = inclusion_chain_map(cm, right);
    ChainComplex middle = direct_sum_complex(cl, cm);
    const PrimeField f = right.field();
    std::vector<Matrix> pl, ql;
    for (int d = 0; d <= middle.top_degree(); ++d) {
        pl.push_back(vcat(il.level(d), im.level(d)));
        ql.push_back(hcat(lk.level(d), mk.level(d).scaled(f.from_int(-1))));
    }
    return ShortExactSequence(ChainMap(left, middle, std::move(pl)),
                              ChainMap(middle, right, std::move(ql)));
}

/// Middle-term columns regrouped as (L-only, I-inside-L, I-inside-M, M-only).
std::vector<std::vector<std::size_t>> grouping_of(const ChainComplex& cl,
                                                  const ChainComplex& cm,
                                                  const SimplicialComplex& i) {
    std::vector<std::vector<std::size_t>> out;
    int top = std::max(cl.top_degree(), cm.top_degree());
    for (int d = 0; d <= top; ++d) {
        std::vector<std::size_t> l_only, l_shared, m_shared, m_only;
        const auto& ll = cl.labels(d);
        for (std::size_t j = 0; j < ll.size(); ++j)
            (i.contains(ll[j].simplex) ? l_shared : l_only).push_back(j);
        const auto& ml = cm.labels(d);
        for (std::size_t j = 0; j < ml.size(); ++j)
            (i.contains(ml[j].simplex) ? m_shared : m_only).push_back(cl.dim(d) + j);
        std::vector<std::size_t> group = std::move(l_only);
        group.insert(group.end(), l_shared.begin(), l_shared.end());
        group.insert(group.end(), m_shared.begin(), m_shared.end());
        group.insert(group.end(), m_only.begin(), m_only.end());
        out.push_back(std::move(group));
    }
    return out;
}

/// Critical cells of the piece must be exactly the ambient critical cells
/// lying in the piece, and ambient boundary blocks from a piece-critical cell
/// to a critical cell outside the piece must vanish. Both are theorems for
/// compatible matchings.
void verify_piece_embedding(const std::string& name, const SimplicialComplex& piece,
                            const MorseComplexData& sub, const MorseComplexData& super,
                            const Cosheaf& c) {
    int top = super.complex.top_degree();
    for (int d = 0; d <= top; ++d) {
        std::vector<Simplex> ambient_in_piece;
        if (d < static_cast<int>(super.critical.size()))
            for (const Simplex& s : super.critical[static_cast<std::size_t>(d)])
                if (piece.contains(s)) ambient_in_piece.push_back(s);
        std::vector<Simplex> own;
        if (d < static_cast<int>(sub.critical.size()))
            own = sub.critical[static_cast<std::size_t>(d)];
        if (own != ambient_in_piece)
            throw InternalCheckFailure("morse mayer-vietoris: critical cells of " + name +
                                       " differ from the ambient critical cells inside it in "
                                       "degree " +
                                       std::to_string(d));
    }
    for (int d = 1; d <= top; ++d) {
        const Matrix bd = super.complex.boundary(d);
        for (const Simplex& alpha : super.critical[static_cast<std::size_t>(d)]) {
            if (!piece.contains(alpha) || c.stalk_dim(alpha) == 0) continue;
            for (const Simplex& omega : super.critical[static_cast<std::size_t>(d - 1)]) {
                if (piece.contains(omega) || c.stalk_dim(omega) == 0) continue;
                std::size_t r0 = super.complex.simplex_offset(d - 1, omega);
                std::size_t c0 = super.complex.simplex_offset(d, alpha);
                for (std::size_t r = 0; r < c.stalk_dim(omega); ++r)
                    for (std::size_t cc = 0; cc < c.stalk_dim(alpha); ++cc)
                        if (bd.at(r0 + r, c0 + cc) != 0)
                            throw InternalCheckFailure(
                                "morse mayer-vietoris: compressed boundary leaves " + name +
                                " at block (alpha=" + alpha.to_string() +
                                ", omega=" + omega.to_string() + ")");
            }
        }
    }
}

} // namespace

Decomposition check_decomposition(const SimplicialComplex& k, const SimplicialComplex& l,
                                  const SimplicialComplex& m) {
    if (!l.is_subcomplex_of(k))
        throw InvalidInput("check_decomposition: L is not a subcomplex of K");
    if (!m.is_subcomplex_of(k))
        throw InvalidInput("check_decomposition: M is not a subcomplex of K");
    if (complex_union(l, m) != k)
        throw InvalidInput("check_decomposition: L and M do not cover K");
    return {k, l, m, complex_intersection(l, m)};
}

MayerVietorisData build_mv_ses(const Decomposition& d, const Cosheaf& c) {
    verify_decomposition(d, "build_mv_ses");
    if (c.base() != d.k)
        throw InvalidInput("build_mv_ses: cosheaf lives on a different complex");
    ChainComplex ci = assemble(d.i, restrict(c, d.i));
    ChainComplex cl = assemble(d.l, restrict(c, d.l));
    ChainComplex cm = assemble(d.m, restrict(c, d.m));
    ChainComplex ck = assemble(d.k, c);
    auto grouping = grouping_of(cl, cm, d.i);
    return {d, ses_from_inclusions(ci, cl, cm, ck), std::move(grouping)};
}

bool matching_subcomplex_compatible(const PartialMatching& matching,
                                    const SimplicialComplex& m) {
    return std::all_of(matching.pairs().begin(), matching.pairs().end(), [&](const auto& p) {
        return m.contains(p.first) == m.contains(p.second);
    });
}

PartialMatching restrict_matching(const PartialMatching& matching,
                                  const SimplicialComplex& m) {
    if (!matching_subcomplex_compatible(matching, m))
        throw InvalidInput("restrict_matching: a pair straddles the subcomplex boundary");
    PartialMatching out;
    for (const auto& p : matching.pairs())
        if (m.contains(p.first)) out.add_pair(p.first, p.second);
    return out;
}

MorseMVData build_morse_mv_ses(const Decomposition& d, const Cosheaf& c,
                               const PartialMatching& matching) {
    verify_decomposition(d, "build_morse_mv_ses");
    if (c.base() != d.k)
        throw InvalidInput("build_morse_mv_ses: cosheaf lives on a different complex");
    if (!matching_subcomplex_compatible(matching, d.l))
        throw InvalidInput("build_morse_mv_ses: matching is not compatible with L");
    if (!matching_subcomplex_compatible(matching, d.m))
        throw InvalidInput("build_morse_mv_ses: matching is not compatible with M");

    MorseComplexData mk = assemble_morse_complex(d.k, c, matching);
    MorseComplexData ml =
        assemble_morse_complex(d.l, restrict(c, d.l), restrict_matching(matching, d.l));
    MorseComplexData mm =
        assemble_morse_complex(d.m, restrict(c, d.m), restrict_matching(matching, d.m));
    MorseComplexData mi =
        assemble_morse_complex(d.i, restrict(c, d.i), restrict_matching(matching, d.i));

    verify_piece_embedding("I inside L", d.i, mi, ml, c);
    verify_piece_embedding("I inside M", d.i, mi, mm, c);
    verify_piece_embedding("L inside K", d.l, ml, mk, c);
    verify_piece_embedding("M inside K", d.m, mm, mk, c);

    ShortExactSequence ses =
        ses_from_inclusions(mi.complex, ml.complex, mm.complex, mk.complex);
    auto grouping = grouping_of(ml.complex, mm.complex, d.i);

    // Homology-level cube: each inclusion must induce maps of equal rank on
    // the full and the compressed complexes.
    ChainComplex si = assemble(d.i, restrict(c, d.i));
    ChainComplex sl = assemble(d.l, restrict(c, d.l));
    ChainComplex sm = assemble(d.m, restrict(c, d.m));
    ChainComplex sk = assemble(d.k, c);
    struct EdgeSpec {
        const char* name;
        const ChainComplex* sub_std;
        const ChainComplex* sup_std;
        const ChainComplex* sub_mor;
        const ChainComplex* sup_mor;
    };
    const EdgeSpec specs[] = {
        {"I -> L", &si, &sl, &mi.complex, &ml.complex},
        {"I -> M", &si, &sm, &mi.complex, &mm.complex},
        {"L -> K", &sl, &sk, &ml.complex, &mk.complex},
        {"M -> K", &sm, &sk, &mm.complex, &mk.complex},
    };
    std::vector<CubeEdge> cube;
    bool commutes = mi.quasi_isomorphic && ml.quasi_isomorphic && mm.quasi_isomorphic &&
                    mk.quasi_isomorphic;
    for (const EdgeSpec& e : specs) {
        ChainMap std_inc = inclusion_chain_map(*e.sub_std, *e.sup_std);
        ChainMap mor_inc = inclusion_chain_map(*e.sub_mor, *e.sup_mor);
        for (int dg = 0; dg <= e.sup_std->top_degree(); ++dg) {
            std::size_t rs = induced_map(std_inc, dg).rank();
            std::size_t rm = induced_map(mor_inc, dg).rank();
            cube.push_back({e.name, dg, rs, rm, rs == rm});
            commutes = commutes && rs == rm;
        }
    }

    return {std::move(ses),  std::move(mi),       std::move(ml), std::move(mm),
            std::move(mk),   std::move(grouping), std::move(cube), commutes};
}

LESComparison compare_les(const LESReport& a, const LESReport& b) {
    if (a.nodes.size() != b.nodes.size())
        return {false, "node counts differ (" + std::to_string(a.nodes.size()) + " vs " +
                           std::to_string(b.nodes.size()) + ")"};
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        if (a.nodes[i].label != b.nodes[i].label)
            return {false, "node " + std::to_string(i) + " is " + a.nodes[i].label + " vs " +
                               b.nodes[i].label};
        if (a.nodes[i].dimension != b.nodes[i].dimension)
            return {false, a.nodes[i].label +
                               ": dimension " + std::to_string(a.nodes[i].dimension) + " vs " +
                               std::to_string(b.nodes[i].dimension)};
    }
    for (std::size_t i = 0; i < a.maps.size(); ++i) {
        std::size_t ra = a.maps[i].rank(), rb = b.maps[i].rank();
        if (ra != rb)
            return {false, "map " + a.nodes[i].label + " -> " + a.nodes[i + 1].label +
                               ": rank " + std::to_string(ra) + " vs " + std::to_string(rb)};
    }
    return {true, ""};
}

} // namespace coshom
