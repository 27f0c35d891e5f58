#include "coshom/morse.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "coshom/error.hpp"

namespace coshom {

namespace {

std::string pair_str(const std::pair<Simplex, Simplex>& p) {
    return "(" + p.first.to_string() + " < " + p.second.to_string() + ")";
}

/// Defects checkable without the ambient complex: facet relations and reuse.
std::vector<std::string> matching_defects(const PartialMatching& matching) {
    std::vector<std::string> out;
    std::map<Simplex, int> uses;
    for (const auto& p : matching.pairs()) {
        if (incidence(p.second, p.first) == 0)
            out.push_back("pair " + pair_str(p) + ": first simplex is not a facet of the second");
        ++uses[p.first];
        ++uses[p.second];
    }
    for (const auto& [s, n] : uses)
        if (n > 1)
            out.push_back("simplex " + s.to_string() + " appears in " + std::to_string(n) +
                          " pairs");
    return out;
}

/// Cycle test on the level digraphs; assumes a defect-free matching.
bool acyclic_impl(const PartialMatching& matching) {
    const auto& prs = matching.pairs();
    std::map<Simplex, std::size_t> by_facet;
    for (std::size_t i = 0; i < prs.size(); ++i) by_facet.emplace(prs[i].first, i);

    // Kahn's algorithm over all pairs at once; edges never change the facet
    // dimension, so this is the disjoint union of the level digraphs.
    std::vector<std::vector<std::size_t>> adj(prs.size());
    std::vector<std::size_t> indeg(prs.size(), 0);
    for (std::size_t i = 0; i < prs.size(); ++i) {
        const auto& [sigma, tau] = prs[i];
        for (std::size_t j = 0; j <= tau.dim(); ++j) {
            Simplex f = tau.facet(j);
            if (f == sigma) continue;
            auto it = by_facet.find(f);
            if (it == by_facet.end()) continue;
            adj[i].push_back(it->second);
            ++indeg[it->second];
        }
    }
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < prs.size(); ++i)
        if (indeg[i] == 0) queue.push_back(i);
    std::size_t done = 0;
    while (!queue.empty()) {
        std::size_t i = queue.back();
        queue.pop_back();
        ++done;
        for (std::size_t j : adj[i])
            if (--indeg[j] == 0) queue.push_back(j);
    }
    return done == prs.size();
}

void require_usable(const PartialMatching& matching, const std::string& who) {
    auto defects = matching_defects(matching);
    if (!defects.empty())
        throw InvalidInput(who + ": invalid matching (" + defects.front() + ")");
    if (!acyclic_impl(matching))
        throw InvalidInput(who + ": matching is not acyclic");
}

/// Enumerates, for a fixed target omega, the matched zig-zags ending at a
/// coface of omega. Suffix lists are memoized per pair, so shared tails are
/// computed once. Assumes an acyclic matching (callers check).
class PathFinder {
public:
    PathFinder(const PartialMatching& matching, Simplex omega)
        : prs_(matching.pairs()), omega_(std::move(omega)), memo_(prs_.size()) {
        for (std::size_t i = 0; i < prs_.size(); ++i) by_facet_.emplace(prs_[i].first, i);
    }

    std::vector<SigmaPath> paths_from(const Simplex& alpha) {
        std::vector<SigmaPath> out;
        for (std::size_t j = 0; j <= alpha.dim(); ++j) {
            auto it = by_facet_.find(alpha.facet(j));
            if (it == by_facet_.end()) continue;
            for (const auto& seq : suffixes(it->second)) {
                SigmaPath p;
                for (std::size_t idx : seq) p.steps.push_back(prs_[idx]);
                out.push_back(std::move(p));
            }
        }
        return out;
    }

private:
    const std::vector<std::vector<std::size_t>>& suffixes(std::size_t p) {
        if (memo_[p]) return *memo_[p];
        std::vector<std::vector<std::size_t>> out;
        const auto& [sigma, tau] = prs_[p];
        if (incidence(tau, omega_) != 0) out.push_back({p});
        for (std::size_t j = 0; j <= tau.dim(); ++j) {
            Simplex f = tau.facet(j);
            if (f == sigma) continue;
            auto it = by_facet_.find(f);
            if (it == by_facet_.end()) continue;
            for (const auto& suf : suffixes(it->second)) {
                std::vector<std::size_t> seq;
                seq.reserve(suf.size() + 1);
                seq.push_back(p);
                seq.insert(seq.end(), suf.begin(), suf.end());
                out.push_back(std::move(seq));
            }
        }
        memo_[p] = std::move(out);
        return *memo_[p];
    }

    std::vector<std::pair<Simplex, Simplex>> prs_;
    Simplex omega_;
    std::map<Simplex, std::size_t> by_facet_;
    std::vector<std::optional<std::vector<std::vector<std::size_t>>>> memo_;
};

/// Block computation shared by the public op and the assembler.
Matrix block_impl(const Simplex& alpha, const Simplex& omega, PathFinder& finder,
                  const Cosheaf& c) {
    const PrimeField f = c.field();
    Matrix block(c.stalk_dim(omega), c.stalk_dim(alpha), f);
    if (int inc = incidence(alpha, omega); inc != 0)
        block = c.facet_map(alpha, omega).scaled(f.from_int(inc));
    for (const SigmaPath& rho : finder.paths_from(alpha)) {
        const auto& [sigma1, tau1] = rho.steps.front();
        const auto& [sigmam, taum] = rho.steps.back();
        Matrix term = c.facet_map(taum, omega).scaled(f.from_int(incidence(taum, omega))) *
                      path_weight(rho, c) *
                      c.facet_map(alpha, sigma1).scaled(f.from_int(incidence(alpha, sigma1)));
        block = block + term;
    }
    return block;
}

} // namespace

void PartialMatching::add_pair(const Simplex& facet, const Simplex& coface) {
    std::pair<Simplex, Simplex> p{facet, coface};
    pairs_.insert(std::lower_bound(pairs_.begin(), pairs_.end(), p), std::move(p));
}

bool PartialMatching::is_matched(const Simplex& s) const {
    return std::any_of(pairs_.begin(), pairs_.end(),
                       [&](const auto& p) { return p.first == s || p.second == s; });
}

std::optional<Simplex> PartialMatching::coface_of(const Simplex& s) const {
    for (const auto& p : pairs_)
        if (p.first == s) return p.second;
    return std::nullopt;
}

std::optional<Simplex> PartialMatching::facet_of(const Simplex& s) const {
    for (const auto& p : pairs_)
        if (p.second == s) return p.first;
    return std::nullopt;
}

std::vector<std::string> validate_matching(const SimplicialComplex& k,
                                           const PartialMatching& matching) {
    std::vector<std::string> out;
    for (const auto& p : matching.pairs()) {
        if (!k.contains(p.first))
            out.push_back("pair " + pair_str(p) + ": " + p.first.to_string() +
                          " is not in the complex");
        if (!k.contains(p.second))
            out.push_back("pair " + pair_str(p) + ": " + p.second.to_string() +
                          " is not in the complex");
    }
    auto rest = matching_defects(matching);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

bool is_acyclic(const SimplicialComplex& k, const PartialMatching& matching) {
    auto defects = validate_matching(k, matching);
    if (!defects.empty())
        throw InvalidInput("is_acyclic: invalid matching (" + defects.front() + ")");
    return acyclic_impl(matching);
}

bool is_cosheaf_compatible(const PartialMatching& matching, const Cosheaf& c) {
    return std::all_of(matching.pairs().begin(), matching.pairs().end(), [&](const auto& p) {
        return c.facet_map(p.second, p.first).invertible();
    });
}

PartialMatching generate_matching(const SimplicialComplex& k, const Cosheaf& c,
                                  const PairPredicate& allowed) {
    const auto all = k.all_simplices(); // dimension-major ascending, lex within
    std::set<Simplex> unprocessed(all.begin(), all.end());
    PartialMatching result;
    while (!unprocessed.empty()) {
        bool paired = false;
        for (const Simplex& tau : all) {
            if (tau.dim() == 0 || unprocessed.find(tau) == unprocessed.end()) continue;
            std::size_t count = 0;
            Simplex lone = tau;
            for (std::size_t j = 0; j <= tau.dim(); ++j) {
                Simplex f = tau.facet(j);
                if (unprocessed.find(f) != unprocessed.end()) {
                    ++count;
                    lone = f;
                }
            }
            if (count != 1) continue;
            if (!c.facet_map(tau, lone).invertible()) continue;
            if (allowed && !allowed(lone, tau)) continue;
            result.add_pair(lone, tau);
            unprocessed.erase(tau);
            unprocessed.erase(lone);
            paired = true;
            break;
        }
        // No pairing possible: retire the lex-smallest unprocessed simplex of
        // minimal dimension as critical.
        if (!paired) {
            for (const Simplex& s : all) {
                auto it = unprocessed.find(s);
                if (it != unprocessed.end()) {
                    unprocessed.erase(it);
                    break;
                }
            }
        }
    }
    return result;
}

std::vector<SigmaPath> enumerate_paths(const SimplicialComplex& k,
                                       const PartialMatching& matching, const Simplex& alpha,
                                       const Simplex& omega) {
    if (!k.contains(alpha) || !k.contains(omega))
        throw InvalidInput("enumerate_paths: endpoint simplex is not in the complex");
    if (alpha.dim() != omega.dim() + 1)
        throw InvalidInput("enumerate_paths: need dim alpha = dim omega + 1");
    auto defects = validate_matching(k, matching);
    if (!defects.empty())
        throw InvalidInput("enumerate_paths: invalid matching (" + defects.front() + ")");
    if (!acyclic_impl(matching))
        throw InvalidInput("enumerate_paths: matching is not acyclic");
    PathFinder finder(matching, omega);
    return finder.paths_from(alpha);
}

Matrix path_weight(const SigmaPath& path, const Cosheaf& c) {
    const auto& st = path.steps;
    if (st.empty()) throw InvalidInput("path_weight: empty path");
    for (std::size_t i = 0; i < st.size(); ++i) {
        if (incidence(st[i].second, st[i].first) == 0)
            throw InvalidInput("path_weight: step " + pair_str(st[i]) +
                               " is not a facet relation");
        if (i > 0) {
            if (st[i].first == st[i - 1].first)
                throw InvalidInput("path_weight: consecutive steps share the facet " +
                                   st[i].first.to_string());
            if (incidence(st[i - 1].second, st[i].first) == 0)
                throw InvalidInput("path_weight: " + st[i].first.to_string() +
                                   " is not a facet of the previous coface " +
                                   st[i - 1].second.to_string());
        }
    }

    Matrix acc = c.facet_map(st[0].second, st[0].first).inverse();
    long long sign = (st.size() % 2 == 1) ? -1 : 1;
    sign *= incidence(st[0].second, st[0].first);
    for (std::size_t i = 1; i < st.size(); ++i) {
        acc = c.facet_map(st[i].second, st[i].first).inverse() *
              (c.facet_map(st[i - 1].second, st[i].first) * acc);
        sign *= incidence(st[i].second, st[i].first);
        sign *= incidence(st[i - 1].second, st[i].first);
    }
    return acc.scaled(c.field().from_int(sign));
}

Matrix morse_boundary_block(const Simplex& alpha, const Simplex& omega,
                            const PartialMatching& matching, const Cosheaf& c) {
    if (alpha.dim() != omega.dim() + 1)
        throw InvalidInput("morse_boundary_block: need dim alpha = dim omega + 1");
    if (matching.is_matched(alpha) || matching.is_matched(omega))
        throw InvalidInput("morse_boundary_block: endpoints must be critical");
    require_usable(matching, "morse_boundary_block");
    PathFinder finder(matching, omega);
    return block_impl(alpha, omega, finder, c);
}

std::vector<Simplex> critical_simplices(const SimplicialComplex& k,
                                        const PartialMatching& matching) {
    std::vector<Simplex> out;
    for (const Simplex& s : k.all_simplices())
        if (!matching.is_matched(s)) out.push_back(s);
    return out;
}

MorseComplexData assemble_morse_complex(const SimplicialComplex& k, const Cosheaf& c,
                                        const PartialMatching& matching) {
    if (c.base() != k)
        throw InvalidInput("assemble_morse_complex: cosheaf lives on a different complex");
    auto defects = validate_matching(k, matching);
    if (!defects.empty())
        throw InvalidInput("assemble_morse_complex: invalid matching (" + defects.front() +
                           ")");
    if (!acyclic_impl(matching))
        throw InvalidInput("assemble_morse_complex: matching is not acyclic");
    if (!is_cosheaf_compatible(matching, c))
        throw InvalidInput(
            "assemble_morse_complex: a matched facet map is not invertible, so the "
            "matching is not compatible with the cosheaf");

    ChainComplex standard = assemble(k, c); // also validates the cosheaf
    auto standard_h = homology_dimensions(standard);

    const int top = k.dim();
    if (top < 0)
        return {standard, {}, {}, {}, true};

    std::vector<std::vector<Simplex>> crit(static_cast<std::size_t>(top) + 1);
    for (int d = 0; d <= top; ++d)
        for (const Simplex& s : k.simplices(d))
            if (!matching.is_matched(s)) crit[static_cast<std::size_t>(d)].push_back(s);

    std::vector<std::size_t> dims;
    std::vector<std::vector<BasisLabel>> labels;
    for (const auto& cells : crit) {
        std::size_t total = 0;
        std::vector<BasisLabel> lab;
        for (const Simplex& s : cells) {
            for (std::size_t i = 0; i < c.stalk_dim(s); ++i) lab.push_back({s, i});
            total += c.stalk_dim(s);
        }
        dims.push_back(total);
        labels.push_back(std::move(lab));
    }

    auto offsets_of = [&](const std::vector<Simplex>& cells) {
        std::map<Simplex, std::size_t> off;
        std::size_t at = 0;
        for (const Simplex& s : cells) {
            off.emplace(s, at);
            at += c.stalk_dim(s);
        }
        return off;
    };

    std::vector<Matrix> boundaries;
    for (int d = 1; d <= top; ++d) {
        const auto& lo = crit[static_cast<std::size_t>(d - 1)];
        const auto& hi = crit[static_cast<std::size_t>(d)];
        auto row_off = offsets_of(lo);
        auto col_off = offsets_of(hi);
        Matrix bd(dims[static_cast<std::size_t>(d - 1)], dims[static_cast<std::size_t>(d)],
                  c.field());
        for (const Simplex& omega : lo) {
            if (c.stalk_dim(omega) == 0) continue;
            PathFinder finder(matching, omega);
            for (const Simplex& alpha : hi) {
                if (c.stalk_dim(alpha) == 0) continue;
                bd.insert_block(row_off.at(omega), col_off.at(alpha),
                                block_impl(alpha, omega, finder, c));
            }
        }
        boundaries.push_back(std::move(bd));
    }

    // d(d(x)) = 0 is a theorem; a violation means a bug in the block formula,
    // so fail loudly naming the offending block before handing the matrices
    // to ChainComplex.
    for (int d = 2; d <= top; ++d) {
        Matrix prod = boundaries[static_cast<std::size_t>(d - 2)] *
                      boundaries[static_cast<std::size_t>(d - 1)];
        if (prod.is_zero()) continue;
        auto row_off = offsets_of(crit[static_cast<std::size_t>(d - 2)]);
        auto col_off = offsets_of(crit[static_cast<std::size_t>(d)]);
        for (const Simplex& alpha : crit[static_cast<std::size_t>(d)])
            for (const Simplex& omega : crit[static_cast<std::size_t>(d - 2)])
                for (std::size_t r = 0; r < c.stalk_dim(omega); ++r)
                    for (std::size_t cc = 0; cc < c.stalk_dim(alpha); ++cc)
                        if (prod.at(row_off.at(omega) + r, col_off.at(alpha) + cc) != 0)
                            throw InternalCheckFailure(
                                "assemble_morse_complex: compressed boundaries do not "
                                "compose to zero at block (alpha=" +
                                alpha.to_string() + ", omega=" + omega.to_string() +
                                ") between degrees " + std::to_string(d) + " and " +
                                std::to_string(d - 2));
        throw InternalCheckFailure(
            "assemble_morse_complex: compressed boundaries do not compose to zero in "
            "degree " +
            std::to_string(d));
    }

    ChainComplex mc(c.field(), std::move(dims), std::move(boundaries), std::move(labels));
    auto morse_h = homology_dimensions(mc);
    bool quasi = morse_h == standard_h;
    return {std::move(mc), std::move(crit), std::move(morse_h), std::move(standard_h), quasi};
}

} // namespace coshom
