#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "coshom/cosheaf.hpp"
#include "coshom/morse.hpp"
#include "coshom/simplicial_complex.hpp"

namespace coshom {

/// Complex files: one simplex per line as whitespace-separated, strictly
/// increasing vertex ids; blank lines and lines starting with '#' are
/// ignored; the result is the face closure of the listed simplices.
SimplicialComplex parse_complex(const std::string& text,
                                const std::string& source = "<memory>");

/// Cosheaf files:
///   field <p>
///   stalk <simplex> <dim>
///   map <coface> -> <facet> : <entries row-major, stalk(facet) rows x
///                              stalk(coface) cols, each in 0..p-1>
/// Simplex tokens look like (0,1,2). Unspecified stalks are 0; a map is
/// required exactly when both stalks are positive. The parsed cosheaf is
/// validated; square violations raise ValidationError (not ParseError).
Cosheaf parse_cosheaf(const std::string& text, const SimplicialComplex& k,
                      const std::string& source = "<memory>");

/// Matching files: lines "pair <facet> <coface>".
PartialMatching parse_matching(const std::string& text,
                               const std::string& source = "<memory>");

/// Emits the maximal simplices, one per line (parse_complex recovers the
/// complex as their closure).
std::string emit_complex(const SimplicialComplex& k);
/// Canonical cosheaf file: positive stalks then every required map,
/// dimension-major. parse_cosheaf(emit_cosheaf(c), base) equals c.
std::string emit_cosheaf(const Cosheaf& c);
std::string emit_matching(const PartialMatching& matching);

/// A run's structured result: what was asked, what was read, and what was
/// computed. Serializes to "key: value" lines; parse_report inverts
/// emit_report exactly.
struct Report {
    std::string command;
    /// (input name, description/digest), e.g. ("complex", "file=a fnv1a=..").
    std::vector<std::pair<std::string, std::string>> inputs;
    /// Homology dimensions, degree 0 upward.
    std::vector<std::size_t> homology;
    /// Critical cells per degree (compression commands only).
    std::vector<std::size_t> critical;
    /// Named boolean outcomes, e.g. ("quasi_isomorphic", true).
    std::vector<std::pair<std::string, bool>> verdicts;
    /// Long-exact-sequence table rows, preformatted.
    std::vector<std::string> les;
    long long timing_ms = 0;

    bool operator==(const Report&) const = default;
};

std::string emit_report(const Report& r);
Report parse_report(const std::string& text, const std::string& source = "<memory>");

/// FNV-1a 64-bit digest, for report input lines.
std::uint64_t fnv1a(const std::string& bytes);

} // namespace coshom
