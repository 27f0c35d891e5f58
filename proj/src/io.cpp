#include "coshom/io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "coshom/error.hpp"

namespace coshom {

namespace {

/// Lines of `text` with 1-based numbers, skipping blanks and '#' comments.
std::vector<std::pair<int, std::string>> content_lines(const std::string& text) {
    std::vector<std::pair<int, std::string>> out;
    std::istringstream in(text);
    std::string line;
    int num = 0;
    while (std::getline(in, line)) {
        ++num;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        out.emplace_back(num, line);
    }
    return out;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

unsigned long parse_number(const std::string& tok, const std::string& source, int line,
                           const char* what) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(),
                                    [](unsigned char ch) { return std::isdigit(ch); }))
        throw ParseError(source, line, std::string(what) + " must be a nonnegative integer, got '" +
                                           tok + "'");
    errno = 0;
    unsigned long v = std::strtoul(tok.c_str(), nullptr, 10);
    if (errno != 0)
        throw ParseError(source, line, std::string(what) + " out of range: '" + tok + "'");
    return v;
}

std::vector<VertexId> parse_vertex_list(const std::vector<std::string>& toks,
                                        const std::string& source, int line) {
    std::vector<VertexId> verts;
    for (const auto& t : toks) {
        unsigned long v = parse_number(t, source, line, "vertex id");
        if (v > 0xffffffffUL)
            throw ParseError(source, line, "vertex id out of range: '" + t + "'");
        verts.push_back(static_cast<VertexId>(v));
    }
    for (std::size_t i = 1; i < verts.size(); ++i)
        if (verts[i] <= verts[i - 1])
            throw ParseError(source, line,
                             "vertex ids must be strictly increasing within a simplex");
    return verts;
}

/// A simplex written as a single token, e.g. "(0,1,2)".
Simplex parse_simplex_token(const std::string& tok, const std::string& source, int line) {
    if (tok.size() < 3 || tok.front() != '(' || tok.back() != ')')
        throw ParseError(source, line,
                         "expected a simplex token like (0,1,2), got '" + tok + "'");
    std::vector<std::string> parts;
    std::string cur;
    for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
        if (tok[i] == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(tok[i]);
        }
    }
    parts.push_back(cur);
    return Simplex(parse_vertex_list(parts, source, line));
}

} // namespace

SimplicialComplex parse_complex(const std::string& text, const std::string& source) {
    std::vector<Simplex> gens;
    for (const auto& [num, line] : content_lines(text)) {
        auto toks = tokens_of(line);
        gens.emplace_back(parse_vertex_list(toks, source, num));
    }
    return SimplicialComplex::close_under_faces(gens);
}

Cosheaf parse_cosheaf(const std::string& text, const SimplicialComplex& k,
                      const std::string& source) {
    auto lines = content_lines(text);
    if (lines.empty()) throw ParseError(source, 1, "empty cosheaf file; expected 'field <p>'");

    // Header.
    auto head = tokens_of(lines.front().second);
    if (head.size() != 2 || head[0] != "field")
        throw ParseError(source, lines.front().first, "first line must be 'field <p>'");
    unsigned long p = parse_number(head[1], source, lines.front().first, "field modulus");
    PrimeField f = [&] {
        try {
            return PrimeField(static_cast<std::uint32_t>(p));
        } catch (const InvalidInput& e) {
            throw ParseError(source, lines.front().first, e.what());
        }
    }();
    Cosheaf c(k, f);

    // Pass 1: stalks (map shapes depend on them).
    std::set<Simplex> stalk_seen;
    for (std::size_t idx = 1; idx < lines.size(); ++idx) {
        const auto& [num, line] = lines[idx];
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        if (toks[0] == "map") continue;
        if (toks[0] != "stalk")
            throw ParseError(source, num,
                             "expected a 'stalk' or 'map' line, got '" + toks[0] + "'");
        if (toks.size() != 3)
            throw ParseError(source, num, "stalk line needs: stalk <simplex> <dim>");
        Simplex s = parse_simplex_token(toks[1], source, num);
        if (!k.contains(s))
            throw ParseError(source, num,
                             "stalk simplex " + s.to_string() + " is not in the complex");
        if (!stalk_seen.insert(s).second)
            throw ParseError(source, num, "duplicate stalk line for " + s.to_string());
        c.set_stalk_dim(s, parse_number(toks[2], source, num, "stalk dimension"));
    }

    // Pass 2: maps.
    std::set<std::pair<Simplex, Simplex>> map_seen;
    for (std::size_t idx = 1; idx < lines.size(); ++idx) {
        const auto& [num, line] = lines[idx];
        auto toks = tokens_of(line);
        if (toks.empty() || toks[0] != "map") continue;
        if (toks.size() < 5 || toks[2] != "->" || toks[4] != ":")
            throw ParseError(source, num,
                             "map line needs: map <coface> -> <facet> : <entries>");
        Simplex cof = parse_simplex_token(toks[1], source, num);
        Simplex fac = parse_simplex_token(toks[3], source, num);
        if (!k.contains(cof) || !k.contains(fac))
            throw ParseError(source, num, "map simplices must lie in the complex");
        if (incidence(cof, fac) == 0)
            throw ParseError(source, num, fac.to_string() + " is not a facet of " +
                                              cof.to_string());
        if (!map_seen.insert({cof, fac}).second)
            throw ParseError(source, num, "duplicate map line for " + cof.to_string() +
                                              " -> " + fac.to_string());
        std::size_t rows = c.stalk_dim(fac), cols = c.stalk_dim(cof);
        if (toks.size() - 5 != rows * cols)
            throw ParseError(source, num,
                             "expected " + std::to_string(rows * cols) + " entries (" +
                                 std::to_string(rows) + "x" + std::to_string(cols) +
                                 " row-major), got " + std::to_string(toks.size() - 5));
        Matrix m(rows, cols, f);
        for (std::size_t i = 0; i < rows * cols; ++i) {
            unsigned long e = parse_number(toks[5 + i], source, num, "matrix entry");
            if (e >= f.modulus())
                throw ParseError(source, num, "entry " + std::to_string(e) +
                                                  " is not reduced modulo " +
                                                  std::to_string(f.modulus()));
            m.set(i / cols, i % cols, static_cast<std::uint32_t>(e));
        }
        c.set_facet_map(cof, fac, std::move(m));
    }

    // Every map between positive stalks must have been given.
    for (int d = 1; d <= k.dim(); ++d)
        for (const Simplex& t : k.simplices(d)) {
            if (c.stalk_dim(t) == 0) continue;
            for (std::size_t i = 0; i <= t.dim(); ++i) {
                Simplex s = t.facet(i);
                if (c.stalk_dim(s) == 0) continue;
                if (map_seen.find({t, s}) == map_seen.end())
                    throw ParseError(source, 0, "missing map " + t.to_string() + " -> " +
                                                    s.to_string() +
                                                    " (both stalks are positive)");
            }
        }

    auto violations = validate_cosheaf(c);
    if (!violations.empty())
        throw ValidationError(source + ": cosheaf fails validation: " + violations.front() +
                              (violations.size() > 1
                                   ? " (and " + std::to_string(violations.size() - 1) + " more)"
                                   : ""));
    return c;
}

PartialMatching parse_matching(const std::string& text, const std::string& source) {
    PartialMatching m;
    for (const auto& [num, line] : content_lines(text)) {
        auto toks = tokens_of(line);
        if (toks[0] != "pair" || toks.size() != 3)
            throw ParseError(source, num, "matching line needs: pair <facet> <coface>");
        m.add_pair(parse_simplex_token(toks[1], source, num),
                   parse_simplex_token(toks[2], source, num));
    }
    return m;
}

std::string emit_complex(const SimplicialComplex& k) {
    // A simplex is maximal iff it is nobody's facet.
    std::set<Simplex> facets;
    for (int d = 1; d <= k.dim(); ++d)
        for (const Simplex& t : k.simplices(d))
            for (std::size_t i = 0; i <= t.dim(); ++i) facets.insert(t.facet(i));
    std::ostringstream out;
    out << "# complex: " << k.size() << " simplices, top dimension " << k.dim() << "\n";
    for (const Simplex& s : k.all_simplices()) {
        if (facets.find(s) != facets.end()) continue;
        for (std::size_t i = 0; i < s.vertices().size(); ++i)
            out << (i ? " " : "") << s.vertices()[i];
        out << "\n";
    }
    return out.str();
}

std::string emit_cosheaf(const Cosheaf& c) {
    std::ostringstream out;
    out << "field " << c.field().modulus() << "\n";
    const SimplicialComplex& k = c.base();
    for (const Simplex& s : k.all_simplices())
        if (c.stalk_dim(s) > 0) out << "stalk " << s.to_string() << " " << c.stalk_dim(s) << "\n";
    for (int d = 1; d <= k.dim(); ++d)
        for (const Simplex& t : k.simplices(d)) {
            if (c.stalk_dim(t) == 0) continue;
            std::vector<Simplex> facs;
            for (std::size_t i = 0; i <= t.dim(); ++i) facs.push_back(t.facet(i));
            std::sort(facs.begin(), facs.end());
            for (const Simplex& s : facs) {
                if (c.stalk_dim(s) == 0) continue;
                out << "map " << t.to_string() << " -> " << s.to_string() << " :";
                Matrix m = c.facet_map(t, s);
                for (std::size_t r = 0; r < m.rows(); ++r)
                    for (std::size_t cc = 0; cc < m.cols(); ++cc) out << " " << m.at(r, cc);
                out << "\n";
            }
        }
    return out.str();
}

std::string emit_matching(const PartialMatching& matching) {
    std::ostringstream out;
    for (const auto& p : matching.pairs())
        out << "pair " << p.first.to_string() << " " << p.second.to_string() << "\n";
    return out.str();
}

std::string emit_report(const Report& r) {
    std::ostringstream out;
    out << "command: " << r.command << "\n";
    for (const auto& [name, desc] : r.inputs) out << "input: " << name << " " << desc << "\n";
    if (!r.homology.empty()) {
        out << "homology:";
        for (auto d : r.homology) out << " " << d;
        out << "\n";
    }
    if (!r.critical.empty()) {
        out << "critical:";
        for (auto d : r.critical) out << " " << d;
        out << "\n";
    }
    for (const auto& [name, ok] : r.verdicts)
        out << "verdict: " << name << " " << (ok ? "true" : "false") << "\n";
    for (const auto& row : r.les) out << "les: " << row << "\n";
    out << "timing_ms: " << r.timing_ms << "\n";
    return out.str();
}

Report parse_report(const std::string& text, const std::string& source) {
    Report r;
    for (const auto& [num, line] : content_lines(text)) {
        std::size_t colon = line.find(": ");
        if (colon == std::string::npos) {
            // A bare "key:" line (empty value) is also legal.
            if (!line.empty() && line.back() == ':')
                colon = line.size() - 1;
            else
                throw ParseError(source, num, "expected 'key: value'");
        }
        std::string key = line.substr(0, colon);
        std::string value = colon + 2 <= line.size() ? line.substr(colon + 2) : "";
        if (key == "command") {
            r.command = value;
        } else if (key == "input") {
            std::size_t sp = value.find(' ');
            if (sp == std::string::npos)
                throw ParseError(source, num, "input line needs a name and a description");
            r.inputs.emplace_back(value.substr(0, sp), value.substr(sp + 1));
        } else if (key == "homology" || key == "critical") {
            auto toks = tokens_of(value);
            std::vector<std::size_t> dims;
            for (const auto& t : toks)
                dims.push_back(parse_number(t, source, num, "dimension"));
            (key == "homology" ? r.homology : r.critical) = std::move(dims);
        } else if (key == "verdict") {
            auto toks = tokens_of(value);
            if (toks.size() != 2 || (toks[1] != "true" && toks[1] != "false"))
                throw ParseError(source, num, "verdict line needs: verdict <name> <true|false>");
            r.verdicts.emplace_back(toks[0], toks[1] == "true");
        } else if (key == "les") {
            r.les.push_back(value);
        } else if (key == "timing_ms") {
            r.timing_ms = static_cast<long long>(parse_number(value, source, num, "timing"));
        } else {
            throw ParseError(source, num, "unknown report key '" + key + "'");
        }
    }
    return r;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace coshom
