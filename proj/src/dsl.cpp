#include "qs3/dsl.hpp"

#include "qs3/expr.hpp"

#include <algorithm>
#include <sstream>

namespace qs3 {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

bool valid_name(const std::string& s) {
    if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

int find_name(const std::vector<std::string>& names, const std::string& s) {
    auto it = std::find(names.begin(), names.end(), s);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

[[noreturn]] void fail_line(std::size_t line_no, ErrorCode code, const std::string& msg) {
    throw Error(code, "line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

ManifoldSpec parse_spec(const std::string& src) {
    ManifoldSpec spec;
    std::vector<std::string> d_names;  // d_<coord> basis for frame rows

    struct PendingVector {
        std::size_t line_no;
        std::string head, rhs;
    };
    // First pass collects declarations so later lines can reference them.
    std::vector<std::pair<std::size_t, std::string>> lines;
    {
        std::istringstream in(src);
        std::string raw;
        std::size_t no = 0;
        while (std::getline(in, raw)) {
            ++no;
            std::string line = strip_comment(raw);
            if (split_ws(line).empty()) continue;
            lines.emplace_back(no, line);
        }
    }

    bool saw_manifold = false, saw_metric = false;
    std::vector<std::pair<std::size_t, std::string>> frame_rows, bracket_rows, structure_rows,
        metric_rows, domain_rows;

    for (const auto& [no, line] : lines) {
        auto words = split_ws(line);
        const std::string& key = words[0];
        if (key == "manifold") {
            if (saw_manifold) fail_line(no, ErrorCode::SyntaxError, "duplicate manifold line");
            if (words.size() != 2 || !valid_name(words[1]))
                fail_line(no, ErrorCode::SyntaxError, "expected: manifold NAME");
            spec.name = words[1];
            saw_manifold = true;
        } else if (key == "params") {
            for (std::size_t i = 1; i < words.size(); ++i) {
                auto eq = words[i].find('=');
                if (eq == std::string::npos)
                    fail_line(no, ErrorCode::SyntaxError, "expected k=v in params");
                std::string k = words[i].substr(0, eq);
                Rational v;
                if (!valid_name(k) || !parse_rational(words[i].substr(eq + 1), v))
                    fail_line(no, ErrorCode::SyntaxError, "bad parameter '" + words[i] + "'");
                if (!spec.params.emplace(k, v).second)
                    fail_line(no, ErrorCode::SyntaxError, "duplicate parameter " + k);
            }
        } else if (key == "coords") {
            if (!spec.coords.empty())
                fail_line(no, ErrorCode::SyntaxError, "duplicate coords line");
            for (std::size_t i = 1; i < words.size(); ++i) {
                if (!valid_name(words[i]))
                    fail_line(no, ErrorCode::SyntaxError, "bad coordinate name " + words[i]);
                if (find_name(spec.coords, words[i]) >= 0)
                    fail_line(no, ErrorCode::SyntaxError, "duplicate coordinate " + words[i]);
                spec.coords.push_back(words[i]);
                d_names.push_back("d_" + words[i]);
            }
        } else if (key == "frame") {
            frame_rows.emplace_back(no, line);
        } else if (key == "bracket") {
            bracket_rows.emplace_back(no, line);
        } else if (key == "domain") {
            domain_rows.emplace_back(no, line);
        } else if (key == "metric") {
            metric_rows.emplace_back(no, line);
            saw_metric = true;
        } else if (key == "structure") {
            structure_rows.emplace_back(no, line);
        } else {
            fail_line(no, ErrorCode::SyntaxError, "unknown directive '" + key + "'");
        }
    }
    if (!saw_manifold) throw Error(ErrorCode::SyntaxError, "missing manifold line");

    spec.abstract_mode = spec.coords.empty();
    ExprSymbols syms{&spec.coords, &spec.params};

    // Frame declarations.
    for (const auto& [no, line] : frame_rows) {
        auto eq = line.find('=');
        auto head = split_ws(eq == std::string::npos ? line : line.substr(0, eq));
        if (head.size() != 2 || !valid_name(head[1]))
            fail_line(no, ErrorCode::SyntaxError, "expected: frame NAME [= expansion]");
        const std::string& name = head[1];
        if (find_name(spec.frame_names, name) >= 0 || find_name(spec.coords, name) >= 0)
            fail_line(no, ErrorCode::SyntaxError, "name " + name + " already declared");
        spec.frame_names.push_back(name);
        if (spec.abstract_mode) {
            if (eq != std::string::npos)
                fail_line(no, ErrorCode::SyntaxError,
                          "abstract frames take no coordinate expansion (no coords declared)");
        } else {
            if (eq == std::string::npos)
                fail_line(no, ErrorCode::SyntaxError, "coordinate-mode frame needs '= expansion'");
            try {
                auto trees = parse_vector_source(line.substr(eq + 1), syms, d_names);
                std::vector<ScalarExpr> row(spec.coords.size());
                for (std::size_t i = 0; i < trees.size(); ++i)
                    row[i] = trees[i] ? normalize(trees[i]) : ScalarExpr();
                spec.frame.push_back(std::move(row));
            } catch (const Error& e) {
                fail_line(no, e.code(), e.what());
            }
        }
    }
    const std::size_t m = spec.frame_names.size();
    if (m == 0) throw Error(ErrorCode::SyntaxError, "no frame fields declared");

    // Brackets (abstract mode only).
    spec.brackets.assign(m, std::vector<std::vector<ScalarExpr>>(m, std::vector<ScalarExpr>(m)));
    std::vector<std::vector<bool>> bracket_given(m, std::vector<bool>(m, false));
    for (const auto& [no, line] : bracket_rows) {
        if (!spec.abstract_mode)
            fail_line(no, ErrorCode::SyntaxError, "bracket tables belong to abstract frames only");
        auto lb = line.find('['), rb = line.find(']'), eq = line.find('=');
        auto comma = line.find(',');
        if (lb == std::string::npos || rb == std::string::npos || comma == std::string::npos ||
            eq == std::string::npos || !(lb < comma && comma < rb && rb < eq))
            fail_line(no, ErrorCode::SyntaxError, "expected: bracket [A,B] = combination");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string an = trim(line.substr(lb + 1, comma - lb - 1));
        std::string bn = trim(line.substr(comma + 1, rb - comma - 1));
        int a = find_name(spec.frame_names, an), b = find_name(spec.frame_names, bn);
        if (a < 0 || b < 0)
            fail_line(no, ErrorCode::UndeclaredSymbol, "unknown frame field in bracket");
        std::vector<ScalarExpr> value(m);
        try {
            auto trees = parse_vector_source(line.substr(eq + 1), syms, spec.frame_names);
            for (std::size_t c = 0; c < m; ++c)
                if (trees[c]) value[c] = normalize(trees[c]);
        } catch (const Error& e) {
            fail_line(no, e.code(), e.what());
        }
        if (a == b && !std::all_of(value.begin(), value.end(),
                                   [](const ScalarExpr& e) { return e.is_zero(); }))
            fail_line(no, ErrorCode::DimensionMismatch, "[X,X] must vanish");
        if (bracket_given[a][b]) {
            for (std::size_t c = 0; c < m; ++c)
                if (!(spec.brackets[a][b][c] - value[c]).is_zero())
                    fail_line(no, ErrorCode::DimensionMismatch,
                              "conflicting redeclaration of bracket [" + an + "," + bn + "]");
            continue;
        }
        if (bracket_given[b][a]) {
            // The reversed row must be the exact negative.
            for (std::size_t c = 0; c < m; ++c)
                if (!(spec.brackets[b][a][c] + value[c]).is_zero())
                    fail_line(no, ErrorCode::DimensionMismatch,
                              "bracket [" + an + "," + bn + "] conflicts with [" + bn + "," + an +
                                  "]: table would not be antisymmetric");
        }
        bracket_given[a][b] = true;
        spec.brackets[a][b] = value;
        if (a != b && !bracket_given[b][a]) {
            bracket_given[b][a] = true;
            for (std::size_t c = 0; c < m; ++c) spec.brackets[b][a][c] = -value[c];
        }
        for (const auto& e : value)
            if (!e.is_zero() && !e.is_rational())
                fail_line(no, ErrorCode::NonConstantAbstractCoefficient,
                          "bracket constants must be rational");
    }

    // Domain exclusions.
    for (const auto& [no, line] : domain_rows) {
        auto words = split_ws(line);
        if (words.size() < 3 || words[1] != "exclude")
            fail_line(no, ErrorCode::SyntaxError, "expected: domain exclude EXPR");
        auto pos = line.find("exclude");
        try {
            spec.domain_excluded.push_back(normalize(parse_scalar_source(line.substr(pos + 7), syms)));
        } catch (const Error& e) {
            fail_line(no, e.code(), e.what());
        }
    }

    // Metric.
    spec.metric.assign(m, std::vector<ScalarExpr>(m));
    std::vector<std::vector<bool>> metric_given(m, std::vector<bool>(m, false));
    for (const auto& [no, line] : metric_rows) {
        auto words = split_ws(line);
        if (words.size() == 2 && words[1] == "orthonormal") {
            if (spec.metric_kind == ManifoldSpec::MetricKind::Explicit)
                fail_line(no, ErrorCode::SyntaxError, "metric declared twice");
            spec.metric_kind = ManifoldSpec::MetricKind::Orthonormal;
            continue;
        }
        if (spec.metric_kind == ManifoldSpec::MetricKind::Orthonormal)
            fail_line(no, ErrorCode::SyntaxError, "metric declared twice");
        spec.metric_kind = ManifoldSpec::MetricKind::Explicit;
        auto lp = line.find('('), rp = line.find(')'), eq = line.find('=');
        auto comma = line.find(',');
        if (lp == std::string::npos || rp == std::string::npos || comma == std::string::npos ||
            eq == std::string::npos || !(lp < comma && comma < rp && rp < eq))
            fail_line(no, ErrorCode::SyntaxError, "expected: metric g(A,B) = expr");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        int a = find_name(spec.frame_names, trim(line.substr(lp + 1, comma - lp - 1)));
        int b = find_name(spec.frame_names, trim(line.substr(comma + 1, rp - comma - 1)));
        if (a < 0 || b < 0) fail_line(no, ErrorCode::UndeclaredSymbol, "unknown frame field in metric");
        ScalarExpr v;
        try {
            v = normalize(parse_scalar_source(line.substr(eq + 1), syms));
        } catch (const Error& e) {
            fail_line(no, e.code(), e.what());
        }
        if ((metric_given[a][b] && !(spec.metric[a][b] - v).is_zero()) ||
            (metric_given[b][a] && !(spec.metric[b][a] - v).is_zero()))
            fail_line(no, ErrorCode::DimensionMismatch, "conflicting metric entry");
        metric_given[a][b] = metric_given[b][a] = true;
        spec.metric[a][b] = v;
        spec.metric[b][a] = v;
    }
    if (spec.metric_kind == ManifoldSpec::MetricKind::Orthonormal)
        for (std::size_t i = 0; i < m; ++i) spec.metric[i][i] = ScalarExpr::from_int(1);

    // Structures.
    int max_index = 0;
    for (const auto& [no, line] : structure_rows) {
        auto words = split_ws(line);
        if (words.size() < 3) fail_line(no, ErrorCode::SyntaxError, "malformed structure line");
        int k = 0;
        try {
            k = std::stoi(words[1]);
        } catch (...) {
            fail_line(no, ErrorCode::SyntaxError, "structure index must be 1, 2 or 3");
        }
        if (k < 1 || k > 3) fail_line(no, ErrorCode::SyntaxError, "structure index must be 1, 2 or 3");
        max_index = std::max(max_index, k);
    }
    if (max_index != 1 && max_index != 3)
        throw Error(ErrorCode::DimensionMismatch,
                    "declare exactly one or exactly three structures");
    spec.structures.assign(max_index, StructureSpec{});
    for (auto& s : spec.structures) {
        s.xi.assign(m, ScalarExpr());
        s.eta.assign(m, ScalarExpr());
        s.phi.assign(m, std::vector<ScalarExpr>(m));
    }
    std::vector<bool> xi_given(max_index, false);
    for (const auto& [no, line] : structure_rows) {
        auto words = split_ws(line);
        int k = std::stoi(words[1]) - 1;
        StructureSpec& st = spec.structures[k];
        const std::string& what = words[2];
        auto eq = line.find('=');
        if (eq == std::string::npos) fail_line(no, ErrorCode::SyntaxError, "missing '='");
        std::string rhs = line.substr(eq + 1);
        try {
            if (what.rfind("xi", 0) == 0 && what.find('(') == std::string::npos) {
                auto trees = parse_vector_source(rhs, syms, spec.frame_names);
                for (std::size_t c = 0; c < m; ++c)
                    st.xi[c] = trees[c] ? normalize(trees[c]) : ScalarExpr();
                xi_given[k] = true;
            } else if (what.rfind("eta(", 0) == 0 || what.rfind("phi(", 0) == 0) {
                auto lp = what.find('('), rp = what.find(')');
                if (rp == std::string::npos) fail_line(no, ErrorCode::SyntaxError, "missing ')'");
                std::string arg = what.substr(lp + 1, rp - lp - 1);
                int b = find_name(spec.frame_names, arg);
                if (b < 0) fail_line(no, ErrorCode::UndeclaredSymbol, "unknown frame field " + arg);
                if (what[0] == 'e') {
                    st.eta[b] = normalize(parse_scalar_source(rhs, syms));
                } else {
                    auto trees = parse_vector_source(rhs, syms, spec.frame_names);
                    for (std::size_t c = 0; c < m; ++c)
                        st.phi[c][b] = trees[c] ? normalize(trees[c]) : ScalarExpr();
                }
            } else {
                fail_line(no, ErrorCode::SyntaxError,
                          "expected structure K xi|eta(E)|phi(E) = ...");
            }
        } catch (const Error& e) {
            fail_line(no, e.code(), e.what());
        }
    }
    for (int k = 0; k < max_index; ++k)
        if (!xi_given[k])
            throw Error(ErrorCode::SyntaxError,
                        "structure " + std::to_string(k + 1) + " has no xi declaration");

    // Dimension discipline.
    if (max_index == 3) {
        if (m % 4 != 3)
            throw Error(ErrorCode::DimensionMismatch,
                        "three structures need dimension congruent to 3 mod 4, got " +
                            std::to_string(m));
    } else if (m % 2 != 1) {
        throw Error(ErrorCode::DimensionMismatch,
                    "an almost contact structure needs odd dimension, got " + std::to_string(m));
    }
    if (!spec.abstract_mode && spec.coords.size() != m)
        throw Error(ErrorCode::DimensionMismatch,
                    "coordinate charts need as many frame fields as coordinates");
    return spec;
}

namespace {

std::string render_combination(const std::vector<ScalarExpr>& coeffs,
                               const std::vector<std::string>& names,
                               const std::vector<std::string>& coord_names) {
    std::string out;
    for (std::size_t a = 0; a < coeffs.size(); ++a) {
        const ScalarExpr& c = coeffs[a];
        if (c.is_zero()) continue;
        std::string cs = c.to_string(coord_names);
        std::string term;
        if (cs == "1") {
            term = names[a];
        } else if (cs == "-1") {
            term = "-" + names[a];
        } else {
            bool simple = cs.find_first_of("+-") == std::string::npos ||
                          (cs[0] == '-' && cs.find_first_of("+-", 1) == std::string::npos);
            term = (simple ? cs : "(" + cs + ")") + "*" + names[a];
        }
        if (out.empty()) {
            out = term;
        } else if (term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out.empty() ? "0" : out;
}

}  // namespace

std::string emit_spec(const ManifoldSpec& spec) {
    std::ostringstream out;
    out << "manifold " << spec.name << "\n";
    if (!spec.params.empty()) {
        out << "params";
        for (const auto& [k, v] : spec.params) out << " " << k << "=" << rational_to_string(v);
        out << "\n";
    }
    std::vector<std::string> d_names;
    if (!spec.coords.empty()) {
        out << "coords";
        for (const auto& c : spec.coords) {
            out << " " << c;
            d_names.push_back("d_" + c);
        }
        out << "\n";
    }
    const std::size_t m = spec.frame_names.size();
    for (std::size_t a = 0; a < m; ++a) {
        out << "frame " << spec.frame_names[a];
        if (!spec.abstract_mode)
            out << " = " << render_combination(spec.frame[a], d_names, spec.coords);
        out << "\n";
    }
    if (spec.abstract_mode) {
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) {
                bool nonzero = false;
                for (const auto& e : spec.brackets[a][b])
                    if (!e.is_zero()) nonzero = true;
                if (!nonzero) continue;
                out << "bracket [" << spec.frame_names[a] << "," << spec.frame_names[b] << "] = "
                    << render_combination(spec.brackets[a][b], spec.frame_names, spec.coords)
                    << "\n";
            }
    }
    for (const auto& e : spec.domain_excluded)
        out << "domain exclude " << e.to_string(spec.coords) << "\n";
    if (spec.metric_kind == ManifoldSpec::MetricKind::Orthonormal) {
        out << "metric orthonormal\n";
    } else if (spec.metric_kind == ManifoldSpec::MetricKind::Explicit) {
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a; b < m; ++b)
                if (!spec.metric[a][b].is_zero())
                    out << "metric g(" << spec.frame_names[a] << "," << spec.frame_names[b]
                        << ") = " << spec.metric[a][b].to_string(spec.coords) << "\n";
    }
    for (std::size_t k = 0; k < spec.structures.size(); ++k) {
        const auto& st = spec.structures[k];
        out << "structure " << (k + 1) << " xi = "
            << render_combination(st.xi, spec.frame_names, spec.coords) << "\n";
        for (std::size_t b = 0; b < m; ++b)
            if (!st.eta[b].is_zero())
                out << "structure " << (k + 1) << " eta(" << spec.frame_names[b]
                    << ") = " << st.eta[b].to_string(spec.coords) << "\n";
        for (std::size_t b = 0; b < m; ++b) {
            std::vector<ScalarExpr> col(m);
            bool nonzero = false;
            for (std::size_t c = 0; c < m; ++c) {
                col[c] = st.phi[c][b];
                if (!col[c].is_zero()) nonzero = true;
            }
            if (!nonzero) continue;
            out << "structure " << (k + 1) << " phi(" << spec.frame_names[b]
                << ") = " << render_combination(col, spec.frame_names, spec.coords) << "\n";
        }
    }
    return out.str();
}

Geometry build_geometry(const ManifoldSpec& spec) {
    Geometry g;
    if (spec.abstract_mode) {
        g.patch = FramedPatch::abstract_frame(spec.frame_names, spec.brackets);
    } else {
        g.patch = FramedPatch::coordinate(spec.coords, spec.frame_names, spec.frame,
                                          spec.domain_excluded);
    }
    const std::size_t m = spec.dim();
    if (spec.metric_kind != ManifoldSpec::MetricKind::None) {
        Tensor gt = Tensor::bilinear(g.patch);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) gt.set(a, b) = spec.metric[a][b];
        g.metric.emplace(std::move(gt));
    }
    for (const auto& st : spec.structures) {
        AlmostContactStructure s{Tensor::endo(g.patch), Tensor::vector_field(g.patch),
                                 Tensor::one_form(g.patch)};
        for (std::size_t a = 0; a < m; ++a) {
            s.xi.set(a) = st.xi[a];
            s.eta.set(a) = st.eta[a];
            for (std::size_t b = 0; b < m; ++b) s.phi.set(a, b) = st.phi[a][b];
        }
        g.structures.push_back(std::move(s));
    }
    return g;
}

bool specs_equal(const ManifoldSpec& a, const ManifoldSpec& b) {
    auto vec_eq = [](const std::vector<ScalarExpr>& x, const std::vector<ScalarExpr>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!(x[i] - y[i]).is_zero()) return false;
        return true;
    };
    if (a.name != b.name || a.params != b.params || a.coords != b.coords ||
        a.frame_names != b.frame_names || a.abstract_mode != b.abstract_mode ||
        a.metric_kind != b.metric_kind || a.structures.size() != b.structures.size())
        return false;
    if (!a.abstract_mode) {
        for (std::size_t i = 0; i < a.frame.size(); ++i)
            if (!vec_eq(a.frame[i], b.frame[i])) return false;
    } else {
        for (std::size_t i = 0; i < a.brackets.size(); ++i)
            for (std::size_t j = 0; j < a.brackets[i].size(); ++j)
                if (!vec_eq(a.brackets[i][j], b.brackets[i][j])) return false;
    }
    if (!vec_eq(a.domain_excluded, b.domain_excluded)) return false;
    for (std::size_t i = 0; i < a.metric.size(); ++i)
        if (!vec_eq(a.metric[i], b.metric[i])) return false;
    for (std::size_t k = 0; k < a.structures.size(); ++k) {
        if (!vec_eq(a.structures[k].xi, b.structures[k].xi)) return false;
        if (!vec_eq(a.structures[k].eta, b.structures[k].eta)) return false;
        for (std::size_t i = 0; i < a.structures[k].phi.size(); ++i)
            if (!vec_eq(a.structures[k].phi[i], b.structures[k].phi[i])) return false;
    }
    return true;
}

}  // namespace qs3
