#include "qs3/builtins.hpp"

#include "qs3/errors.hpp"

namespace qs3 {

namespace {

int epsilon(int a, int b, int c) {
    if (a == b || b == c || a == c) return 0;
    // parity of the permutation (a,b,c) of (0,1,2)
    return ((b - a + 3) % 3 == 1) ? 1 : -1;
}

ScalarExpr rat(long long n) { return ScalarExpr::from_int(n); }

// phi tables of the standard quaternionic pattern on blocks (X,Y,U,V):
//   phi_1: X->Y, Y->-X, U->V, V->-U
//   phi_2: X->U, Y->-V, U->-X, V->Y
//   phi_3: X->V, Y->U,  U->-Y, V->-X
// target_block[alpha][src], sign[alpha][src] with blocks 0=X,1=Y,2=U,3=V.
constexpr int kPhiBlock[3][4] = {{1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
constexpr int kPhiSign[3][4] = {{1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};

void fill_reeb_phi(ManifoldSpec& spec, std::size_t xi_base) {
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            int g = 3 - a - b;
            int e = epsilon(a, b, g);
            if (a == b || e == 0) continue;
            // phi_a xi_b = eps(a,b,g) xi_g
            spec.structures[a].phi[xi_base + g][xi_base + b] = rat(e);
        }
}

void fill_block_phi(ManifoldSpec& spec, std::size_t n) {
    // frame layout: X_1..X_n, Y_1..Y_n, U_1..U_n, V_1..V_n, then the xi's
    for (int a = 0; a < 3; ++a)
        for (int blk = 0; blk < 4; ++blk)
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t src = blk * n + i;
                std::size_t dst = kPhiBlock[a][blk] * n + i;
                spec.structures[a].phi[dst][src] = rat(kPhiSign[a][blk]);
            }
}

void fill_delta_eta(ManifoldSpec& spec, std::size_t xi_base) {
    for (int a = 0; a < 3; ++a) {
        spec.structures[a].eta[xi_base + a] = rat(1);
        spec.structures[a].xi[xi_base + a] = rat(1);
    }
}

void init_tables(ManifoldSpec& spec, std::size_t structures) {
    const std::size_t m = spec.frame_names.size();
    spec.structures.assign(structures, StructureSpec{});
    for (auto& s : spec.structures) {
        s.xi.assign(m, ScalarExpr());
        s.eta.assign(m, ScalarExpr());
        s.phi.assign(m, std::vector<ScalarExpr>(m));
    }
    spec.brackets.assign(m, std::vector<std::vector<ScalarExpr>>(m, std::vector<ScalarExpr>(m)));
    spec.metric.assign(m, std::vector<ScalarExpr>(m));
}

void set_bracket(ManifoldSpec& spec, std::size_t a, std::size_t b, std::size_t c,
                 const Rational& v) {
    spec.brackets[a][b][c] = ScalarExpr::from_rational(v);
    spec.brackets[b][a][c] = ScalarExpr::from_rational(-v);
}

ManifoldSpec lie7_common(const std::string& name) {
    ManifoldSpec spec;
    spec.name = name;
    spec.abstract_mode = true;
    spec.frame_names = {"X1", "X2", "X3", "X4", "xi1", "xi2", "xi3"};
    init_tables(spec, 3);
    spec.metric_kind = ManifoldSpec::MetricKind::Orthonormal;
    for (std::size_t i = 0; i < 7; ++i) spec.metric[i][i] = rat(1);
    fill_delta_eta(spec, 4);
    fill_reeb_phi(spec, 4);
    // horizontal phi tables with n=1 blocks X1,X2,X3,X4
    for (int a = 0; a < 3; ++a)
        for (int blk = 0; blk < 4; ++blk)
            spec.structures[a].phi[kPhiBlock[a][blk]][blk] = rat(kPhiSign[a][blk]);
    return spec;
}

Rational take_param(std::map<std::string, Rational>& params, const std::string& key,
                    const Rational& def) {
    auto it = params.find(key);
    if (it == params.end()) return def;
    Rational v = it->second;
    params.erase(it);
    return v;
}

long long int_param(const Rational& v, const std::string& what) {
    if (rat_den(v) != 1 || rat_num(v) < 1 || rat_num(v) > 8)
        throw Error(ErrorCode::BadParam, what + " must be an integer between 1 and 8");
    return rat_num(v).convert_to<long long>();
}

void block_frame_names(ManifoldSpec& spec, long long n) {
    const char* blocks[4] = {"X", "Y", "U", "V"};
    const char* coords[4] = {"x", "y", "u", "v"};
    for (int blk = 0; blk < 4; ++blk)
        for (long long i = 1; i <= n; ++i) {
            spec.frame_names.push_back(std::string(blocks[blk]) + std::to_string(i));
            spec.coords.push_back(std::string(coords[blk]) + std::to_string(i));
        }
    for (int a = 1; a <= 3; ++a) {
        spec.frame_names.push_back("xi" + std::to_string(a));
        spec.coords.push_back("z" + std::to_string(a));
    }
}

}  // namespace

ManifoldSpec builtin_spec(const std::string& name, std::map<std::string, Rational> params) {
    if (name == "g7" || name == "g7p") {
        if (!params.empty()) throw Error(ErrorCode::BadParam, name + " takes no parameters");
        ManifoldSpec spec = lie7_common(name);
        if (name == "g7") {
            // [xi1,xi2] = [xi2,xi3] = [xi3,xi1] = X1
            set_bracket(spec, 4, 5, 0, 1);
            set_bracket(spec, 5, 6, 0, 1);
            set_bracket(spec, 6, 4, 0, 1);
        } else {
            // [xi_a, X_i] = xi_a
            for (std::size_t a = 4; a < 7; ++a)
                for (std::size_t i = 0; i < 4; ++i) set_bracket(spec, a, i, a, 1);
        }
        return spec;
    }
    if (name == "s3sas") {
        if (!params.empty()) throw Error(ErrorCode::BadParam, "s3sas takes no parameters");
        ManifoldSpec spec;
        spec.name = "s3sas";
        spec.abstract_mode = true;
        spec.frame_names = {"xi1", "xi2", "xi3"};
        init_tables(spec, 3);
        spec.metric_kind = ManifoldSpec::MetricKind::Orthonormal;
        for (std::size_t i = 0; i < 3; ++i) spec.metric[i][i] = rat(1);
        fill_delta_eta(spec, 0);
        fill_reeb_phi(spec, 0);
        set_bracket(spec, 0, 1, 2, 2);
        set_bracket(spec, 1, 2, 0, 2);
        set_bracket(spec, 2, 0, 1, 2);
        return spec;
    }
    if (name == "trig" || name == "flat") {
        long long n = int_param(take_param(params, "n", Rational(1)), "n");
        Rational c;
        if (name == "trig") {
            c = take_param(params, "c", Rational(2));
            if (c == 0) throw Error(ErrorCode::BadParam, "trig needs c != 0");
        }
        if (!params.empty())
            throw Error(ErrorCode::BadParam, "unknown parameter " + params.begin()->first);

        ManifoldSpec spec;
        spec.name = name;
        spec.params["n"] = Rational(n);
        if (name == "trig") spec.params["c"] = c;
        spec.abstract_mode = false;
        block_frame_names(spec, n);
        const std::size_t m = spec.frame_names.size();
        init_tables(spec, 3);
        spec.metric_kind = ManifoldSpec::MetricKind::Orthonormal;
        for (std::size_t i = 0; i < m; ++i) spec.metric[i][i] = rat(1);

        spec.frame.assign(m, std::vector<ScalarExpr>(m));
        for (std::size_t i = 0; i < 4 * static_cast<std::size_t>(n); ++i)
            spec.frame[i][i] = rat(1);
        const std::size_t z1 = m - 3, z2 = m - 2, z3 = m - 1;  // coordinate slots
        if (name == "flat") {
            for (int a = 0; a < 3; ++a) spec.frame[z1 + a][z1 + a] = rat(1);
        } else {
            ScalarExpr cc = ScalarExpr::from_rational(c);
            ScalarExpr s1 = ScalarExpr::sin_of(static_cast<std::uint32_t>(z1));
            ScalarExpr c1 = ScalarExpr::cos_of(static_cast<std::uint32_t>(z1));
            ScalarExpr s2 = ScalarExpr::sin_of(static_cast<std::uint32_t>(z2));
            ScalarExpr c2 = ScalarExpr::cos_of(static_cast<std::uint32_t>(z2));
            // xi1 = c d_z1
            spec.frame[z1][z1] = cc;
            // xi2 = c( cos z1 cot z2 d_z1 + sin z1 d_z2 - cos z1 / sin z2 d_z3 )
            spec.frame[z2][z1] = cc * c1 * c2 / s2;
            spec.frame[z2][z2] = cc * s1;
            spec.frame[z2][z3] = -(cc * c1 / s2);
            // xi3 = c( -sin z1 cot z2 d_z1 + cos z1 d_z2 + sin z1 / sin z2 d_z3 )
            spec.frame[z3][z1] = -(cc * s1 * c2 / s2);
            spec.frame[z3][z2] = cc * c1;
            spec.frame[z3][z3] = cc * s1 / s2;
            spec.domain_excluded.push_back(s2);
        }
        fill_delta_eta(spec, z1);
        fill_reeb_phi(spec, z1);
        fill_block_phi(spec, static_cast<std::size_t>(n));
        return spec;
    }
    throw Error(ErrorCode::UnknownBuiltin, "no builtin named '" + name + "'");
}

std::vector<std::string> builtin_names() { return {"g7", "g7p", "trig", "flat", "s3sas"}; }

}  // namespace qs3
