#include "qs3/builtins.hpp"
#include "qs3/numeric.hpp"
#include "qs3/par.hpp"
#include "qs3/suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

qs3::ManifoldSpec load_target(const std::string& target,
                              const std::vector<std::string>& param_args) {
    std::map<std::string, qs3::Rational> params;
    for (const auto& p : param_args) {
        auto eq = p.find('=');
        qs3::Rational v;
        if (eq == std::string::npos || !qs3::parse_rational(p.substr(eq + 1), v))
            throw qs3::Error(qs3::ErrorCode::BadParam, "expected --param key=rational, got " + p);
        params[p.substr(0, eq)] = v;
    }
    if (target.rfind("builtin:", 0) == 0) return qs3::builtin_spec(target.substr(8), params);
    if (!params.empty())
        throw qs3::Error(qs3::ErrorCode::BadParam, "--param only applies to builtin targets");
    std::ifstream in(target);
    if (!in) throw qs3::Error(qs3::ErrorCode::SyntaxError, "cannot open " + target);
    std::stringstream buf;
    buf << in.rdbuf();
    return qs3::parse_spec(buf.str());
}

std::optional<std::vector<double>> parse_point(const std::string& text,
                                               const qs3::ManifoldSpec& spec) {
    if (text.empty()) return std::nullopt;
    std::vector<double> pt(spec.coords.size(), 0.0);
    std::vector<bool> seen(spec.coords.size(), false);
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw qs3::Error(qs3::ErrorCode::BadParam, "expected coord=value in --point");
        std::string key = item.substr(0, eq);
        auto it = std::find(spec.coords.begin(), spec.coords.end(), key);
        if (it == spec.coords.end())
            throw qs3::Error(qs3::ErrorCode::BadParam, "unknown coordinate '" + key + "' in --point");
        pt[it - spec.coords.begin()] = std::stod(item.substr(eq + 1));
        seen[it - spec.coords.begin()] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw qs3::Error(qs3::ErrorCode::BadParam,
                             "--point must set every coordinate (missing " + spec.coords[i] + ")");
    return pt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verifier for almost contact metric 3-structures"};
    app.require_subcommand(1);

    std::string target, suite_arg = "all", point_arg;
    std::vector<std::string> param_args;
    bool json = false, numeric = false;
    std::uint64_t seed = 1;
    int points = 5, threads = -1;

    CLI::App* check = app.add_subcommand("check", "run a check suite and report");
    check->add_option("target", target, "spec file or builtin:NAME")->required();
    check->add_option("--param", param_args, "builtin parameter key=value");
    check->add_option("--suite", suite_arg,
                      "axioms|normality|quasi-sasakian|classification|foliation|rank|splitting|"
                      "energy|all");
    check->add_flag("--json", json, "emit the report as JSON");
    check->add_flag("--numeric-oracle", numeric,
                    "confirm every exact pass numerically at random chart points");
    check->add_option("--seed", seed, "random seed for the numeric oracle");
    check->add_option("--points", points, "number of sample points for the numeric oracle");
    check->add_option("--point", point_arg, "fixed chart point \"z1=0.3,z2=1.1,...\"");
    check->add_option("--threads", threads, "kernel threads (1 = serial reference, 0 = all cores)");

    std::string emit_target;
    std::vector<std::string> emit_params;
    CLI::App* emit = app.add_subcommand("emit", "print the DSL source of a builtin");
    emit->add_option("target", emit_target, "builtin:NAME")->required();
    emit->add_option("--param", emit_params, "builtin parameter key=value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (emit->parsed()) {
            qs3::ManifoldSpec spec = load_target(emit_target, emit_params);
            std::cout << qs3::emit_spec(spec);
            return 0;
        }
        if (threads >= 0) qs3::par::set_threads(threads);
        qs3::ManifoldSpec spec = load_target(target, param_args);
        auto suite = qs3::parse_suite(suite_arg);
        if (!suite)
            throw qs3::Error(qs3::ErrorCode::BadParam, "unknown suite '" + suite_arg + "'");
        qs3::CheckReport rep = qs3::run_suite(spec, *suite);
        if (numeric) {
            qs3::OracleOptions opt;
            opt.points = points;
            opt.seed = seed;
            opt.fixed_point = parse_point(point_arg, spec);
            qs3::numeric_crosscheck(rep, spec, opt);
        }
        std::cout << (json ? rep.to_json() : rep.to_text());
        return rep.any_failure() ? 1 : 0;
    } catch (const qs3::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
