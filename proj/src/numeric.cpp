#include "qs3/numeric.hpp"

#include <cmath>
#include <random>

namespace qs3 {

namespace {

// A sample point is usable when every denominator appearing in the report
// and every excluded-locus expression stays safely away from zero.
bool point_usable(const std::vector<double>& pt, const ManifoldSpec& spec,
                  const CheckReport& report) {
    for (const auto& ex : spec.domain_excluded)
        if (std::abs(ex.eval(pt)) < 1e-3) return false;
    for (const auto& e : report.entries) {
        for (const auto& r : e.zero_residuals)
            if (std::abs(r.eval_den(pt)) < 1e-6) return false;
        for (const auto& r : e.nonzero_claims)
            if (std::abs(r.eval_den(pt)) < 1e-6) return false;
    }
    return true;
}

}  // namespace

std::vector<std::vector<double>> oracle_points(const ManifoldSpec& spec, const OracleOptions& opt,
                                               const CheckReport& report) {
    const std::size_t nc = spec.coords.size();
    if (opt.fixed_point) return {*opt.fixed_point};
    std::vector<std::vector<double>> pts;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> dist(0.15, 1.45);
    int guard = 0;
    while (static_cast<int>(pts.size()) < opt.points && guard < 1000) {
        ++guard;
        std::vector<double> pt(nc);
        for (auto& v : pt) v = dist(rng);
        if (point_usable(pt, spec, report)) pts.push_back(std::move(pt));
    }
    return pts;
}

bool numeric_crosscheck(CheckReport& report, const ManifoldSpec& spec, const OracleOptions& opt) {
    auto pts = oracle_points(spec, opt, report);
    Entry summary{std::string("numeric_oracle.concordance"), std::string("numeric cross-check")};
    summary.status = Status::Pass;
    if (pts.empty()) {
        summary.status = Status::Fail;
        summary.note = "no usable sample point found";
        report.add(std::move(summary));
        return false;
    }
    std::size_t checked = 0;
    for (const auto& e : report.entries) {
        if (e.status != Status::Pass) continue;
        for (const auto& r : e.zero_residuals) {
            for (const auto& pt : pts) {
                double v = r.eval(pt);
                ++checked;
                if (!(std::abs(v) <= opt.tolerance)) {
                    summary.status = Status::Fail;
                    summary.witness = Witness{e.id, "residual evaluates to " + std::to_string(v)};
                    break;
                }
            }
            if (summary.status == Status::Fail) break;
        }
        if (summary.status == Status::Fail) break;
        if (!e.nonzero_claims.empty()) {
            double best = 0.0;
            for (const auto& r : e.nonzero_claims)
                for (const auto& pt : pts) best = std::max(best, std::abs(r.eval(pt)));
            ++checked;
            if (!(best > opt.tolerance)) {
                summary.status = Status::Fail;
                summary.witness =
                    Witness{e.id, "claimed-nonzero values stay below tolerance at all points"};
                break;
            }
        }
    }
    if (summary.status == Status::Pass)
        summary.note = std::to_string(checked) + " evaluations at " + std::to_string(pts.size()) +
                       " points agree with the exact verdicts";
    bool ok = summary.status == Status::Pass;
    report.add(std::move(summary));
    return ok;
}

}  // namespace qs3
