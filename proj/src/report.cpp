#include "qs3/report.hpp"

#include <json.hpp>

#include <algorithm>

namespace qs3 {

const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Skip: return "skip";
    }
    return "?";
}

bool CheckReport::any_failure() const {
    return std::any_of(entries.begin(), entries.end(),
                       [](const Entry& e) { return e.status == Status::Fail; });
}

std::size_t CheckReport::count(Status s) const {
    return static_cast<std::size_t>(std::count_if(
        entries.begin(), entries.end(), [&](const Entry& e) { return e.status == s; }));
}

std::string CheckReport::to_json() const {
    nlohmann::ordered_json j;
    j["manifold"] = manifold;
    j["verdict"] = verdict;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json je;
        je["id"] = e.id;
        je["status"] = status_name(e.status);
        if (e.witness) {
            je["witness"] = {{"index", e.witness->index}, {"value", e.witness->value}};
        }
        if (!e.note.empty()) je["note"] = e.note;
        je["paper_tag"] = e.paper_tag;
        j["entries"].push_back(std::move(je));
    }
    return j.dump(2) + "\n";
}

std::string CheckReport::to_text() const {
    std::string out;
    out += "manifold: " + manifold + "\n";
    for (const auto& e : entries) {
        out += "  [" + std::string(status_name(e.status)) + "] " + e.id;
        if (!e.paper_tag.empty()) out += "  {" + e.paper_tag + "}";
        if (e.witness) out += "\n         witness " + e.witness->index + " -> " + e.witness->value;
        if (!e.note.empty()) out += "\n         note: " + e.note;
        out += "\n";
    }
    out += "verdict: " + verdict + "\n";
    std::size_t fails = count(Status::Fail), skips = count(Status::Skip);
    out += "summary: " + std::to_string(entries.size()) + " checks, " + std::to_string(fails) +
           " failed, " + std::to_string(skips) + " skipped\n";
    return out;
}

namespace {

std::string tuple_string(const FramedPatch& patch, std::span<const std::size_t> idx) {
    std::string out = "(";
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (k) out += ",";
        out += patch.frame_names()[idx[k]];
    }
    out += ")";
    return out;
}

}  // namespace

Entry entry_scalar_zero(std::string id, std::string tag, const ScalarExpr& residual,
                        const FramedPatch& patch) {
    Entry e{std::move(id), std::move(tag)};
    e.zero_residuals.push_back(residual);
    if (residual.is_zero()) {
        e.status = Status::Pass;
    } else {
        e.status = Status::Fail;
        e.witness = Witness{"()", residual.to_string(patch.coords())};
    }
    return e;
}

Entry entry_tensor_zero(std::string id, std::string tag, const Tensor& residual) {
    Entry e{std::move(id), std::move(tag)};
    e.zero_residuals = residual.components();
    auto bad = residual.first_nonzero();
    if (!bad) {
        e.status = Status::Pass;
        return e;
    }
    e.status = Status::Fail;
    const auto& patch = *residual.patch();
    if (residual.up() == 1) {
        // Report the whole offending vector over the covariant tuple.
        std::vector<std::size_t> down_idx(bad->begin() + 1, bad->end());
        Tensor v = Tensor::vector_field(residual.patch());
        for (std::size_t c = 0; c < residual.dim(); ++c) {
            std::vector<std::size_t> idx = *bad;
            idx[0] = c;
            v.set(c) = residual.at(idx);
        }
        e.witness = Witness{tuple_string(patch, down_idx), render_vector(v)};
    } else {
        e.witness = Witness{tuple_string(patch, *bad),
                            residual.at(*bad).to_string(patch.coords())};
    }
    return e;
}

Entry entry_form_zero(std::string id, std::string tag, const PForm& residual) {
    Entry e{std::move(id), std::move(tag)};
    for (std::size_t i = 0; i < residual.component_count(); ++i)
        e.zero_residuals.push_back(residual.component(i));
    auto bad = residual.first_nonzero_tuple();
    if (!bad) {
        e.status = Status::Pass;
        return e;
    }
    e.status = Status::Fail;
    const auto& patch = *residual.patch();
    e.witness = Witness{tuple_string(patch, *bad),
                        residual.at_sorted(*bad).to_string(patch.coords())};
    return e;
}

Entry entry_scalars_zero(std::string id, std::string tag, const std::vector<ScalarExpr>& residuals,
                         const FramedPatch& patch) {
    Entry e{std::move(id), std::move(tag)};
    e.zero_residuals = residuals;
    e.status = Status::Pass;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        if (residuals[i].is_zero()) continue;
        e.status = Status::Fail;
        e.witness = Witness{"[" + std::to_string(i) + "]", residuals[i].to_string(patch.coords())};
        break;
    }
    return e;
}

Entry entry_form_nonzero(std::string id, std::string tag, const PForm& claim) {
    Entry e{std::move(id), std::move(tag)};
    for (std::size_t i = 0; i < claim.component_count(); ++i)
        e.nonzero_claims.push_back(claim.component(i));
    if (claim.is_zero_form()) {
        e.status = Status::Fail;
        e.note = "form vanishes identically";
    } else {
        e.status = Status::Pass;
        auto t = claim.first_nonzero_tuple();
        const auto& patch = *claim.patch();
        e.note = "nonzero at " + tuple_string(patch, *t) + ": " +
                 claim.at_sorted(*t).to_string(patch.coords());
    }
    return e;
}

Entry entry_info(std::string id, std::string tag, std::string note) {
    Entry e{std::move(id), std::move(tag)};
    e.status = Status::Pass;
    e.note = std::move(note);
    return e;
}

Entry entry_skip(std::string id, std::string tag, std::string reason) {
    Entry e{std::move(id), std::move(tag)};
    e.status = Status::Skip;
    e.note = std::move(reason);
    return e;
}

Entry entry_bool(std::string id, std::string tag, bool ok, std::string fail_note) {
    Entry e{std::move(id), std::move(tag)};
    e.status = ok ? Status::Pass : Status::Fail;
    if (!ok) e.note = std::move(fail_note);
    return e;
}

}  // namespace qs3
