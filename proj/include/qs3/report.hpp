#ifndef QS3_REPORT_HPP
#define QS3_REPORT_HPP

#include "qs3/forms.hpp"
#include "qs3/patch.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qs3 {

enum class Status { Pass, Fail, Skip };

const char* status_name(Status s);

struct Witness {
    std::string index;  // offending frame tuple, e.g. "(xi1,xi2)"
    std::string value;  // rendered residual at that tuple
};

struct Entry {
    std::string id;
    std::string paper_tag;
    Status status = Status::Pass;
    std::optional<Witness> witness;
    std::string note;

    // Exact content backing the verdict, used by the numeric cross-check:
    // zero_residuals must vanish, nonzero_claims must not all vanish.
    std::vector<ScalarExpr> zero_residuals;
    std::vector<ScalarExpr> nonzero_claims;
};

struct CheckReport {
    std::string manifold;
    std::string verdict;
    std::vector<Entry> entries;

    void add(Entry e) { entries.push_back(std::move(e)); }
    bool any_failure() const;
    std::size_t count(Status s) const;

    // Stable serializations (byte-identical across runs).
    std::string to_json() const;
    std::string to_text() const;
};

// Entry builders. Zero-checks pass when the residual vanishes identically;
// the witness names the first offending frame tuple.
Entry entry_scalar_zero(std::string id, std::string tag, const ScalarExpr& residual,
                        const FramedPatch& patch);
Entry entry_tensor_zero(std::string id, std::string tag, const Tensor& residual);
Entry entry_form_zero(std::string id, std::string tag, const PForm& residual);
Entry entry_scalars_zero(std::string id, std::string tag, const std::vector<ScalarExpr>& residuals,
                         const FramedPatch& patch);
// Pass when some component is canonically nonzero.
Entry entry_form_nonzero(std::string id, std::string tag, const PForm& claim);
Entry entry_info(std::string id, std::string tag, std::string note);
Entry entry_skip(std::string id, std::string tag, std::string reason);
Entry entry_bool(std::string id, std::string tag, bool ok, std::string fail_note);

}  // namespace qs3

#endif
