#ifndef QS3_ERRORS_HPP
#define QS3_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qs3 {

// Every recoverable failure carries a stable code so the suite runner can
// convert it into a report entry instead of aborting the whole run.
enum class ErrorCode {
    DivisionByZeroExpr,
    UnsupportedExpression,
    UndeclaredSymbol,
    SyntaxError,
    DimensionMismatch,
    ValenceMismatch,
    PatchMismatch,
    NonConstantAbstractCoefficient,
    FrameSolveFailure,
    SingularMetric,
    DegeneratePlane,
    KanemakiInconsistent,
    RankUndetermined,
    RankMismatch,
    NonConstantKernelDimension,
    GbarNotWellDefined,
    NotQuasiSasakian,
    UnknownBuiltin,
    BadParam,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

 private:
    ErrorCode code_;
};

}  // namespace qs3

#endif
