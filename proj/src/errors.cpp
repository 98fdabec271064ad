#include "qs3/errors.hpp"

namespace qs3 {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::DivisionByZeroExpr: return "DivisionByZeroExpr";
        case ErrorCode::UnsupportedExpression: return "UnsupportedExpression";
        case ErrorCode::UndeclaredSymbol: return "UndeclaredSymbol";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ValenceMismatch: return "ValenceMismatch";
        case ErrorCode::PatchMismatch: return "PatchMismatch";
        case ErrorCode::NonConstantAbstractCoefficient: return "NonConstantAbstractCoefficient";
        case ErrorCode::FrameSolveFailure: return "FrameSolveFailure";
        case ErrorCode::SingularMetric: return "SingularMetric";
        case ErrorCode::DegeneratePlane: return "DegeneratePlane";
        case ErrorCode::KanemakiInconsistent: return "KanemakiInconsistent";
        case ErrorCode::RankUndetermined: return "RankUndetermined";
        case ErrorCode::RankMismatch: return "RankMismatch";
        case ErrorCode::NonConstantKernelDimension: return "NonConstantKernelDimension";
        case ErrorCode::GbarNotWellDefined: return "GbarNotWellDefined";
        case ErrorCode::NotQuasiSasakian: return "NotQuasiSasakian";
        case ErrorCode::UnknownBuiltin: return "UnknownBuiltin";
        case ErrorCode::BadParam: return "BadParam";
    }
    return "Error";
}

}  // namespace qs3
