#pragma once

#include <stdexcept>
#include <string>

namespace qlambda {

enum class ErrorCode {
    SpecMismatch,
    PrecisionExhausted,
    Reducible,
    RootCount,
    Range,
    NonunitConstant,
    NotSquarefreeN,
    NotMonic,
    Degree,
    WrongCase,
    IndexRange,
    NotInQ,
    NotPartialIsometry,
    NotModular,
    UnsupportedSpec,
    Parse,
    Internal,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::SpecMismatch: return "SPEC_MISMATCH";
    case ErrorCode::PrecisionExhausted: return "PRECISION_EXHAUSTED";
    case ErrorCode::Reducible: return "REDUCIBLE";
    case ErrorCode::RootCount: return "ROOT_COUNT";
    case ErrorCode::Range: return "RANGE";
    case ErrorCode::NonunitConstant: return "NONUNIT_CONSTANT";
    case ErrorCode::NotSquarefreeN: return "NOT_SQUAREFREE_N";
    case ErrorCode::NotMonic: return "NOT_MONIC";
    case ErrorCode::Degree: return "DEGREE";
    case ErrorCode::WrongCase: return "WRONG_CASE";
    case ErrorCode::IndexRange: return "INDEX_RANGE";
    case ErrorCode::NotInQ: return "NOT_IN_Q";
    case ErrorCode::NotPartialIsometry: return "NOT_PARTIAL_ISOMETRY";
    case ErrorCode::NotModular: return "NOT_MODULAR";
    case ErrorCode::UnsupportedSpec: return "UNSUPPORTED_SPEC";
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::Internal: return "INTERNAL";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace qlambda
