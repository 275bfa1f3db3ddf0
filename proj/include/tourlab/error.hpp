#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tourlab {

enum class ErrorCode {
    loop_query,
    malformed_injection,
    invalid_graph,
    cyclic_input,
    budget_exhausted,
    pool_too_small,
    pin_incompatible,
    oracle_failure,
    internal_consistency,
    invalid_argument,
    parse_error,
    unknown_family,
};

inline std::string_view to_string(ErrorCode c)
{
    switch (c) {
    case ErrorCode::loop_query: return "loop-query";
    case ErrorCode::malformed_injection: return "malformed-injection";
    case ErrorCode::invalid_graph: return "invalid-graph";
    case ErrorCode::cyclic_input: return "cyclic-input";
    case ErrorCode::budget_exhausted: return "budget-exhausted";
    case ErrorCode::pool_too_small: return "pool-too-small";
    case ErrorCode::pin_incompatible: return "pin-incompatible";
    case ErrorCode::oracle_failure: return "oracle-failure";
    case ErrorCode::internal_consistency: return "internal-consistency";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::unknown_family: return "unknown-family";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace tourlab
