#ifndef HYPERRADON_ERROR_HPP
#define HYPERRADON_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperradon {

enum class errc {
    invalid_argument,
    dimension_mismatch,
    non_timelike,
    domain_error,
    no_convergence,
    step_audit,
    ill_conditioned,
    grid_too_coarse,
    missing_profile,
    pole_at_zero,
    depth_exceeded,
    incompatible,
};

inline std::string_view to_string(errc code) noexcept
{
    switch (code) {
    case errc::invalid_argument: return "InvalidArgument";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::non_timelike: return "NonTimelike";
    case errc::domain_error: return "DomainError";
    case errc::no_convergence: return "NoConvergence";
    case errc::step_audit: return "StepAuditFailure";
    case errc::ill_conditioned: return "IllConditioned";
    case errc::grid_too_coarse: return "GridTooCoarse";
    case errc::missing_profile: return "MissingProfile";
    case errc::pole_at_zero: return "PoleAtZero";
    case errc::depth_exceeded: return "DepthExceeded";
    case errc::incompatible: return "Incompatible";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what)
    {
    }

    errc code() const noexcept { return code_; }
    /// The message without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    errc code_;
    std::string message_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what)
{
    if (!cond) {
        fail(code, what);
    }
}

/// Literal messages are only turned into strings on failure.
inline void require(bool cond, errc code, const char* what)
{
    if (!cond) [[unlikely]] {
        fail(code, what);
    }
}

} // namespace hyperradon

#endif // HYPERRADON_ERROR_HPP
