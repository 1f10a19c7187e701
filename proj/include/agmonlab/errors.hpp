#ifndef AGMONLAB_ERRORS_HPP
#define AGMONLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace agml {

enum class Errc {
    ok = 0,
    config_error,
    io_error,
    invalid_argument,
    potential_below_one,
    envelope_violation,
    grid_too_coarse,
    no_convergence,
    dimension_overflow,
    positivity_violation,
    quadrature_failure,
    grid_exit_rate_high,
    domain_too_small,
    grid_mismatch,
    empty_window,
    assertion_failure,
};

/// Process exit class: 0 ok, 1 config/IO, 2 numerical failure, 3 assertion failure.
inline int exit_class(Errc c) {
    switch (c) {
        case Errc::ok: return 0;
        case Errc::config_error:
        case Errc::io_error:
        case Errc::invalid_argument: return 1;
        case Errc::assertion_failure: return 3;
        default: return 2;
    }
}

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::ok: return "ok";
        case Errc::config_error: return "ConfigError";
        case Errc::io_error: return "IoError";
        case Errc::invalid_argument: return "InvalidArgument";
        case Errc::potential_below_one: return "PotentialBelowOne";
        case Errc::envelope_violation: return "EnvelopeViolation";
        case Errc::grid_too_coarse: return "GridTooCoarse";
        case Errc::no_convergence: return "NoConvergence";
        case Errc::dimension_overflow: return "DimensionOverflow";
        case Errc::positivity_violation: return "PositivityViolation";
        case Errc::quadrature_failure: return "QuadratureFailure";
        case Errc::grid_exit_rate_high: return "GridExitRateHigh";
        case Errc::domain_too_small: return "DomainTooSmall";
        case Errc::grid_mismatch: return "GridMismatch";
        case Errc::empty_window: return "EmptyWindow";
        case Errc::assertion_failure: return "AssertionFailure";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace agml

#endif
