#ifndef HCME_ERRORS_HPP
#define HCME_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hcme {

/// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad run configuration (unknown key, value out of budget, malformed file).
struct config_error : error {
    using error::error;
};

/// K-type index does not match the parity sector of the realization.
struct parity_error : error {
    using error::error;
};

/// Input occupies Fourier modes above grid/4; the result would alias.
struct bandwidth_error : error {
    using error::error;
};

/// Derivative word exceeds the jet budget (more than 8 letters).
struct budget_error : error {
    using error::error;
};

/// 2F1 parameter c is a nonpositive integer.
struct parameter_degenerate_error : error {
    using error::error;
};

/// Argument lands outside every convergent regime of the series policy.
struct no_convergent_regime_error : error {
    using error::error;
};

/// A ladder coefficient on the requested path has modulus below 1e-8,
/// so the K-type is not reachable from the spherical vector at this s.
struct exceptional_parameter_error : error {
    using error::error;
};

/// Dictionary has no usable columns for the target (or is numerically
/// rank-deficient beyond repair).
struct rank_deficient_error : error {
    using error::error;
};

/// Fit residual is small but the held-out residual is not.
struct overfit_error : error {
    using error::error;
};

/// Circle means at radius r and r/2 disagree: the singularity at the
/// center is not removable (or the evaluation is broken).
struct non_removable_error : error {
    using error::error;
};

/// Complexified Cartan point lies outside the certified window, or the
/// integrand base touches the branch cut (-inf, 0].
struct branch_violation_error : error {
    using error::error;
};

/// A measured quantity violated an internal consistency bound
/// (e.g. off-target ladder residual): a convention bug, not a math fact.
struct internal_check_error : error {
    using error::error;
};

} // namespace hcme

#endif
