// Scalar root finding, 1-D minimization, damped least squares,
// and a deterministic parallel loop.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

namespace bbq::numeric {

struct RootOptions {
    double x_tolerance = 1e-12;
    double f_tolerance = 0.0;  // stop once |f| <= f_tolerance
    int max_iterations = 200;
};

/// Brent's method on [a, b]. Requires f(a) and f(b) of opposite sign (or a zero
/// endpoint); throws BracketError otherwise.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  const RootOptions& options = {});

/// Same as brent_root, reusing already computed endpoint values.
double brent_root(const std::function<double(double)>& f, double a, double fa, double b,
                  double fb, const RootOptions& options);

struct MinimizeResult {
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

/// Golden-section search for a minimum of a unimodal function on [a, b].
MinimizeResult golden_section_minimize(const std::function<double(double)>& f, double a,
                                       double b, double x_tolerance = 1e-6,
                                       int max_iterations = 200);

/// Residual vector r(x); returning any non-finite entry marks x as infeasible.
using ResidualFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LeastSquaresOptions {
    int max_iterations = 200;
    double relative_step = 1e-6;  // forward-difference step, relative to |x|
    double absolute_step = 1e-10;
    double gradient_tolerance = 1e-12;
    double step_tolerance = 1e-10;     // relative parameter change
    double cost_tolerance = 1e-14;     // relative cost decrease
    double initial_damping = 1e-3;
    std::optional<Eigen::VectorXd> lower;  // box constraints (projected)
    std::optional<Eigen::VectorXd> upper;
};

struct LeastSquaresResult {
    Eigen::VectorXd x;
    Eigen::VectorXd residual;
    Eigen::MatrixXd jacobian;
    double cost = 0.0;  // ½‖r‖²
    int iterations = 0;
    bool converged = false;
    std::string message;
};

/// Levenberg-Marquardt with forward-difference Jacobian. Never throws on
/// non-convergence; callers inspect `converged`.
LeastSquaresResult levenberg_marquardt(const ResidualFunction& residual,
                                       const Eigen::VectorXd& x0,
                                       const LeastSquaresOptions& options = {});

/// Standard errors sqrt(diag(s²(JᵀJ)⁻¹)) with s² = ‖r‖²/(m−n). Empty optional
/// when JᵀJ is singular or m ≤ n.
std::optional<Eigen::VectorXd> standard_errors(const Eigen::MatrixXd& jacobian,
                                               const Eigen::VectorXd& residual);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once; callers write results to pre-assigned slots.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// Wraps an angle to (−π, π].
double wrap_angle(double angle);

}  // namespace bbq::numeric
