#include "bbq/numeric.hpp"

#include "bbq/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

namespace bbq::numeric {

double brent_root(const std::function<double(double)>& f, double a, double b,
                  const RootOptions& options) {
    return brent_root(f, a, f(a), b, f(b), options);
}

double brent_root(const std::function<double(double)>& f, double a, double fa, double b,
                  double fb, const RootOptions& options) {
    if (!std::isfinite(fa) || !std::isfinite(fb)) {
        throw BracketError("non-finite function value at bracket endpoint");
    }
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        throw BracketError("no sign change on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    }
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                           0.5 * options.x_tolerance;
        const double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0 || std::abs(fb) <= options.f_tolerance) {
            return b;
        }
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q; else p = -p;
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
        fb = f(b);
        if (!std::isfinite(fb)) {
            throw BracketError("non-finite function value at x = " + std::to_string(b));
        }
    }
    return b;
}

MinimizeResult golden_section_minimize(const std::function<double(double)>& f, double a,
                                       double b, double x_tolerance, int max_iterations) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    if (a > b) std::swap(a, b);
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    int evals = 2;
    for (int iter = 0; iter < max_iterations && (b - a) > x_tolerance; ++iter) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        ++evals;
    }
    MinimizeResult out;
    if (f1 <= f2) {
        out.x = x1;
        out.value = f1;
    } else {
        out.x = x2;
        out.value = f2;
    }
    out.evaluations = evals;
    return out;
}

namespace {

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

Eigen::VectorXd project(const Eigen::VectorXd& x, const LeastSquaresOptions& o) {
    Eigen::VectorXd y = x;
    if (o.lower) y = y.cwiseMax(*o.lower);
    if (o.upper) y = y.cwiseMin(*o.upper);
    return y;
}

Eigen::MatrixXd forward_jacobian(const ResidualFunction& residual, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& r0, const LeastSquaresOptions& o) {
    Eigen::MatrixXd jac(r0.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        double h = o.relative_step * std::abs(x(j));
        if (h < o.absolute_step) h = o.absolute_step;
        Eigen::VectorXd xp = x;
        xp(j) += h;
        // Step backwards when the forward point violates the upper bound.
        if (o.upper && xp(j) > (*o.upper)(j)) {
            h = -h;
            xp(j) = x(j) + h;
        }
        Eigen::VectorXd rp = residual(xp);
        if (!all_finite(rp)) {
            h = -h;
            xp(j) = x(j) + h;
            rp = residual(xp);
        }
        jac.col(j) = (rp - r0) / h;
    }
    return jac;
}

}  // namespace

LeastSquaresResult levenberg_marquardt(const ResidualFunction& residual,
                                       const Eigen::VectorXd& x0,
                                       const LeastSquaresOptions& options) {
    LeastSquaresResult out;
    out.x = project(x0, options);
    out.residual = residual(out.x);
    if (!all_finite(out.residual)) {
        out.message = "residual not finite at the initial point";
        out.cost = std::numeric_limits<double>::infinity();
        return out;
    }
    out.cost = 0.5 * out.residual.squaredNorm();
    double lambda = options.initial_damping;
    const Eigen::Index n = out.x.size();

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        out.iterations = iter + 1;
        out.jacobian = forward_jacobian(residual, out.x, out.residual, options);
        const Eigen::MatrixXd jtj = out.jacobian.transpose() * out.jacobian;
        const Eigen::VectorXd grad = out.jacobian.transpose() * out.residual;
        if (grad.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
            out.converged = true;
            out.message = "gradient below tolerance";
            return out;
        }
        bool accepted = false;
        for (int inner = 0; inner < 40 && !accepted; ++inner) {
            Eigen::MatrixXd a = jtj;
            for (Eigen::Index k = 0; k < n; ++k) {
                a(k, k) += lambda * std::max(jtj(k, k), 1e-30);
            }
            const Eigen::VectorXd step = a.ldlt().solve(-grad);
            const Eigen::VectorXd trial = project(out.x + step, options);
            const Eigen::VectorXd r = residual(trial);
            const double cost = all_finite(r) ? 0.5 * r.squaredNorm()
                                              : std::numeric_limits<double>::infinity();
            if (cost < out.cost) {
                const double rel_decrease = (out.cost - cost) / std::max(out.cost, 1e-300);
                const double rel_step =
                    (trial - out.x).norm() / std::max(out.x.norm(), 1e-300);
                out.x = trial;
                out.residual = r;
                out.cost = cost;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (rel_step <= options.step_tolerance || rel_decrease <= options.cost_tolerance) {
                    out.jacobian = forward_jacobian(residual, out.x, out.residual, options);
                    out.converged = true;
                    out.message = "converged";
                    return out;
                }
            } else {
                lambda *= 4.0;
            }
        }
        if (!accepted) {
            // No damping level reduces the cost: we are at a (local) minimum to
            // numerical precision.
            out.converged = true;
            out.message = "no further decrease";
            return out;
        }
    }
    out.jacobian = forward_jacobian(residual, out.x, out.residual, options);
    out.message = "iteration cap reached";
    return out;
}

std::optional<Eigen::VectorXd> standard_errors(const Eigen::MatrixXd& jacobian,
                                               const Eigen::VectorXd& residual) {
    const Eigen::Index m = jacobian.rows();
    const Eigen::Index n = jacobian.cols();
    if (m <= n) return std::nullopt;
    const Eigen::MatrixXd jtj = jacobian.transpose() * jacobian;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) return std::nullopt;
    const double s2 = residual.squaredNorm() / static_cast<double>(m - n);
    const Eigen::MatrixXd cov = s2 * lu.inverse();
    Eigen::VectorXd se(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!(cov(k, k) >= 0.0)) return std::nullopt;
        se(k) = std::sqrt(cov(k, k));
    }
    return se;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    const std::size_t workers =
        std::min<std::size_t>(count, static_cast<std::size_t>(std::max(threads, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

double wrap_angle(double angle) {
    constexpr double pi = std::numbers::pi;
    double r = std::remainder(angle, 2.0 * pi);  // in [−π, π]
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

}  // namespace bbq::numeric
