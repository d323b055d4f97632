#include "bbq/dynamics.hpp"

#include "bbq/errors.hpp"
#include "bbq/numeric.hpp"
#include "bbq/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

namespace bbq {

namespace {

using cd = std::complex<double>;

const PulseWaveform& require_detuning(const PulseWaveform& wf) {
    wf.validate();
    if (wf.kind != WaveformKind::Detuning) {
        throw ConfigError("propagation needs a detuning waveform; convert flux waveforms first");
    }
    return wf;
}

int substeps_per_sample(const PulseWaveform& wf, const PropagationConfig& cfg) {
    if (!(cfg.step_dt_ns > 0.0) || !std::isfinite(cfg.step_dt_ns)) {
        throw ConfigError("propagation.step_dt_ns must be positive");
    }
    const double dt = wf.times_ns[1] - wf.times_ns[0];
    if (cfg.step_dt_ns > dt * (1.0 + 1e-9)) {
        throw ConfigError("propagation.step_dt_ns (" + std::to_string(cfg.step_dt_ns) +
                          ") exceeds the waveform sample spacing (" + std::to_string(dt) + ")");
    }
    return std::max(1, static_cast<int>(std::ceil(dt / cfg.step_dt_ns - 1e-9)));
}

Eigen::MatrixXcd evolve_exponential(const SystemModel& model, const PulseWaveform& wf, int nsub,
                                    Eigen::MatrixXcd psi) {
    const double anchor = model.spec().mode(Mode::Q1).frequency_ghz;
    const double dt = wf.times_ns[1] - wf.times_ns[0];
    const double h = dt / nsub;
    double pending = std::numeric_limits<double>::quiet_NaN();
    long count = 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    auto flush = [&]() {
        if (count == 0) return;
        solver.compute(model.hamiltonian(pending));
        if (solver.info() != Eigen::Success) {
            throw IntegrationError("eigendecomposition failed at bus frequency " +
                                   std::to_string(pending));
        }
        const Eigen::MatrixXcd v = solver.eigenvectors().cast<cd>();
        const double tau = h * static_cast<double>(count);
        Eigen::VectorXcd phase(solver.eigenvalues().size());
        for (Eigen::Index k = 0; k < phase.size(); ++k) {
            phase(k) = std::polar(1.0, -solver.eigenvalues()(k) * tau);
        }
        psi = v * (phase.asDiagonal() * (v.adjoint() * psi));
        count = 0;
    };
    for (std::size_t k = 0; k + 1 < wf.values.size(); ++k) {
        const double v0 = wf.values[k];
        const double v1 = wf.values[k + 1];
        for (int j = 0; j < nsub; ++j) {
            const double fb = anchor - (v0 + (v1 - v0) * (j + 0.5) / nsub);
            if (count > 0 && fb != pending) flush();
            pending = fb;
            ++count;
        }
    }
    flush();
    return psi;
}

Eigen::MatrixXcd evolve_rk4(const SystemModel& model, const PulseWaveform& wf, int nsub,
                            Eigen::MatrixXcd psi) {
    const double anchor = model.spec().mode(Mode::Q1).frequency_ghz;
    const double dt = wf.times_ns[1] - wf.times_ns[0];
    const auto [lo_it, hi_it] = std::minmax_element(wf.values.begin(), wf.values.end());
    // Shift by the mean energy of the initial columns: the populated band then
    // sits near zero, where RK4's amplitude and phase errors are smallest. The
    // shift is a global phase restored at the end.
    const Eigen::MatrixXd h0 = model.hamiltonian(anchor - wf.values.front());
    std::vector<double> rq(static_cast<std::size_t>(psi.cols()));
    for (Eigen::Index c = 0; c < psi.cols(); ++c) {
        rq[static_cast<std::size_t>(c)] =
            (psi.col(c).adjoint() * h0.cast<cd>() * psi.col(c)).value().real() / psi.col(c).squaredNorm();
    }
    const auto [rq_lo, rq_hi] = std::minmax_element(rq.begin(), rq.end());
    const double centre = 0.5 * (*rq_lo + *rq_hi);
    double emin = std::numeric_limits<double>::infinity();
    double emax = -emin;
    for (double v : {*lo_it, *hi_it}) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s(model.hamiltonian(anchor - v),
                                                          Eigen::EigenvaluesOnly);
        emin = std::min(emin, s.eigenvalues().minCoeff());
        emax = std::max(emax, s.eigenvalues().maxCoeff());
    }
    // Stability over the whole spectrum, accuracy over the populated band
    // (widened by two excitations' worth of the detuning excursion plus 1 GHz).
    const double full = std::max(emax - centre, centre - emin);
    const double band = 0.5 * (*rq_hi - *rq_lo) + kTwoPi * (2.0 * (*hi_it - *lo_it) + 1.0);
    const double h_max = std::min(0.5 / full, 0.05 / band);
    const int inner = std::max(1, static_cast<int>(std::ceil(dt / nsub / h_max)));
    const int steps = nsub * inner;
    const double h = dt / steps;

    const Eigen::MatrixXd fixed =
        model.hamiltonian(0.0) - centre * Eigen::MatrixXd::Identity(model.dimension(), model.dimension());
    const Eigen::VectorXd nbus = kTwoPi * model.bus_number();
    const cd minus_i(0.0, -1.0);
    auto deriv = [&](double fb, const Eigen::MatrixXcd& y) -> Eigen::MatrixXcd {
        Eigen::MatrixXcd hy = fixed.cast<cd>() * y;
        hy += (fb * nbus).cast<cd>().asDiagonal() * y;
        return minus_i * hy;
    };
    for (std::size_t k = 0; k + 1 < wf.values.size(); ++k) {
        const double v0 = wf.values[k];
        const double v1 = wf.values[k + 1];
        auto fb_at = [&](double frac) { return anchor - (v0 + (v1 - v0) * frac); };
        for (int j = 0; j < steps; ++j) {
            const double f0 = fb_at(static_cast<double>(j) / steps);
            const double fm = fb_at((j + 0.5) / steps);
            const double f1 = fb_at(static_cast<double>(j + 1) / steps);
            const Eigen::MatrixXcd k1 = deriv(f0, psi);
            const Eigen::MatrixXcd k2 = deriv(fm, psi + 0.5 * h * k1);
            const Eigen::MatrixXcd k3 = deriv(fm, psi + 0.5 * h * k2);
            const Eigen::MatrixXcd k4 = deriv(f1, psi + h * k3);
            psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    return psi * std::polar(1.0, -centre * wf.duration_ns());
}

double wrap(double x) { return numeric::wrap_angle(x); }

}  // namespace

std::string to_string(Integrator method) {
    return method == Integrator::PiecewiseExponential ? "piecewise-exponential" : "rk4";
}

Integrator integrator_from_string(const std::string& name) {
    if (name == "piecewise-exponential") return Integrator::PiecewiseExponential;
    if (name == "rk4") return Integrator::RK4;
    throw ConfigError("unknown propagation.method '" + name +
                      "' (expected piecewise-exponential or rk4)");
}

double bus_frequency_for(const DeviceSpec& spec, double detuning_ghz) {
    return spec.mode(Mode::Q1).frequency_ghz - detuning_ghz;
}

Eigen::MatrixXcd propagate_states(const SystemModel& model, const PulseWaveform& wf,
                                  const PropagationConfig& cfg, const Eigen::MatrixXcd& initial) {
    require_detuning(wf);
    if (initial.rows() != model.dimension()) {
        throw DimensionError("initial states have " + std::to_string(initial.rows()) +
                             " rows, model dimension is " + std::to_string(model.dimension()));
    }
    if (wf.values.size() < 2) return initial;
    const int nsub = substeps_per_sample(wf, cfg);
    Eigen::MatrixXcd out = cfg.method == Integrator::PiecewiseExponential
                               ? evolve_exponential(model, wf, nsub, initial)
                               : evolve_rk4(model, wf, nsub, initial);
    const Eigen::MatrixXcd g0 = initial.adjoint() * initial;
    const Eigen::MatrixXcd g1 = out.adjoint() * out;
    const double drift = (g1 - g0).cwiseAbs().maxCoeff();
    if (!(drift <= 1e-6)) {
        throw IntegrationError("norm drift " + std::to_string(drift) +
                               " exceeds 1e-6; reduce propagation.step_dt_ns");
    }
    return out;
}

Eigen::MatrixXcd propagate(const DeviceSpec& spec, const PulseWaveform& wf,
                           const PropagationConfig& cfg) {
    const SystemModel model(spec);
    require_detuning(wf);
    dressed_computational_basis(model, bus_frequency_for(spec, wf.values.front()));
    const int d = model.dimension();
    return propagate_states(model, wf, cfg, Eigen::MatrixXcd::Identity(d, d));
}

double unitarity_error(const Eigen::MatrixXcd& u) {
    const Eigen::MatrixXcd g = u.adjoint() * u;
    return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

DressedBasis dressed_computational_basis(const SystemModel& model, double bus_frequency_ghz) {
    const auto s = diagonalize_and_label(model, bus_frequency_ghz, computational_labels());
    DressedBasis out;
    out.vectors.resize(model.dimension(), 4);
    const auto& labels = computational_labels();  // 00, 01, 10, 11
    for (int i = 0; i < 4; ++i) {
        const int col = s.assignment.at(labels[static_cast<std::size_t>(i)]);
        Eigen::VectorXd v = s.eigenvectors.col(col);
        if (v(basis_index(model.levels(), labels[static_cast<std::size_t>(i)])) < 0.0) v = -v;
        out.vectors.col(i) = v;
        out.energies_rad_per_ns[static_cast<std::size_t>(i)] = kTwoPi * s.energies_ghz(col);
    }
    return out;
}

double GateReport::transition_probability(int out, int in) const {
    return std::norm(frame_operator(out, in));
}

double cz_fidelity(const Eigen::Matrix4cd& m) {
    const Eigen::Vector4d u(1.0, 1.0, 1.0, -1.0);
    cd tr = 0.0;
    for (int i = 0; i < 4; ++i) tr += std::conj(m(i, i)) * u(i);
    return (std::norm(tr) + m.squaredNorm()) / 20.0;
}

GateReport gate_report(const DeviceSpec& spec, const PulseWaveform& wf,
                       const PropagationConfig& cfg) {
    require_detuning(wf);
    const SystemModel model(spec);
    const DressedBasis basis =
        dressed_computational_basis(model, bus_frequency_for(spec, wf.values.front()));
    const Eigen::MatrixXcd v = basis.vectors.cast<cd>();
    const Eigen::MatrixXcd psi = propagate_states(model, wf, cfg, v);
    Eigen::Matrix4cd m = v.adjoint() * psi;

    const double t = wf.duration_ns();
    const auto& e = basis.energies_rad_per_ns;
    const std::array<double, 4> ref{e[0], e[1], e[2], e[1] + e[2] - e[0]};
    for (int i = 0; i < 4; ++i) m.row(i) *= std::polar(1.0, ref[static_cast<std::size_t>(i)] * t);

    GateReport r;
    r.duration_ns = t;
    r.frame_operator = m;
    for (int i = 0; i < 4; ++i) r.phases[static_cast<std::size_t>(i)] = std::arg(m(i, i));
    const auto& p = r.phases;
    r.cz_angle = wrap(p[3] - p[2] - p[1] + p[0]);
    r.iswap_angle = std::asin(std::min(1.0, std::abs(m(1, 2))));
    r.leakage = std::clamp(1.0 - m.squaredNorm() / 4.0, 0.0, 1.0);
    r.virtual_z = {wrap(p[2] - p[0]), wrap(p[1] - p[0])};
    const double z1 = r.virtual_z[0];
    const double z2 = r.virtual_z[1];
    const Eigen::Vector4cd corr(std::polar(1.0, -p[0]), std::polar(1.0, -p[0] - z2),
                                std::polar(1.0, -p[0] - z1), std::polar(1.0, -p[0] - z1 - z2));
    r.projected = corr.asDiagonal() * m;
    r.fidelity = std::clamp(cz_fidelity(r.projected), 0.0, 1.0);
    return r;
}

PulseParams scaled_pulse(const PulseParams& base, double scale) {
    PulseParams p = base;
    p.delta2_ghz = base.delta1_ghz - scale * (base.delta1_ghz - base.delta2_ghz);
    p.validate();
    return p;
}

namespace {

PulseWaveform build_waveform(const PulseParams& p, std::optional<double> delay_ns) {
    return delay_ns ? compose_double_pulse(p, *delay_ns) : sample_pulse(p);
}

}  // namespace

std::vector<AmplitudePoint> amplitude_scan(const DeviceSpec& spec, const PulseParams& base,
                                           const std::vector<double>& scales,
                                           const PropagationConfig& cfg, int threads,
                                           std::optional<double> delay_ns) {
    spec.validate();
    base.validate();
    for (std::size_t k = 0; k < scales.size(); ++k) {
        if (!(scales[k] >= 0.0 && scales[k] <= 1.5)) {
            throw ConfigError("amplitude scale " + std::to_string(k) + " outside [0, 1.5]");
        }
    }
    std::vector<AmplitudePoint> out(scales.size());
    numeric::parallel_for(scales.size(), threads, [&](std::size_t k) {
        AmplitudePoint& pt = out[k];
        pt.scale = scales[k];
        try {
            const auto rep = gate_report(spec, build_waveform(scaled_pulse(base, scales[k]), delay_ns), cfg);
            pt.phase_control0 = wrap(rep.phases[1] - rep.phases[0]);
            pt.phase_control1 = wrap(rep.phases[3] - rep.phases[2]);
            pt.cz_angle = rep.cz_angle;
            pt.leakage = rep.leakage;
            pt.ok = true;
        } catch (const Error& e) {
            pt.error = e.what();
        }
    });
    return out;
}

CzCalibration calibrate_cz(const DeviceSpec& spec, const PulseParams& base,
                           const PropagationConfig& cfg, const CalibrationOptions& opts) {
    spec.validate();
    base.validate();
    if (!(opts.scale_lo >= 0.0 && opts.scale_hi > opts.scale_lo) || opts.scan_points < 2) {
        throw ConfigError("calibration scale range must satisfy 0 <= lo < hi with >= 2 scan points");
    }
    auto cz_at = [&](double s) {
        return gate_report(spec, build_waveform(scaled_pulse(base, s), opts.delay_ns), cfg).cz_angle;
    };

    const int n = opts.scan_points;
    std::vector<double> s(static_cast<std::size_t>(n) + 1), cz(s.size());
    std::vector<char> ok(s.size(), 0);
    for (int k = 0; k <= n; ++k) s[static_cast<std::size_t>(k)] = opts.scale_lo + (opts.scale_hi - opts.scale_lo) * k / n;
    numeric::parallel_for(s.size(), opts.threads, [&](std::size_t k) {
        try {
            cz[k] = cz_at(s[k]);
            ok[k] = 1;
        } catch (const ConfigError&) {
        } catch (const NumericalError&) {
        }
    });

    // Walk the scan, bisecting any interval whose wrapped phase step exceeds
    // π/2, unwrap, and stop at the first odd multiple of π.
    if (!ok[0]) {
        throw CalibrationError("cz_angle could not be evaluated at scale " + std::to_string(s[0]));
    }
    struct Sample {
        double s;
        double cz;
    };
    std::vector<Sample> walk{{s[0], cz[0]}};
    std::function<void(Sample, Sample, int)> refine = [&](Sample a, Sample b, int depth) {
        if (std::abs(wrap(b.cz - a.cz)) <= 0.5 * M_PI) {
            walk.push_back(b);
            return;
        }
        if (depth >= 20) {
            throw CalibrationError("cz_angle jumps between scales " + std::to_string(a.s) + " and " +
                                   std::to_string(b.s) + " even after refinement");
        }
        const double mid = 0.5 * (a.s + b.s);
        const Sample m{mid, cz_at(mid)};
        refine(a, m, depth + 1);
        refine(m, b, depth + 1);
    };
    std::optional<std::size_t> bracket;
    double target = 0.0;
    double ua = 0.0, ub = 0.0;
    double u_prev = cz[0];
    std::size_t checked = 0;
    for (std::size_t k = 1; k < s.size() && ok[k] && !bracket; ++k) {
        refine(walk.back(), {s[k], cz[k]}, 0);
        for (; checked + 1 < walk.size(); ++checked) {
            const double u = u_prev + wrap(walk[checked + 1].cz - walk[checked].cz);
            const double q0 = std::floor((u_prev - M_PI) / kTwoPi);
            const double q1 = std::floor((u - M_PI) / kTwoPi);
            if (q0 != q1) {
                target = M_PI + kTwoPi * std::max(q0, q1);
                ua = u_prev;
                ub = u;
                bracket = checked;
                break;
            }
            u_prev = u;
        }
    }
    if (!bracket) {
        throw CalibrationError("cz_angle = pi is not bracketed for amplitude scales in [" +
                               std::to_string(opts.scale_lo) + ", " + std::to_string(opts.scale_hi) + "]");
    }
    const double sa = walk[*bracket].s;
    const double sb = walk[*bracket + 1].s;
    double root;
    if (ua - target == 0.0) {
        root = sa;
    } else {
        numeric::RootOptions ro;
        ro.x_tolerance = 1e-10;
        ro.f_tolerance = 0.0;
        ro.max_iterations = 100;
        root = numeric::brent_root([&](double x) { return wrap(cz_at(x) - M_PI); }, sa,
                                   ua - target, sb, ub - target, ro);
    }
    CzCalibration out;
    out.scale = root;
    out.params = scaled_pulse(base, root);
    out.report = gate_report(spec, build_waveform(out.params, opts.delay_ns), cfg);
    const double miss = std::abs(wrap(out.report.cz_angle - M_PI));
    if (!(miss <= opts.tolerance_rad)) {
        throw CalibrationError("calibrated cz_angle misses pi by " + std::to_string(miss) + " rad");
    }
    return out;
}

std::vector<DelayPoint> delay_scan(const DeviceSpec& spec, const PulseParams& single,
                                   const std::vector<double>& delays_ns,
                                   const PropagationConfig& cfg, int threads) {
    spec.validate();
    single.validate();
    for (std::size_t k = 0; k < delays_ns.size(); ++k) {
        if (!(delays_ns[k] >= 0.0) || !std::isfinite(delays_ns[k])) {
            throw ConfigError("delay " + std::to_string(k) + " must be finite and >= 0");
        }
    }
    std::vector<DelayPoint> out(delays_ns.size());
    numeric::parallel_for(delays_ns.size(), threads, [&](std::size_t k) {
        DelayPoint& pt = out[k];
        try {
            const PulseWaveform wf = compose_double_pulse(single, delays_ns[k]);
            pt.delay_ns = wf.delay_ns;
            const GateReport rep = gate_report(spec, wf, cfg);
            for (int j = 0; j < 4; ++j) {
                pt.p_excited_q1[static_cast<std::size_t>(j)] =
                    rep.transition_probability(2, j) + rep.transition_probability(3, j);
            }
            pt.swap_01_to_10 = rep.transition_probability(2, 1);
            pt.swap_10_to_01 = rep.transition_probability(1, 2);
            pt.cz_angle = rep.cz_angle;
            pt.iswap_angle = rep.iswap_angle;
            pt.leakage = rep.leakage;
            pt.ok = true;
        } catch (const Error& e) {
            pt.delay_ns = delays_ns[k];
            pt.error = e.what();
        }
    });
    return out;
}

DelayCalibration calibrate_delay(const DeviceSpec& spec, const PulseParams& single,
                                 double delay_lo_ns, double delay_hi_ns,
                                 const PropagationConfig& cfg, const DelayCalibrationOptions& opts) {
    if (!(delay_lo_ns >= 0.0 && delay_hi_ns > delay_lo_ns)) {
        throw ConfigError("delay bracket must satisfy 0 <= lo < hi");
    }
    single.validate();
    const double dt = single.sample_dt_ns;
    const int threads = opts.cz.threads;
    PulseParams params = single;
    double lo = delay_lo_ns;
    double hi = delay_hi_ns;
    double best_delay = lo;
    double best_iswap = std::numeric_limits<double>::infinity();

    for (int round = 1; round <= opts.max_rounds; ++round) {
        auto iswap_at = [&](double d) {
            const auto pts = delay_scan(spec, params, {d}, cfg, 1);
            return pts[0].ok ? pts[0].iswap_angle : std::numeric_limits<double>::infinity();
        };
        const int n = std::max(opts.scan_points, 4);
        std::vector<double> grid(static_cast<std::size_t>(n) + 1);
        for (int k = 0; k <= n; ++k) grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / n;
        const auto pts = delay_scan(spec, params, grid, cfg, threads);
        std::size_t b = pts.size();
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (pts[k].ok && (b == pts.size() || pts[k].iswap_angle < pts[b].iswap_angle)) b = k;
        }
        if (b == pts.size()) throw CalibrationError("delay scan failed at every point");
        const double a = grid[b == 0 ? 0 : b - 1];
        const double c = grid[std::min(b + 1, grid.size() - 1)];
        const auto m = numeric::golden_section_minimize(iswap_at, a, c, 0.5 * dt);
        // Delays live on the sample grid; settle on the best nearby grid point.
        const double centre = std::round(m.x / dt) * dt;
        double d_best = grid[b];
        double v_best = pts[b].iswap_angle;
        for (int j = -2; j <= 2; ++j) {
            const double d = centre + j * dt;
            if (d < 0.0) continue;
            const double v = iswap_at(d);
            if (v < v_best) {
                v_best = v;
                d_best = d;
            }
        }
        best_delay = std::round(d_best / dt) * dt;

        CalibrationOptions co = opts.cz;
        co.delay_ns = best_delay;
        const CzCalibration cal = calibrate_cz(spec, params, cfg, co);
        params = cal.params;
        best_iswap = cal.report.iswap_angle;
        if (best_iswap < opts.iswap_tolerance_rad) {
            DelayCalibration out;
            out.delay_ns = best_delay;
            out.params = params;
            out.report = cal.report;
            out.rounds = round;
            return out;
        }
        const double half = std::max(4.0 * dt, 2.0 * (hi - lo) / n);
        lo = std::max(0.0, best_delay - half);
        hi = best_delay + half;
    }
    throw CalibrationError("iswap_angle " + std::to_string(best_iswap) + " rad at delay " +
                           std::to_string(best_delay) + " ns is above " +
                           std::to_string(opts.iswap_tolerance_rad) + " after " +
                           std::to_string(opts.max_rounds) + " rounds");
}

}  // namespace bbq
