#include "bbq/spectrum.hpp"

#include "bbq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bbq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<double> try_zz(const SystemModel& model, double bus_ghz) {
    try {
        return compute_zz(model, bus_ghz);
    } catch (const AmbiguousLabelingError&) {
        return std::nullopt;
    }
}

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

struct LabelingFailed {};

// Brent on [a, b] with labeling failures handled by narrowing: the interval is
// re-scanned on a finer grid and the first valid sign change is retried.
std::optional<double> solve_bracket(const SystemModel& model, double a, double fa, double b,
                                    double fb, const ZeroSearchOptions& options, int depth) {
    auto f = [&](double x) {
        auto v = try_zz(model, x);
        if (!v) throw LabelingFailed{};
        return *v;
    };
    numeric::RootOptions ro;
    ro.x_tolerance = 1e-12;
    ro.f_tolerance = 0.1 * options.zz_tolerance_mhz;
    try {
        const double root = numeric::brent_root(f, a, fa, b, fb, ro);
        const auto check = try_zz(model, root);
        if (check && std::abs(*check) < options.zz_tolerance_mhz) return root;
        return std::nullopt;  // converged onto a pole, not a zero
    } catch (const LabelingFailed&) {
        if (depth >= options.max_refinements) {
            throw NumericalError("ZZ labeling failed repeatedly inside bracket [" +
                                 std::to_string(a) + ", " + std::to_string(b) + "]");
        }
        const int n = 8;
        std::vector<std::optional<double>> vals(n + 1);
        std::vector<double> xs(n + 1);
        for (int k = 0; k <= n; ++k) {
            xs[k] = a + (b - a) * k / n;
            vals[k] = (k == 0) ? std::optional<double>(fa)
                               : (k == n ? std::optional<double>(fb) : try_zz(model, xs[k]));
        }
        for (int k = 0; k < n; ++k) {
            if (vals[k] && vals[k + 1] && (opposite(*vals[k], *vals[k + 1]) || *vals[k + 1] == 0.0)) {
                auto r = solve_bracket(model, xs[k], *vals[k], xs[k + 1], *vals[k + 1], options,
                                       depth + 1);
                if (r) return r;
            }
        }
        throw NumericalError("ZZ labeling failed inside bracket [" + std::to_string(a) + ", " +
                             std::to_string(b) + "] and no valid sub-bracket remains");
    }
}

}  // namespace

const std::vector<BareLabel>& computational_labels() {
    static const std::vector<BareLabel> labels{{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}};
    return labels;
}

const std::vector<BareLabel>& required_labels() {
    static const std::vector<BareLabel> labels{{0, 0, 0}, {0, 1, 0}, {1, 0, 0},
                                               {1, 1, 0}, {0, 0, 1}, {0, 0, 2}};
    return labels;
}

double SpectrumResult::energy(const BareLabel& label) const {
    auto it = assignment.find(label);
    if (it == assignment.end()) {
        throw ConfigError("label " + label.str() + " was not requested in the labeling");
    }
    return energies_ghz(it->second);
}

std::pair<std::map<BareLabel, int>, std::map<BareLabel, double>> assign_labels(
    const Eigen::MatrixXd& eigenvectors, const std::array<int, 3>& levels,
    const std::vector<BareLabel>& labels, double floor) {
    const Eigen::Index dim = eigenvectors.cols();
    std::vector<int> rows;
    rows.reserve(labels.size());
    for (const auto& l : labels) rows.push_back(basis_index(levels, l));

    std::vector<bool> used(static_cast<std::size_t>(dim), false);
    std::vector<bool> done(labels.size(), false);
    std::map<BareLabel, int> assignment;
    std::map<BareLabel, double> quality;
    for (std::size_t round = 0; round < labels.size(); ++round) {
        double best = -1.0;
        std::size_t best_label = 0;
        Eigen::Index best_col = -1;
        for (std::size_t li = 0; li < labels.size(); ++li) {
            if (done[li]) continue;
            for (Eigen::Index c = 0; c < dim; ++c) {
                if (used[static_cast<std::size_t>(c)]) continue;
                const double v = eigenvectors(rows[li], c);
                const double ov = v * v;
                if (ov > best) {
                    best = ov;
                    best_label = li;
                    best_col = c;
                }
            }
        }
        if (best < floor) {
            throw AmbiguousLabelingError(labels[best_label].str(), best);
        }
        done[best_label] = true;
        used[static_cast<std::size_t>(best_col)] = true;
        assignment[labels[best_label]] = static_cast<int>(best_col);
        quality[labels[best_label]] = best;
    }
    return {assignment, quality};
}

SpectrumResult diagonalize_and_label(const DeviceSpec& spec, double bus_frequency_ghz,
                                     const std::vector<BareLabel>& labels) {
    return diagonalize_and_label(SystemModel(spec), bus_frequency_ghz, labels);
}

SpectrumResult diagonalize_and_label(const SystemModel& model, double bus_frequency_ghz,
                                     const std::vector<BareLabel>& labels) {
    for (int l : model.levels()) {
        if (l < 3) throw DimensionError("ZZ labeling requires at least 3 levels on every mode");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(model.hamiltonian(bus_frequency_ghz));
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed at bus frequency " +
                             std::to_string(bus_frequency_ghz));
    }
    SpectrumResult out;
    out.energies_ghz = solver.eigenvalues() / kTwoPi;
    out.eigenvectors = solver.eigenvectors();
    auto [assignment, quality] = assign_labels(out.eigenvectors, model.levels(), labels);
    out.assignment = std::move(assignment);
    out.overlap_quality = std::move(quality);
    return out;
}

double compute_zz(const DeviceSpec& spec, double bus_frequency_ghz) {
    return compute_zz(SystemModel(spec), bus_frequency_ghz);
}

double compute_zz(const SystemModel& model, double bus_frequency_ghz) {
    const auto s = diagonalize_and_label(model, bus_frequency_ghz, computational_labels());
    const double zz = s.energy({1, 1, 0}) - s.energy({0, 1, 0}) - s.energy({1, 0, 0}) +
                      s.energy({0, 0, 0});
    return 1e3 * zz;
}

std::string to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::Q2Frequency: return "q2_frequency_ghz";
        case SweepParameter::BusFrequency: return "bus_frequency_ghz";
        case SweepParameter::Flux: return "flux_phi0";
    }
    return "?";
}

SweepParameter sweep_parameter_from_string(const std::string& name) {
    if (name == "q2_frequency_ghz") return SweepParameter::Q2Frequency;
    if (name == "bus_frequency_ghz") return SweepParameter::BusFrequency;
    if (name == "flux_phi0") return SweepParameter::Flux;
    throw ConfigError("unknown sweep parameter '" + name +
                      "' (expected q2_frequency_ghz, bus_frequency_ghz or flux_phi0)");
}

std::size_t ZZMap::index(std::size_t i, std::size_t j) const {
    if (axes.size() == 1) return i;
    return i * axes[1].values.size() + j;
}

ZZMap zz_sweep(const DeviceSpec& spec, const std::vector<SweepAxis>& axes, int threads) {
    spec.validate();
    if (axes.empty() || axes.size() > 2) {
        throw ConfigError("zz sweep needs one or two axes");
    }
    int bus_setters = 0;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        const auto& ax = axes[a];
        if (ax.values.empty()) {
            throw ConfigError("sweep axis " + std::to_string(a) + " (" + to_string(ax.parameter) +
                              ") has an empty grid");
        }
        for (std::size_t k = 0; k < ax.values.size(); ++k) {
            if (!std::isfinite(ax.values[k])) {
                throw ConfigError("sweep axis " + to_string(ax.parameter) + " value " +
                                  std::to_string(k) + " is not finite");
            }
            if (k > 0 && !(ax.values[k] > ax.values[k - 1])) {
                throw ConfigError("sweep axis " + to_string(ax.parameter) +
                                  " must be strictly increasing (index " + std::to_string(k) + ")");
            }
        }
        if (ax.parameter != SweepParameter::Q2Frequency) ++bus_setters;
        if (ax.parameter == SweepParameter::Flux && !spec.squid) {
            throw ConfigError("flux sweep requires device.squid");
        }
    }
    if (axes.size() == 2 && axes[0].parameter == axes[1].parameter) {
        throw ConfigError("sweep axes must use distinct parameters");
    }
    if (bus_setters > 1) {
        throw ConfigError("bus_frequency_ghz and flux_phi0 cannot both be swept");
    }

    ZZMap map;
    map.axes = axes;
    const std::size_t n0 = axes[0].values.size();
    const std::size_t n1 = axes.size() == 2 ? axes[1].values.size() : 1;
    map.zz_mhz.assign(n0 * n1, kNaN);
    map.mask.assign(n0 * n1, false);
    map.reasons.assign(n0 * n1, std::string());
    std::vector<char> masked(n0 * n1, 0);

    numeric::parallel_for(n0 * n1, threads, [&](std::size_t cell) {
        const std::size_t i = cell / n1;
        const std::size_t j = cell % n1;
        DeviceSpec local = spec;
        double bus = spec.mode(Mode::Bus).frequency_ghz;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const double v = axes[a].values[a == 0 ? i : j];
            switch (axes[a].parameter) {
                case SweepParameter::Q2Frequency: local.mode(Mode::Q2).frequency_ghz = v; break;
                case SweepParameter::BusFrequency: bus = v; break;
                case SweepParameter::Flux: bus = flux_to_frequency(*spec.squid, v); break;
            }
        }
        try {
            map.zz_mhz[cell] = compute_zz(local, bus);
        } catch (const AmbiguousLabelingError& e) {
            masked[cell] = 1;
            map.reasons[cell] = "ambiguous labeling: " + e.label();
        }
    });
    for (std::size_t c = 0; c < masked.size(); ++c) map.mask[c] = masked[c] != 0;
    return map;
}

double perturbative_j(const DeviceSpec& spec, double bus_frequency_ghz,
                      ExchangeApproximation approximation) {
    spec.validate();
    const double w1 = spec.mode(Mode::Q1).frequency_ghz;
    const double w2 = spec.mode(Mode::Q2).frequency_ghz;
    const double g1 = spec.coupling(Mode::Q1, Mode::Bus);
    const double g2 = spec.coupling(Mode::Q2, Mode::Bus);
    const double g12 = spec.coupling(Mode::Q1, Mode::Q2);
    const double d1 = w1 - bus_frequency_ghz;
    const double d2 = w2 - bus_frequency_ghz;
    if (d1 == 0.0 || d2 == 0.0) {
        throw ResonanceError("bus at " + std::to_string(bus_frequency_ghz) +
                             " GHz is resonant with a qubit");
    }
    double j_bus = 0.0;
    switch (approximation) {
        case ExchangeApproximation::Quoted:
            j_bus = g1 * g2 * (1.0 / d1 + 1.0 / d2);
            break;
        case ExchangeApproximation::SchriefferWolff: {
            const double s1 = w1 + bus_frequency_ghz;
            const double s2 = w2 + bus_frequency_ghz;
            if (s1 == 0.0 || s2 == 0.0) throw ResonanceError("zero sum frequency");
            j_bus = 0.5 * g1 * g2 * (1.0 / d1 + 1.0 / d2 - 1.0 / s1 - 1.0 / s2);
            break;
        }
    }
    return 1e3 * (j_bus + g12);
}

double find_zz_zero(const DeviceSpec& spec, double lo_ghz, double hi_ghz,
                    const ZeroSearchOptions& options) {
    if (!(lo_ghz < hi_ghz)) {
        throw ConfigError("bracket must satisfy lo < hi");
    }
    const SystemModel model(spec);
    const auto flo = try_zz(model, lo_ghz);
    const auto fhi = try_zz(model, hi_ghz);
    if (flo && std::abs(*flo) < options.zz_tolerance_mhz) return lo_ghz;
    if (fhi && std::abs(*fhi) < options.zz_tolerance_mhz) return hi_ghz;
    if (flo && fhi && opposite(*flo, *fhi)) {
        if (auto r = solve_bracket(model, lo_ghz, *flo, hi_ghz, *fhi, options, 0)) return *r;
    }
    const int n = std::max(options.scan_intervals, 2);
    std::vector<double> xs(n + 1);
    std::vector<std::optional<double>> vals(n + 1);
    for (int k = 0; k <= n; ++k) {
        xs[k] = lo_ghz + (hi_ghz - lo_ghz) * k / n;
        vals[k] = (k == 0) ? flo : (k == n ? fhi : try_zz(model, xs[k]));
    }
    for (int k = 0; k < n; ++k) {
        if (!vals[k] || !vals[k + 1]) continue;
        if (std::abs(*vals[k]) < options.zz_tolerance_mhz) return xs[k];
        if (opposite(*vals[k], *vals[k + 1])) {
            if (auto r = solve_bracket(model, xs[k], *vals[k], xs[k + 1], *vals[k + 1], options, 0)) {
                return *r;
            }
        }
    }
    throw BracketError("ZZ does not change sign on [" + std::to_string(lo_ghz) + ", " +
                       std::to_string(hi_ghz) + "] GHz");
}

ZZMinimum find_idle_point(const DeviceSpec& spec, double lo_ghz, double hi_ghz,
                          const ZeroSearchOptions& options) {
    try {
        const double root = find_zz_zero(spec, lo_ghz, hi_ghz, options);
        return {root, compute_zz(spec, root), true};
    } catch (const BracketError&) {
    }
    const SystemModel model(spec);
    const int n = 64;
    double best_x = lo_ghz;
    double best_v = std::numeric_limits<double>::infinity();
    int best_k = -1;
    for (int k = 0; k <= n; ++k) {
        const double x = lo_ghz + (hi_ghz - lo_ghz) * k / n;
        const auto v = try_zz(model, x);
        if (v && std::abs(*v) < best_v) {
            best_v = std::abs(*v);
            best_x = x;
            best_k = k;
        }
    }
    if (best_k < 0) throw NumericalError("ZZ labeling failed everywhere in the idle bracket");
    const double step = (hi_ghz - lo_ghz) / n;
    const double a = std::max(lo_ghz, best_x - step);
    const double b = std::min(hi_ghz, best_x + step);
    auto objective = [&](double x) {
        const auto v = try_zz(model, x);
        return v ? std::abs(*v) : std::numeric_limits<double>::infinity();
    };
    const auto m = numeric::golden_section_minimize(objective, a, b, 1e-7);
    const double x = m.value <= best_v ? m.x : best_x;
    return {x, compute_zz(model, x), false};
}

double flux_to_frequency(const SquidSpec& squid, double flux) {
    squid.validate();
    const double c = std::cos(std::numbers::pi * (flux - squid.flux_offset));
    const double d2 = squid.asymmetry * squid.asymmetry;
    return squid.f_max_ghz * std::pow(d2 + (1.0 - d2) * c * c, 0.25);
}

double inverse_flux(const SquidSpec& squid, double frequency_ghz, FluxBranch branch) {
    squid.validate();
    const double f_min = squid.f_max_ghz * std::sqrt(squid.asymmetry);
    const double slack = 1e-12 * squid.f_max_ghz;
    if (!(frequency_ghz >= f_min - slack && frequency_ghz <= squid.f_max_ghz + slack)) {
        throw RangeError("frequency " + std::to_string(frequency_ghz) +
                         " GHz outside the tunable range [" + std::to_string(f_min) + ", " +
                         std::to_string(squid.f_max_ghz) + "]");
    }
    const double d2 = squid.asymmetry * squid.asymmetry;
    double x = 0.0;
    if (d2 < 1.0) {
        const double r = frequency_ghz / squid.f_max_ghz;
        double c2 = (r * r * r * r - d2) / (1.0 - d2);
        c2 = std::clamp(c2, 0.0, 1.0);
        x = std::acos(std::sqrt(c2)) / std::numbers::pi;
    }
    return squid.flux_offset + (branch == FluxBranch::Positive ? x : -x);
}

FluxCurve zz_vs_flux(const DeviceSpec& spec, const std::vector<double>& flux, int threads) {
    if (!spec.squid) throw ConfigError("zz_vs_flux requires device.squid");
    spec.validate();
    const SystemModel model(spec);
    FluxCurve out;
    out.flux = flux;
    out.bus_frequency_ghz.resize(flux.size());
    out.zz_mhz.assign(flux.size(), kNaN);
    std::vector<char> masked(flux.size(), 0);
    numeric::parallel_for(flux.size(), threads, [&](std::size_t k) {
        const double fb = flux_to_frequency(*spec.squid, flux[k]);
        out.bus_frequency_ghz[k] = fb;
        auto v = try_zz(model, fb);
        if (v) out.zz_mhz[k] = *v; else masked[k] = 1;
    });
    out.mask.resize(flux.size());
    for (std::size_t k = 0; k < flux.size(); ++k) out.mask[k] = masked[k] != 0;
    return out;
}

DeviceSpec CouplingFit::apply(const DeviceSpec& initial) const {
    DeviceSpec out = initial;
    out.set_coupling(Mode::Q1, Mode::Bus, g_q1_bus_ghz);
    out.set_coupling(Mode::Q2, Mode::Bus, g_q2_bus_ghz);
    out.set_coupling(Mode::Q1, Mode::Q2, g_q1_q2_ghz);
    out.squid = squid;
    return out;
}

std::string to_string(FitWeighting w) {
    return w == FitWeighting::Absolute ? "absolute" : "relative";
}

FitWeighting fit_weighting_from_string(const std::string& name) {
    if (name == "absolute") return FitWeighting::Absolute;
    if (name == "relative") return FitWeighting::Relative;
    throw ConfigError("unknown fit weighting '" + name + "' (absolute, relative)");
}

CouplingFit fit_coupling_params(const std::vector<FluxZZPoint>& measured,
                                const DeviceSpec& initial, const CouplingFitOptions& options) {
    initial.validate();
    if (!initial.squid) throw ConfigError("coupling fit requires device.squid");
    if (measured.size() < 8) {
        throw ConfigError("coupling fit needs at least 8 data points, got " +
                          std::to_string(measured.size()));
    }
    for (std::size_t k = 0; k < measured.size(); ++k) {
        if (!std::isfinite(measured[k].flux) || !std::isfinite(measured[k].zz_mhz)) {
            throw ConfigError("data point " + std::to_string(k) + " is not finite");
        }
    }
    if (!(options.weight_floor_mhz > 0.0)) throw ConfigError("weight_floor_mhz must be positive");
    Eigen::VectorXd weight(static_cast<Eigen::Index>(measured.size()));
    for (std::size_t k = 0; k < measured.size(); ++k) {
        weight(static_cast<Eigen::Index>(k)) =
            options.weighting == FitWeighting::Relative
                ? 1.0 / std::max(std::abs(measured[k].zz_mhz), options.weight_floor_mhz)
                : 1.0;
    }
    const int n = options.fit_squid ? 6 : 3;
    Eigen::VectorXd x0(n);
    x0(0) = initial.coupling(Mode::Q1, Mode::Bus);
    x0(1) = initial.coupling(Mode::Q2, Mode::Bus);
    x0(2) = initial.coupling(Mode::Q1, Mode::Q2);
    if (options.fit_squid) {
        x0(3) = initial.squid->f_max_ghz;
        x0(4) = initial.squid->asymmetry;
        x0(5) = initial.squid->flux_offset;
    }
    auto unpack = [&](const Eigen::VectorXd& x) {
        CouplingFit fit;
        fit.g_q1_bus_ghz = x(0);
        fit.g_q2_bus_ghz = x(1);
        fit.g_q1_q2_ghz = x(2);
        fit.squid = *initial.squid;
        if (options.fit_squid) {
            fit.squid.f_max_ghz = x(3);
            fit.squid.asymmetry = x(4);
            fit.squid.flux_offset = x(5);
        }
        return fit;
    };
    auto residual = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(measured.size()));
        const DeviceSpec dev = unpack(x).apply(initial);
        try {
            dev.validate();
        } catch (const ConfigError&) {
            r.setConstant(kNaN);
            return r;
        }
        const SystemModel model(dev);
        for (std::size_t k = 0; k < measured.size(); ++k) {
            const double fb = flux_to_frequency(*dev.squid, measured[k].flux);
            const auto zz = try_zz(model, fb);
            const auto i = static_cast<Eigen::Index>(k);
            r(i) = zz ? (*zz - measured[k].zz_mhz) * weight(i) : kNaN;
        }
        return r;
    };
    numeric::LeastSquaresOptions solver = options.solver;
    if (options.fit_squid && !solver.lower) {
        Eigen::VectorXd lo(n), hi(n);
        const double inf = std::numeric_limits<double>::infinity();
        lo << -inf, -inf, -inf, 1e-6, 0.0, -inf;
        hi << inf, inf, inf, inf, 1.0, inf;
        solver.lower = lo;
        solver.upper = hi;
    }
    const auto result = numeric::levenberg_marquardt(residual, x0, solver);
    CouplingFit fit = unpack(result.x);
    fit.weighted_residual_norm = result.residual.allFinite() ? result.residual.norm() : kNaN;
    fit.residual_norm_mhz = result.residual.allFinite() ? result.residual.cwiseQuotient(weight).norm() : kNaN;
    fit.iterations = result.iterations;
    fit.parameter_names = {"g_q1_bus_ghz", "g_q2_bus_ghz", "g_q1_q2_ghz"};
    if (options.fit_squid) {
        fit.parameter_names.insert(fit.parameter_names.end(),
                                   {"f_max_ghz", "asymmetry", "flux_offset_phi0"});
    }
    if (result.jacobian.size() > 0) {
        if (auto se = numeric::standard_errors(result.jacobian, result.residual)) {
            fit.standard_errors.assign(se->data(), se->data() + se->size());
        }
    }
    if (!result.converged) {
        throw FitError("coupling fit did not converge: " + result.message, fit);
    }
    return fit;
}

}  // namespace bbq
