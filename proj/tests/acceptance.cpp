// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include "bbq/cli.hpp"
#include "bbq/clifford.hpp"
#include "bbq/dynamics.hpp"
#include "bbq/errors.hpp"
#include "bbq/io.hpp"
#include "bbq/presets.hpp"
#include "bbq/pulse.hpp"
#include "bbq/rb.hpp"
#include "bbq/spectrum.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace bbq;

namespace {

constexpr double kPi = std::numbers::pi;

// Pinned tolerances.
constexpr double kBbqWindowLo = 2.5, kBbqWindowHi = 3.5;   // GHz
constexpr double kBaqWindowLo = 6.0, kBaqWindowHi = 8.0;   // GHz
constexpr double kOnThresholdMhz = 10.0;
constexpr double kDipFraction = 0.5;          // BAQ |ZZ| must fall below this share of its running max
constexpr double kShapeRelTol = 1e-3;
constexpr double kCzAngleTol = 1e-3;          // rad
constexpr double kLeakageMax = 1e-3;
constexpr double kIswapMax = 0.05;            // rad
constexpr double kFidelityMin = 0.999;
constexpr double kStepHalvingTol = 1e-4;      // rad
constexpr double kCompression = 0.5;
constexpr double kLeakageRatioMin = 10.0;
constexpr double kSwapNearZeroMin = 0.9;
constexpr double kSwapCancelMax = 1e-2;
constexpr double kPeriodRelTol = 0.1;
constexpr double kDelayIswapMax = 0.01;       // rad
constexpr double kNonZLo = 3.0, kNonZHi = 3.5;
constexpr double kRbRelTol = 0.10;
constexpr double kFitRelTol = 0.05;
constexpr double kFitNoise = 0.02;
constexpr int kFitSeeds = 20;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Outcome zero_flip() {
    Outcome o{true, ""};
    for (double det : {0.09, 0.15, 0.20}) {
        try {
            const double below = find_zz_zero(presets::bbq(det), kBbqWindowLo, kBbqWindowHi);
            const double above = find_zz_zero(presets::baq(det), kBaqWindowLo, kBaqWindowHi);
            const bool ok = below >= kBbqWindowLo && below <= kBbqWindowHi && above >= kBaqWindowLo &&
                            above <= kBaqWindowHi;
            o.pass = o.pass && ok;
            o.detail += "det " + num(det * 1e3) + " MHz: BBQ " + num(below) + " GHz, BAQ " + num(above) + " GHz; ";
        } catch (const Error& e) {
            o.pass = false;
            o.detail += "det " + num(det * 1e3) + " MHz: " + e.what() + "; ";
        }
    }
    // Outside the straddling regime the windows hold no sign change; reported only.
    for (double det : {0.3, 0.4}) {
        try {
            find_zz_zero(presets::bbq(det), kBbqWindowLo, kBbqWindowHi);
            o.detail += "det " + num(det * 1e3) + " MHz: BBQ root found; ";
        } catch (const BracketError&) {
            o.detail += "det " + num(det * 1e3) + " MHz: no sign change (info); ";
        }
    }
    return o;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
    return v;
}

Outcome on_off_contrast() {
    Outcome o;
    // BBQ: from the operating zero toward the qubits.
    const DeviceSpec bbq = presets::bbq(0.09);
    const auto grid = linspace(kBbqWindowLo, kBbqWindowHi, 201);
    const auto lo_map = zz_sweep(bbq, {{SweepParameter::BusFrequency, grid}}, 4);
    double zero = NAN;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        if (!lo_map.mask[k] && !lo_map.mask[k - 1] && lo_map.zz_mhz[k - 1] * lo_map.zz_mhz[k] <= 0.0) {
            // Tight tolerance: ZZ is shallow here, so a 1 kHz stop lands MHz away from the sign change.
            ZeroSearchOptions tight;
            tight.zz_tolerance_mhz = 1e-7;
            zero = find_zz_zero(bbq, grid[k - 1], grid[k], tight);  // keep the uppermost
        }
    }
    if (std::isnan(zero)) return {false, "BBQ sweep has no zero"};
    const auto up = linspace(zero + 1e-3, bbq.mode(Mode::Q2).frequency_ghz - 0.05, 400);
    const auto up_map = zz_sweep(bbq, {{SweepParameter::BusFrequency, up}}, 4);
    bool bbq_ok = false, monotone = true;
    double on_bus = NAN;
    for (std::size_t k = 0; k < up.size(); ++k) {
        if (up_map.mask[k]) {
            monotone = false;
            break;
        }
        if (k > 0 && !(std::abs(up_map.zz_mhz[k]) > std::abs(up_map.zz_mhz[k - 1]))) monotone = false;
        if (k > 0 && up_map.zz_mhz[k] * up_map.zz_mhz[0] < 0.0) monotone = false;
        if (std::abs(up_map.zz_mhz[k]) > kOnThresholdMhz) {
            on_bus = up[k];
            bbq_ok = true;
            break;
        }
    }
    bbq_ok = bbq_ok && monotone;

    // BAQ: from the far-detuned zero down toward the qubits, until ZZ is on.
    const DeviceSpec baq = presets::baq(0.09);
    const double baq_zero = find_zz_zero(baq, kBaqWindowLo, kBaqWindowHi);
    // Sweep axes must increase, so the grid runs upward and is walked in reverse.
    const auto down = linspace(baq.mode(Mode::Q1).frequency_ghz + 0.005, baq_zero, 800);
    const auto down_map = zz_sweep(baq, {{SweepParameter::BusFrequency, down}}, 4);
    double running_max = 0.0, dip_at = NAN, baq_on = NAN;
    bool dip = false;
    for (std::size_t k = down.size(); k-- > 0;) {
        const double z = down_map.mask[k] ? NAN : std::abs(down_map.zz_mhz[k]);
        if (std::isnan(z)) {
            if (running_max > 0.0 && !dip) {
                dip = true;  // anti-crossing too narrow to label: the dip itself
                dip_at = down[k];
            }
            continue;
        }
        if (z > kOnThresholdMhz) {
            baq_on = down[k];
            break;
        }
        if (!dip && running_max > 1.0 && z < kDipFraction * running_max) {
            dip = true;
            dip_at = down[k];
        }
        running_max = std::max(running_max, z);
    }
    const bool baq_ok = dip && !std::isnan(baq_on);
    o.pass = bbq_ok && baq_ok;
    o.detail = "BBQ zero " + num(zero) + " GHz, |ZZ|>10 MHz at " + num(on_bus) + " GHz, monotone " +
               (monotone ? "yes" : "no") + "; BAQ max " + num(running_max) + " MHz, dip at " + num(dip_at) +
               " GHz, on at " + num(baq_on) + " GHz";
    return o;
}

Outcome pulse_contract() {
    PulseParams p = presets::pair1_pulse();
    const double l = p.half_length_ns;
    const bool exact = adiabatic_shape(p, -l) == p.delta1_ghz && adiabatic_shape(p, l) == p.delta1_ghz &&
                       adiabatic_shape(p, 0.0) == p.delta2_ghz;
    p.sample_dt_ns = 1e-3;
    const auto wf = sample_pulse(p);
    const double c = shape_rate_constant(p);
    double worst = 0.0;
    const double h = p.sample_dt_ns;
    for (std::size_t k = 1; k + 1 < wf.values.size(); ++k) {
        const double t = wf.times_ns[k];
        if (std::abs(t) < 0.5) continue;  // ratio of two vanishing quantities at t = 0
        const double rate = (quantization_angle(wf.values[k + 1], p.g_eff_ghz) -
                             quantization_angle(wf.values[k - 1], p.g_eff_ghz)) / (2 * h);
        worst = std::max(worst, std::abs(rate / (c * std::atan(p.turn_rate_per_ns * t)) - 1.0));
    }
    return {exact && worst < kShapeRelTol,
            std::string("endpoints exact: ") + (exact ? "yes" : "no") + ", max rel dev " + num(worst)};
}

struct Calibrated {
    CzCalibration cal;
    double halving = 0.0;
};

Calibrated calibrate_at(double half_length_ns) {
    PulseParams p = presets::pair1_pulse();
    p.half_length_ns = half_length_ns;
    CalibrationOptions opt;
    opt.threads = 4;
    Calibrated out{calibrate_cz(presets::pair1_like(), p, {}, opt), 0.0};
    PropagationConfig half;
    half.step_dt_ns = 0.5 * p.sample_dt_ns;
    const auto fine = gate_report(presets::pair1_like(), sample_pulse(out.cal.params), half);
    out.halving = std::abs(std::remainder(fine.cz_angle - out.cal.report.cz_angle, 2 * kPi));
    return out;
}

Outcome cz_quality(Calibrated& at60) {
    Outcome o{true, ""};
    for (double l : {23.0, 30.0, 35.0}) {
        Calibrated c = l == 30.0 ? at60 : calibrate_at(l);
        const auto& r = c.cal.report;
        const bool ok = std::abs(std::abs(r.cz_angle) - kPi) < kCzAngleTol && r.leakage < kLeakageMax &&
                        r.iswap_angle < kIswapMax && r.fidelity > kFidelityMin && c.halving < kStepHalvingTol;
        o.pass = o.pass && ok;
        o.detail += num(2 * l) + " ns: cz " + num(r.cz_angle) + ", leak " + num(r.leakage) + ", iswap " +
                    num(r.iswap_angle) + ", F " + num(r.fidelity) + ", dcz(dt/2) " + num(c.halving) + "; ";
    }
    return o;
}

Outcome adiabaticity(const Calibrated& at60) {
    PulseParams p = at60.cal.params;
    p.half_length_ns *= kCompression;
    const auto r = gate_report(presets::pair1_like(), sample_pulse(p));
    const double ratio = r.leakage / at60.cal.report.leakage;
    return {ratio >= kLeakageRatioMin, "leakage " + num(at60.cal.report.leakage) + " -> " + num(r.leakage) +
                                           " at " + num(2 * p.half_length_ns) + " ns (x" + num(ratio) + ")"};
}

Outcome double_pulse() {
    const DeviceSpec dev = presets::pair8_like();
    const PulseParams p = presets::pair8_pulse();
    const auto delays = linspace(0.0, 120.0, 49);
    const auto pts = delay_scan(dev, p, delays, {}, 4);
    for (const auto& d : pts) {
        if (!d.ok) return {false, "delay " + num(d.delay_ns) + ": " + d.error};
    }
    const double at_zero = std::min(pts.front().swap_01_to_10, pts.front().swap_10_to_01);
    double cancel_at = NAN;
    for (const auto& d : pts) {
        if (std::max(d.swap_01_to_10, d.swap_10_to_01) < kSwapCancelMax) {
            cancel_at = d.delay_ns;
            break;
        }
    }
    // Oscillation period from a wider scan against the dressed 01/10 splitting.
    const auto wide = delay_scan(dev, p, linspace(0.0, 240.0, 97), {}, 4);
    auto residual = [&](double f) {
        Eigen::MatrixXd a(static_cast<Eigen::Index>(wide.size()), 3);
        Eigen::VectorXd y(a.rows());
        for (Eigen::Index k = 0; k < a.rows(); ++k) {
            const double tau = wide[static_cast<std::size_t>(k)].delay_ns;
            a.row(k) << 1.0, std::cos(2 * kPi * f * tau), std::sin(2 * kPi * f * tau);
            y(k) = wide[static_cast<std::size_t>(k)].swap_10_to_01;
        }
        const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
        return (a * c - y).squaredNorm();
    };
    double best_f = 0.0, best = INFINITY;
    for (double f = 0.002; f < 0.03; f += 1e-5) {
        const double r = residual(f);
        if (r < best) {
            best = r;
            best_f = f;
        }
    }
    const auto s = diagonalize_and_label(dev, bus_frequency_for(dev, p.delta1_ghz));
    const double split = std::abs(s.energy({1, 0, 0}) - s.energy({0, 1, 0}));
    const bool period_ok = std::abs(best_f / split - 1.0) < kPeriodRelTol;

    DelayCalibrationOptions opt;
    opt.cz.threads = 4;
    const auto cal = calibrate_delay(dev, p, delays.front(), delays.back(), {}, opt);
    const bool cal_ok = cal.report.iswap_angle < kDelayIswapMax &&
                        std::abs(std::abs(cal.report.cz_angle) - kPi) < kCzAngleTol;
    const bool ok = at_zero > kSwapNearZeroMin && !std::isnan(cancel_at) && period_ok && cal_ok;
    return {ok, "swap(0) " + num(at_zero) + ", first swap < 1e-2 at " + num(cancel_at) + " ns, period " +
                    num(1.0 / best_f) + " ns vs 1/splitting " + num(1.0 / split) + " ns; calibrated delay " +
                    num(cal.delay_ns) + " ns, iswap " + num(cal.report.iswap_angle) + ", cz " +
                    num(cal.report.cz_angle)};
}

Outcome clifford_accounting() {
    const auto s = decomposition_stats();
    const bool ok = s.size == 11520 && s.avg_cz == 1.5 && s.avg_non_z_1q >= kNonZLo && s.avg_non_z_1q <= kNonZHi;
    return {ok, "size " + std::to_string(s.size) + ", avg CZ " + num(s.avg_cz) + ", avg non-Z " + num(s.avg_non_z_1q)};
}

Outcome rb_round_trip() {
    Outcome o{true, ""};
    RBConfig cfg;
    cfg.depths = {1, 10, 25, 50, 100, 200, 300, 500};
    cfg.sequences_per_depth = 30;
    cfg.seed = 20211;
    cfg.threads = 4;
    for (double eps : {0.0015, 0.005}) {
        const auto r = simulate_irb(NoiseModel::depolarizing(eps), cfg);
        const double epg_dev = std::abs(r.epg / eps - 1.0);
        const double epc_dev = std::abs(r.reference.epc / (1.5 * eps) - 1.0);
        o.pass = o.pass && epg_dev < kRbRelTol && epc_dev < kRbRelTol;
        o.detail += "eps " + num(eps) + ": EPG " + num(r.epg) + ", EPC " + num(r.reference.epc) + "; ";
    }
    const double bound = epg_bound(0.0029, 1.5);
    const bool table = std::round(bound * 1e4) / 1e4 == 0.0019;
    o.pass = o.pass && table;
    o.detail += "0.0029/1.5 = " + num(bound);
    return o;
}

Outcome fit_recovery() {
    const DeviceSpec truth = presets::pair1_like();
    const auto flux = linspace(0.0, 0.5, 26);
    const auto curve = zz_vs_flux(truth, flux, 4);
    double worst = 0.0;
    int failures = 0;
    for (int seed = 1; seed <= kFitSeeds; ++seed) {
        std::vector<FluxZZPoint> data;
        for (std::size_t k = 0; k < flux.size(); ++k) {
            if (curve.mask[k]) continue;
            CounterRng rng(static_cast<std::uint64_t>(seed), k);
            const double u1 = 1.0 - rng.uniform01(), u2 = rng.uniform01();
            const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
            data.push_back({flux[k], curve.zz_mhz[k] * (1.0 + kFitNoise * z)});
        }
        DeviceSpec init = truth;
        for (auto& c : init.couplings) c.strength_ghz *= 0.9;
        try {
            const auto f = fit_coupling_params(data, init);
            const double dev = std::max({std::abs(f.g_q1_bus_ghz / truth.coupling(Mode::Q1, Mode::Bus) - 1.0),
                                         std::abs(f.g_q2_bus_ghz / truth.coupling(Mode::Q2, Mode::Bus) - 1.0),
                                         std::abs(f.g_q1_q2_ghz / truth.coupling(Mode::Q1, Mode::Q2) - 1.0)});
            worst = std::max(worst, dev);
            if (dev >= kFitRelTol) ++failures;
        } catch (const Error&) {
            ++failures;
        }
    }
    return {failures == 0, std::to_string(kFitSeeds - failures) + "/" + std::to_string(kFitSeeds) +
                               " seeds within 5%, worst relative error " + num(worst)};
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::current_path() / "acceptance_cli";
    fs::create_directories(dir);
    Outcome o{true, ""};
    int compared = 0;
    for (const auto& cmd : cli::commands()) {
        for (const char* format : {"csv", "json"}) {
            std::vector<std::string> outputs, summaries;
            for (const char* tag : {"a1", "b1", "c8"}) {
                const std::string threads = tag[1] == '8' ? "8" : "1";
                const fs::path out = dir / (cmd + "_" + tag + "." + format);
                const fs::path summary = dir / (cmd + "_" + tag + "_" + format + ".summary");
                const std::string line = std::string(BBQ_CLI_PATH) + " " + cmd + " --seed 7 --threads " + threads +
                                         " --format " + format + " -o \"" + out.string() + "\" > \"" +
                                         summary.string() + "\" 2>/dev/null";
                const int rc = std::system(line.c_str());
                if (rc != 0) {
                    o.pass = false;
                    o.detail += cmd + " exit " + std::to_string(rc) + "; ";
                }
                outputs.push_back(io::read_text_file(out.string()));
                std::string s = io::read_text_file(summary.string());
                // The summary echoes the output path, which differs by construction.
                const auto pos = s.find(out.string());
                if (pos != std::string::npos) s.erase(pos, out.string().size());
                summaries.push_back(s);
            }
            const bool same = outputs[0] == outputs[1] && outputs[0] == outputs[2] &&
                              summaries[0] == summaries[1] && summaries[0] == summaries[2] && !outputs[0].empty();
            if (!same) {
                o.pass = false;
                o.detail += cmd + "/" + format + " differs; ";
            }
            ++compared;
        }
    }
    o.detail += std::to_string(compared) + " command/format pairs compared (2 runs at 1 thread, 1 at 8)";
    return o;
}

}  // namespace

int main() {
    int failed = 0;
    auto report = [&](int id, const std::string& name, const std::function<Outcome()>& f) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name << " (" << num(secs) << " s): "
                  << o.detail << std::endl;
    };
    Calibrated at60;
    report(1, "zero-ZZ flip BAQ/BBQ", zero_flip);
    report(2, "BBQ on/off contrast", on_off_contrast);
    report(3, "pulse-shape contract", pulse_contract);
    report(4, "calibrated CZ quality", [&] {
        at60 = calibrate_at(30.0);
        return cz_quality(at60);
    });
    report(5, "short-pulse adiabaticity breakdown", [&] { return adiabaticity(at60); });
    report(6, "double-pulse interference", double_pulse);
    report(7, "Clifford accounting", clifford_accounting);
    report(8, "RB round-trip", rb_round_trip);
    report(9, "coupling-fit recovery", fit_recovery);
    report(10, "CLI determinism", determinism);
    return failed == 0 ? 0 : 1;
}
