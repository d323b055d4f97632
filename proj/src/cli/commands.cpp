#include "bbq/cli.hpp"

#include "bbq/clifford.hpp"
#include "bbq/errors.hpp"
#include "bbq/io.hpp"
#include "bbq/presets.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace bbq::cli {

using nlohmann::json;

namespace {

struct Outcome {
    json summary = json::object();
    json document = json::object();
    std::string csv;
};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json report_json(const GateReport& r) {
    json proj = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int k = 0; k < 4; ++k) row.push_back({r.projected(i, k).real(), r.projected(i, k).imag()});
        proj.push_back(row);
    }
    return {{"cz_angle_rad", r.cz_angle},
            {"iswap_angle_rad", r.iswap_angle},
            {"leakage", r.leakage},
            {"virtual_z_rad", {r.virtual_z[0], r.virtual_z[1]}},
            {"fidelity", r.fidelity},
            {"duration_ns", r.duration_ns},
            {"projected_re_im", proj}};
}

std::string report_csv(const GateReport& r) {
    std::ostringstream os;
    os << "field,value\n";
    os << "cz_angle_rad," << io::fmt(r.cz_angle) << '\n';
    os << "iswap_angle_rad," << io::fmt(r.iswap_angle) << '\n';
    os << "leakage," << io::fmt(r.leakage) << '\n';
    os << "virtual_z_q1_rad," << io::fmt(r.virtual_z[0]) << '\n';
    os << "virtual_z_q2_rad," << io::fmt(r.virtual_z[1]) << '\n';
    os << "fidelity," << io::fmt(r.fidelity) << '\n';
    os << "duration_ns," << io::fmt(r.duration_ns) << '\n';
    return os.str();
}

json pulse_json(const PulseParams& p) {
    return {{"delta1_ghz", p.delta1_ghz}, {"delta2_ghz", p.delta2_ghz}, {"g_eff_ghz", p.g_eff_ghz},
            {"turn_rate_per_ns", p.turn_rate_per_ns}, {"half_length_ns", p.half_length_ns},
            {"sample_dt_ns", p.sample_dt_ns}};
}

json fit_json(const DecayFit& f) {
    return {{"A", f.A}, {"p", f.p}, {"B", f.B}, {"A_err", f.A_err}, {"p_err", f.p_err},
            {"B_err", f.B_err}, {"covariance_ok", f.covariance_ok}};
}

json rb_json(const RBResult& r) {
    return {{"depths", r.depths},
            {"survival", r.survival},
            {"survival_sem", r.survival_sem},
            {"fit", fit_json(r.fit)},
            {"epc", r.epc},
            {"epg_bound", r.epg_bound},
            {"interleaved", r.interleaved},
            {"seed", r.seed},
            {"sequences_per_depth", r.sequences_per_depth}};
}

std::vector<SweepAxis> to_axes(const RunConfig& cfg) {
    std::vector<SweepAxis> axes;
    for (const auto& a : cfg.sweep_axes) axes.push_back({sweep_parameter_from_string(a.parameter), a.values});
    return axes;
}

Outcome cmd_zz_map(const RunConfig& cfg, int threads) {
    const ZZMap map = zz_sweep(cfg.device, to_axes(cfg), threads);
    Outcome o;
    std::ostringstream os;
    for (const auto& a : map.axes) os << to_string(a.parameter) << ',';
    os << "zz_mhz,masked\n";
    const std::size_t n0 = map.axes[0].values.size();
    const std::size_t n1 = map.axes.size() > 1 ? map.axes[1].values.size() : 1;
    json zz = json::array(), mask = json::array();
    std::size_t masked = 0;
    for (std::size_t i = 0; i < n0; ++i) {
        json zrow = json::array(), mrow = json::array();
        for (std::size_t j = 0; j < n1; ++j) {
            const std::size_t c = map.index(i, j);
            os << io::fmt(map.axes[0].values[i]) << ',';
            if (map.axes.size() > 1) os << io::fmt(map.axes[1].values[j]) << ',';
            os << io::fmt(map.zz_mhz[c]) << ',' << (map.mask[c] ? 1 : 0) << '\n';
            zrow.push_back(number_or_null(map.zz_mhz[c]));
            mrow.push_back(static_cast<bool>(map.mask[c]));
            masked += map.mask[c] ? 1 : 0;
        }
        if (map.axes.size() > 1) {
            zz.push_back(zrow);
            mask.push_back(mrow);
        } else {
            zz.push_back(zrow[0]);
            mask.push_back(mrow[0]);
        }
    }
    json axes = json::array();
    for (const auto& a : map.axes) axes.push_back({{"parameter", to_string(a.parameter)}, {"values", a.values}});
    o.csv = os.str();
    o.document = {{"axes", axes}, {"zz_mhz", zz}, {"mask", mask}};
    o.summary = {{"cells", map.size()}, {"masked", masked}};
    return o;
}

Outcome cmd_zz_curve(const RunConfig& cfg, int threads) {
    const FluxCurve c = zz_vs_flux(cfg.device, cfg.flux_phi0, threads);
    Outcome o;
    std::ostringstream os;
    os << "flux_phi0,bus_frequency_ghz,zz_mhz,masked\n";
    json zz = json::array();
    double min_abs = INFINITY;
    double at = NAN;
    for (std::size_t k = 0; k < c.flux.size(); ++k) {
        os << io::fmt(c.flux[k]) << ',' << io::fmt(c.bus_frequency_ghz[k]) << ',' << io::fmt(c.zz_mhz[k])
           << ',' << (c.mask[k] ? 1 : 0) << '\n';
        zz.push_back(number_or_null(c.zz_mhz[k]));
        if (!c.mask[k] && std::abs(c.zz_mhz[k]) < min_abs) {
            min_abs = std::abs(c.zz_mhz[k]);
            at = c.flux[k];
        }
    }
    o.csv = os.str();
    o.document = {{"flux_phi0", c.flux}, {"bus_frequency_ghz", c.bus_frequency_ghz}, {"zz_mhz", zz},
                  {"mask", std::vector<bool>(c.mask.begin(), c.mask.end())}};
    o.summary = {{"points", c.flux.size()}, {"min_abs_zz_mhz", number_or_null(min_abs)}, {"at_flux_phi0", number_or_null(at)}};
    return o;
}

std::vector<FluxZZPoint> load_fit_data(const RunConfig& cfg) {
    if (cfg.fit.synthetic) {
        if (!cfg.device.squid) throw ConfigError("fit.synthetic needs device.squid");
        const FluxCurve truth = zz_vs_flux(cfg.device, cfg.flux_phi0, 1);
        std::vector<FluxZZPoint> data;
        for (std::size_t k = 0; k < truth.flux.size(); ++k) {
            if (truth.mask[k]) continue;
            // Box-Muller on two counter-based uniforms per point.
            CounterRng rng(cfg.seed, k);
            const double u1 = 1.0 - rng.uniform01();
            const double u2 = rng.uniform01();
            const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
            data.push_back({truth.flux[k], truth.zz_mhz[k] * (1.0 + cfg.fit.noise_fraction * z)});
        }
        return data;
    }
    std::vector<FluxZZPoint> data = cfg.fit.data;
    if (!cfg.fit.data_path.empty()) {
        std::istringstream in(io::read_text_file(cfg.fit.data_path));
        std::string line;
        std::size_t row = 0;
        while (std::getline(in, line)) {
            ++row;
            if (line.empty() || line[0] == '#' || line.rfind("flux", 0) == 0) continue;
            const auto comma = line.find(',');
            try {
                if (comma == std::string::npos) throw std::invalid_argument("missing comma");
                data.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
            } catch (const std::exception&) {
                throw ConfigError(cfg.fit.data_path + " row " + std::to_string(row) + " is not 'flux_phi0,zz_mhz'");
            }
        }
    }
    return data;
}

Outcome cmd_zz_fit(const RunConfig& cfg, int) {
    const auto data = load_fit_data(cfg);
    DeviceSpec initial = cfg.device;
    if (cfg.fit.synthetic) {
        const double s = cfg.fit.initial_coupling_scale;
        initial.set_coupling(Mode::Q1, Mode::Bus, s * cfg.device.coupling(Mode::Q1, Mode::Bus));
        initial.set_coupling(Mode::Q2, Mode::Bus, s * cfg.device.coupling(Mode::Q2, Mode::Bus));
        initial.set_coupling(Mode::Q1, Mode::Q2, s * cfg.device.coupling(Mode::Q1, Mode::Q2));
    }
    CouplingFitOptions opt;
    opt.fit_squid = cfg.fit.fit_squid;
    opt.weighting = cfg.fit.weighting;
    opt.solver.max_iterations = cfg.fit.max_iterations;
    const CouplingFit fit = fit_coupling_params(data, initial, opt);
    std::vector<double> values{fit.g_q1_bus_ghz, fit.g_q2_bus_ghz, fit.g_q1_q2_ghz};
    if (cfg.fit.fit_squid) {
        values.insert(values.end(), {fit.squid.f_max_ghz, fit.squid.asymmetry, fit.squid.flux_offset});
    }
    Outcome o;
    std::ostringstream os;
    os << "parameter,value,std_error\n";
    json params = json::object();
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double se = k < fit.standard_errors.size() ? fit.standard_errors[k] : NAN;
        os << fit.parameter_names[k] << ',' << io::fmt(values[k]) << ',' << io::fmt(se) << '\n';
        params[fit.parameter_names[k]] = {{"value", values[k]}, {"std_error", number_or_null(se)}};
    }
    o.csv = os.str();
    o.document = {{"parameters", params}, {"residual_norm_mhz", fit.residual_norm_mhz},
                  {"weighted_residual_norm", fit.weighted_residual_norm},
                  {"iterations", fit.iterations}, {"points", data.size()}};
    o.summary = {{"g_q1_bus_ghz", fit.g_q1_bus_ghz}, {"g_q2_bus_ghz", fit.g_q2_bus_ghz},
                 {"g_q1_q2_ghz", fit.g_q1_q2_ghz}, {"residual_norm_mhz", fit.residual_norm_mhz}};
    return o;
}

Outcome cmd_find_zero(const RunConfig& cfg, int) {
    const double root = find_zz_zero(cfg.device, cfg.bracket_lo_ghz, cfg.bracket_hi_ghz, cfg.zero);
    const double zz = compute_zz(cfg.device, root);
    Outcome o;
    o.csv = "bus_frequency_ghz,zz_mhz\n" + io::fmt(root) + ',' + io::fmt(zz) + '\n';
    o.document = {{"bus_frequency_ghz", root}, {"zz_mhz", zz},
                  {"bracket_ghz", {cfg.bracket_lo_ghz, cfg.bracket_hi_ghz}}};
    o.summary = {{"bus_frequency_ghz", root}, {"zz_mhz", zz}};
    return o;
}

PulseWaveform build(const RunConfig& cfg, const PulseParams& p) {
    return cfg.pulse_delay_ns ? compose_double_pulse(p, *cfg.pulse_delay_ns) : sample_pulse(p);
}

Outcome cmd_pulse(const RunConfig& cfg, int) {
    PulseWaveform wf = build(cfg, cfg.pulse);
    if (cfg.waveform_kind == "flux") {
        if (!cfg.device.squid) throw ConfigError("pulse.waveform_kind = flux needs device.squid");
        wf = to_flux_waveform(wf, cfg.device.mode(Mode::Q1).frequency_ghz, *cfg.device.squid);
    }
    Outcome o;
    std::ostringstream os;
    write_waveform_csv(os, wf);
    o.csv = os.str();
    o.document = {{"kind", to_string(wf.kind)}, {"units", wf.kind == WaveformKind::Detuning ? "GHz" : "Phi0"},
                  {"half_length_ns", wf.half_length_ns}, {"delay_ns", wf.delay_ns},
                  {"times_ns", wf.times_ns}, {"values", wf.values}};
    o.summary = {{"samples", wf.values.size()}, {"duration_ns", wf.duration_ns()},
                 {"half_length_ns", wf.half_length_ns}, {"kind", to_string(wf.kind)}};
    return o;
}

Outcome cmd_gate(const RunConfig& cfg, int threads) {
    PulseParams p = cfg.pulse;
    GateReport rep;
    double scale = 1.0;
    if (cfg.gate_calibrate) {
        CalibrationOptions co = cfg.calibration;
        co.delay_ns = cfg.pulse_delay_ns;
        co.threads = threads;
        const auto cal = calibrate_cz(cfg.device, p, cfg.propagation, co);
        p = cal.params;
        rep = cal.report;
        scale = cal.scale;
    } else {
        rep = gate_report(cfg.device, build(cfg, p), cfg.propagation);
    }
    Outcome o;
    o.csv = report_csv(rep);
    o.document = {{"report", report_json(rep)}, {"pulse", pulse_json(p)}, {"scale", scale},
                  {"calibrated", cfg.gate_calibrate}};
    o.summary = {{"cz_angle_rad", rep.cz_angle}, {"iswap_angle_rad", rep.iswap_angle},
                 {"leakage", rep.leakage}, {"fidelity", rep.fidelity}, {"delta2_ghz", p.delta2_ghz}};
    return o;
}

Outcome cmd_amp_scan(const RunConfig& cfg, int threads) {
    const auto pts = amplitude_scan(cfg.device, cfg.pulse, cfg.amplitude_scales, cfg.propagation,
                                    threads, cfg.pulse_delay_ns);
    Outcome o;
    std::ostringstream os;
    os << "scale,phase_control0_rad,phase_control1_rad,cz_angle_rad,leakage,ok\n";
    json rows = json::array();
    std::size_t failed = 0;
    for (const auto& p : pts) {
        os << io::fmt(p.scale) << ',' << io::fmt(p.phase_control0) << ',' << io::fmt(p.phase_control1)
           << ',' << io::fmt(p.cz_angle) << ',' << io::fmt(p.leakage) << ',' << (p.ok ? 1 : 0) << '\n';
        rows.push_back({{"scale", p.scale}, {"phase_control0_rad", p.phase_control0},
                        {"phase_control1_rad", p.phase_control1}, {"cz_angle_rad", p.cz_angle},
                        {"leakage", p.leakage}, {"ok", p.ok}, {"error", p.error}});
        failed += p.ok ? 0 : 1;
    }
    o.csv = os.str();
    o.document = {{"points", rows}};
    o.summary = {{"points", pts.size()}, {"failed", failed}};
    return o;
}

Outcome cmd_delay_scan(const RunConfig& cfg, int threads) {
    const auto pts = delay_scan(cfg.device, cfg.pulse, cfg.delays_ns, cfg.propagation, threads);
    Outcome o;
    std::ostringstream os;
    os << "delay_ns,p_exc_q1_00,p_exc_q1_01,p_exc_q1_10,p_exc_q1_11,swap_01_to_10,swap_10_to_01,"
          "cz_angle_rad,iswap_angle_rad,leakage,ok\n";
    json rows = json::array();
    for (const auto& p : pts) {
        os << io::fmt(p.delay_ns);
        for (double v : p.p_excited_q1) os << ',' << io::fmt(v);
        os << ',' << io::fmt(p.swap_01_to_10) << ',' << io::fmt(p.swap_10_to_01) << ','
           << io::fmt(p.cz_angle) << ',' << io::fmt(p.iswap_angle) << ',' << io::fmt(p.leakage) << ','
           << (p.ok ? 1 : 0) << '\n';
        rows.push_back({{"delay_ns", p.delay_ns}, {"p_excited_q1", p.p_excited_q1},
                        {"swap_01_to_10", p.swap_01_to_10}, {"swap_10_to_01", p.swap_10_to_01},
                        {"cz_angle_rad", p.cz_angle}, {"iswap_angle_rad", p.iswap_angle},
                        {"leakage", p.leakage}, {"ok", p.ok}, {"error", p.error}});
    }
    o.csv = os.str();
    o.document = {{"points", rows}};
    o.summary = {{"points", pts.size()}};
    if (cfg.delay_calibrate) {
        DelayCalibrationOptions opt;
        opt.iswap_tolerance_rad = cfg.iswap_tolerance_rad;
        opt.cz = cfg.calibration;
        opt.cz.threads = threads;
        const auto cal = calibrate_delay(cfg.device, cfg.pulse, cfg.delay_lo_ns, cfg.delay_hi_ns,
                                         cfg.propagation, opt);
        o.document["calibration"] = {{"delay_ns", cal.delay_ns}, {"pulse", pulse_json(cal.params)},
                                     {"report", report_json(cal.report)}, {"rounds", cal.rounds}};
        o.summary["calibrated_delay_ns"] = cal.delay_ns;
        o.summary["iswap_angle_rad"] = cal.report.iswap_angle;
        o.summary["cz_angle_rad"] = cal.report.cz_angle;
    }
    return o;
}

NoiseModel make_noise(const RunConfig& cfg, int threads) {
    const NoiseKind kind = noise_kind_from_string(cfg.noise_model);
    if (kind == NoiseKind::Ideal) return NoiseModel::ideal();
    if (kind == NoiseKind::Depolarizing) return NoiseModel::depolarizing(cfg.noise_cz_error);
    cfg.pulse.validate();
    CalibrationOptions co = cfg.calibration;
    co.delay_ns = cfg.pulse_delay_ns;
    co.threads = threads;
    const auto cal = calibrate_cz(cfg.device, cfg.pulse, cfg.propagation, co);
    return NoiseModel::from_gate_report(cal.report);
}

Outcome cmd_rb(const RunConfig& cfg, int threads) {
    RBConfig rc = cfg.rb;
    rc.threads = threads;
    const RBResult r = simulate_rb(make_noise(cfg, threads), rc);
    Outcome o;
    std::ostringstream os;
    os << "depth,survival,survival_sem\n";
    for (std::size_t k = 0; k < r.depths.size(); ++k) {
        os << r.depths[k] << ',' << io::fmt(r.survival[k]) << ',' << io::fmt(r.survival_sem[k]) << '\n';
    }
    o.csv = os.str();
    o.document = rb_json(r);
    o.summary = {{"p", r.fit.p}, {"epc", r.epc}, {"epg_bound", r.epg_bound}};
    return o;
}

Outcome cmd_irb(const RunConfig& cfg, int threads) {
    RBConfig rc = cfg.rb;
    rc.threads = threads;
    const IRBResult r = simulate_irb(make_noise(cfg, threads), rc);
    Outcome o;
    std::ostringstream os;
    os << "depth,survival_ref,survival_ref_sem,survival_int,survival_int_sem\n";
    for (std::size_t k = 0; k < r.reference.depths.size(); ++k) {
        os << r.reference.depths[k] << ',' << io::fmt(r.reference.survival[k]) << ','
           << io::fmt(r.reference.survival_sem[k]) << ',' << io::fmt(r.interleaved.survival[k]) << ','
           << io::fmt(r.interleaved.survival_sem[k]) << '\n';
    }
    o.csv = os.str();
    o.document = {{"reference", rb_json(r.reference)}, {"interleaved", rb_json(r.interleaved)},
                  {"epg", r.epg}, {"epg_err", r.epg_err}, {"unphysical", r.unphysical}};
    o.summary = {{"epg", r.epg}, {"epg_err", r.epg_err}, {"epc_ref", r.reference.epc},
                 {"epg_bound", r.reference.epg_bound}, {"unphysical", r.unphysical}};
    return o;
}

Outcome cmd_clifford_stats(const RunConfig&, int) {
    const auto s = decomposition_stats();
    Outcome o;
    std::ostringstream os;
    os << "size,avg_cz,avg_non_z_1q,cz0,cz1,cz2,cz3\n"
       << s.size << ',' << io::fmt(s.avg_cz) << ',' << io::fmt(s.avg_non_z_1q);
    for (auto n : s.elements_by_cz) os << ',' << n;
    os << '\n';
    o.csv = os.str();
    o.document = {{"size", s.size}, {"avg_cz", s.avg_cz}, {"avg_non_z_1q", s.avg_non_z_1q},
                  {"elements_by_cz", s.elements_by_cz}, {"non_z_above_3_5", s.avg_non_z_1q > 3.5}};
    o.summary = {{"size", s.size}, {"avg_cz", s.avg_cz}, {"avg_non_z_1q", s.avg_non_z_1q}};
    return o;
}

Outcome dispatch(const RunConfig& cfg, int threads) {
    const std::string& c = cfg.command;
    if (c == "zz-map") return cmd_zz_map(cfg, threads);
    if (c == "zz-curve") return cmd_zz_curve(cfg, threads);
    if (c == "zz-fit") return cmd_zz_fit(cfg, threads);
    if (c == "find-zero") return cmd_find_zero(cfg, threads);
    if (c == "pulse") return cmd_pulse(cfg, threads);
    if (c == "gate") return cmd_gate(cfg, threads);
    if (c == "amp-scan") return cmd_amp_scan(cfg, threads);
    if (c == "delay-scan") return cmd_delay_scan(cfg, threads);
    if (c == "rb") return cmd_rb(cfg, threads);
    if (c == "irb") return cmd_irb(cfg, threads);
    if (c == "clifford-stats") return cmd_clifford_stats(cfg, threads);
    throw ConfigError("unknown command '" + c + "'");
}

json error_summary(const std::string& command, const std::string& type, const std::string& what) {
    return {{"command", command}, {"status", "error"}, {"error", type}, {"message", what}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tunable-bus two-qubit coupler simulator", "bbq"};
    app.require_subcommand(1, 1);
    std::string config_path;
    std::vector<std::string> overrides;
    int threads = 1;
    bool emit = false;
    std::string output_path;
    std::string format;
    std::optional<std::uint64_t> seed;
    for (const auto& name : commands()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", config_path, "JSON configuration file");
        sub->add_option("--set", overrides, "override a config value: a.b.c=value")->take_all();
        sub->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::Range(1, 1024));
        sub->add_flag("--emit-config", emit, "print the effective configuration and exit");
        sub->add_option("-o,--output", output_path, "output file (overrides output.path)");
        sub->add_option("--format", format, "csv or json (overrides output.format)");
        sub->add_option("--seed", seed, "random seed (overrides seed)");
    }
    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        out << error_summary("", "usage", e.what()).dump() << '\n';
        return 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        json raw = json::object();
        if (!config_path.empty()) {
            try {
                raw = json::parse(io::read_text_file(config_path));
            } catch (const json::parse_error& e) {
                throw ConfigError("config " + config_path + " is not valid JSON: " + e.what());
            }
        }
        for (const auto& ov : overrides) apply_override(raw, ov);
        if (!format.empty()) apply_override(raw, "output.format=\"" + format + "\"");
        if (!output_path.empty()) apply_override(raw, "output.path=" + json(output_path).dump());
        if (seed) apply_override(raw, "seed=" + std::to_string(*seed));
        RunConfig cfg = parse_config(raw, command);
        if (emit) {
            out << to_json(cfg).dump(2) << '\n';
            return 0;
        }
        Outcome o = dispatch(cfg, threads);
        if (!cfg.output_path.empty()) {
            if (cfg.output_format == "json") {
                json doc = o.document;
                doc["command"] = command;
                io::write_text_file(cfg.output_path, doc.dump(2) + "\n");
            } else {
                io::write_text_file(cfg.output_path, o.csv);
            }
        }
        json summary = {{"command", command}, {"status", "ok"}, {"output", cfg.output_path}};
        summary.update(o.summary);
        out << summary.dump() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        out << error_summary(command, "configuration", e.what()).dump() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        out << error_summary(command, "numerical", e.what()).dump() << '\n';
        return 3;
    } catch (const nlohmann::json::exception& e) {
        err << "configuration error: " << e.what() << '\n';
        out << error_summary(command, "configuration", e.what()).dump() << '\n';
        return 2;
    }
}

}  // namespace bbq::cli
