#include "bbq/cli.hpp"

#include "bbq/errors.hpp"
#include "bbq/presets.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bbq::cli {

using nlohmann::json;

namespace {

// Object reader that remembers which keys were consumed so leftovers can be
// reported as unknown.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + " must be an object");
    }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key, double fallback) {
        used_.insert(key);
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(field(key) + " must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(field(key) + " must be finite");
        return d;
    }

    std::optional<double> optional_number(const std::string& key) {
        used_.insert(key);
        if (!has(key)) return std::nullopt;
        return number(key, 0.0);
    }

    long long integer(const std::string& key, long long fallback) {
        used_.insert(key);
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_number_integer()) throw ConfigError(field(key) + " must be an integer");
        return v.get<long long>();
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        used_.insert(key);
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
        throw ConfigError(field(key) + " must be a non-negative integer");
    }

    bool boolean(const std::string& key, bool fallback) {
        used_.insert(key);
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(field(key) + " must be true or false");
        return v.get<bool>();
    }

    std::string string(const std::string& key, const std::string& fallback) {
        used_.insert(key);
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(field(key) + " must be a string");
        return v.get<std::string>();
    }

    /// Either an explicit list under `key`, or {start, stop, points} under
    /// `key` as an object.
    std::vector<double> grid(const std::string& key, const std::vector<double>& fallback) {
        used_.insert(key);
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (v.is_array()) {
            std::vector<double> out;
            for (std::size_t k = 0; k < v.size(); ++k) {
                if (!v[k].is_number()) {
                    throw ConfigError(field(key) + "[" + std::to_string(k) + "] must be a number");
                }
                out.push_back(v[k].get<double>());
            }
            return out;
        }
        Reader r(v, field(key));
        const double start = r.number("start", 0.0);
        const double stop = r.number("stop", 0.0);
        const long long n = r.integer("points", 0);
        r.finish();
        if (n < 1) throw ConfigError(field(key) + ".points must be >= 1");
        if (!r.present("start") || !r.present("stop")) {
            throw ConfigError(field(key) + " needs start and stop");
        }
        std::vector<double> out(static_cast<std::size_t>(n));
        for (long long k = 0; k < n; ++k) {
            out[static_cast<std::size_t>(k)] = n == 1 ? start : start + (stop - start) * static_cast<double>(k) / static_cast<double>(n - 1);
        }
        return out;
    }

    bool present(const std::string& key) const { return has(key); }
    bool explicit_null(const std::string& key) const { return j_.contains(key) && j_.at(key).is_null(); }
    void mark(const std::string& key) { used_.insert(key); }

    Reader child(const std::string& key) {
        used_.insert(key);
        static const json empty = json::object();
        return Reader(has(key) ? j_.at(key) : empty, field(key));
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.count(it.key())) throw ConfigError("unknown key " + field(it.key()));
        }
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    std::string where() const { return path_.empty() ? "configuration" : path_; }
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
    return v;
}

std::string default_preset(const std::string& command) {
    if (command == "zz-map" || command == "find-zero" || command == "clifford-stats") return "bbq";
    if (command == "delay-scan") return "pair8-like";
    return "pair1-like";
}

void read_mode(Reader r, ModeSpec& m) {
    m.frequency_ghz = r.number("frequency_ghz", m.frequency_ghz);
    m.anharmonicity_ghz = r.number("anharmonicity_ghz", m.anharmonicity_ghz);
    m.levels = static_cast<int>(r.integer("levels", m.levels));
    r.finish();
}

DeviceSpec read_device(Reader r, const std::string& command, std::string& preset_used) {
    preset_used = r.string("preset", r.present("q1") ? "" : default_preset(command));
    DeviceSpec d = preset_used.empty() ? presets::bbq() : presets::device(preset_used);
    if (preset_used.empty()) d.squid.reset();
    read_mode(r.child("q1"), d.mode(Mode::Q1));
    read_mode(r.child("q2"), d.mode(Mode::Q2));
    read_mode(r.child("bus"), d.mode(Mode::Bus));
    {
        Reader c = r.child("couplings");
        d.set_coupling(Mode::Q1, Mode::Bus, c.number("q1_bus_ghz", d.coupling(Mode::Q1, Mode::Bus)));
        d.set_coupling(Mode::Q2, Mode::Bus, c.number("q2_bus_ghz", d.coupling(Mode::Q2, Mode::Bus)));
        d.set_coupling(Mode::Q1, Mode::Q2, c.number("q1_q2_ghz", d.coupling(Mode::Q1, Mode::Q2)));
        c.finish();
    }
    if (r.present("squid")) {
        Reader s = r.child("squid");
        SquidSpec sq = d.squid.value_or(SquidSpec{});
        sq.f_max_ghz = s.number("f_max_ghz", sq.f_max_ghz);
        sq.asymmetry = s.number("asymmetry", sq.asymmetry);
        sq.flux_offset = s.number("flux_offset_phi0", sq.flux_offset);
        s.finish();
        d.squid = sq;
    } else if (r.explicit_null("squid")) {
        d.squid.reset();
    }
    r.mark("squid");
    r.finish();
    d.validate();
    return d;
}

json mode_json(const ModeSpec& m) {
    return {{"frequency_ghz", m.frequency_ghz}, {"anharmonicity_ghz", m.anharmonicity_ghz}, {"levels", m.levels}};
}

Eigen::Matrix4d read_matrix4(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 4) throw ConfigError(path + " must be a 4x4 array");
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i) {
        const json& row = v[static_cast<std::size_t>(i)];
        if (!row.is_array() || row.size() != 4) throw ConfigError(path + "[" + std::to_string(i) + "] must have 4 entries");
        for (int j = 0; j < 4; ++j) {
            if (!row[static_cast<std::size_t>(j)].is_number()) {
                throw ConfigError(path + "[" + std::to_string(i) + "][" + std::to_string(j) + "] must be a number");
            }
            m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
        }
    }
    return m;
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"zz-map", "zz-curve", "zz-fit", "find-zero",
                                            "pulse", "gate", "amp-scan", "delay-scan",
                                            "rb", "irb", "clifford-stats"};
    return c;
}

RunConfig parse_config(const json& j, const std::string& command) {
    if (std::find(commands().begin(), commands().end(), command) == commands().end()) {
        throw ConfigError("unknown command '" + command + "'");
    }
    RunConfig cfg;
    cfg.command = command;
    Reader root(j, "");
    root.string("command", command);  // informational; emitted by --emit-config
    if (root.present("command") && j.at("command") != command) {
        throw ConfigError("config was written for command '" + j.at("command").get<std::string>() +
                          "' but '" + command + "' was requested");
    }

    std::string preset;
    cfg.device = read_device(root.child("device"), command, preset);

    const bool pair8 = preset == "pair8-like";
    const double q1 = cfg.device.mode(Mode::Q1).frequency_ghz;
    const double bus = cfg.device.mode(Mode::Bus).frequency_ghz;

    {
        Reader s = root.child("sweep");
        if (s.present("axes")) {
            const json& axes = s.raw("axes");
            if (!axes.is_array()) throw ConfigError("sweep.axes must be an array");
            for (std::size_t k = 0; k < axes.size(); ++k) {
                Reader a(axes[k], "sweep.axes[" + std::to_string(k) + "]");
                AxisConfig ax;
                ax.parameter = a.string("parameter", "");
                sweep_parameter_from_string(ax.parameter);
                ax.values = a.grid("values", {});
                a.finish();
                cfg.sweep_axes.push_back(std::move(ax));
            }
        } else {
            s.mark("axes");
            cfg.sweep_axes = {{"bus_frequency_ghz", linspace(2.0, 4.5, 51)}};
        }
        s.finish();
    }
    {
        Reader z = root.child("zero_search");
        cfg.bracket_lo_ghz = z.number("bracket_lo_ghz", 2.0);
        cfg.bracket_hi_ghz = z.number("bracket_hi_ghz", 4.0);
        cfg.zero.zz_tolerance_mhz = z.number("tolerance_mhz", cfg.zero.zz_tolerance_mhz);
        cfg.zero.scan_intervals = static_cast<int>(z.integer("scan_intervals", cfg.zero.scan_intervals));
        cfg.zero.max_refinements = static_cast<int>(z.integer("max_refinements", cfg.zero.max_refinements));
        z.finish();
    }
    {
        Reader f = root.child("flux");
        cfg.flux_phi0 = f.grid("values_phi0", linspace(0.0, 0.5, 26));
        f.finish();
    }
    {
        Reader f = root.child("fit");
        cfg.fit.synthetic = f.boolean("synthetic", true);
        cfg.fit.noise_fraction = f.number("noise_fraction", cfg.fit.noise_fraction);
        cfg.fit.initial_coupling_scale = f.number("initial_coupling_scale", cfg.fit.initial_coupling_scale);
        cfg.fit.data_path = f.string("data_path", "");
        if (f.present("data")) {
            const json& d = f.raw("data");
            if (!d.is_array()) throw ConfigError("fit.data must be an array");
            for (std::size_t k = 0; k < d.size(); ++k) {
                Reader p(d[k], "fit.data[" + std::to_string(k) + "]");
                FluxZZPoint pt{p.number("flux_phi0", 0.0), p.number("zz_mhz", 0.0)};
                if (!p.present("flux_phi0") || !p.present("zz_mhz")) {
                    throw ConfigError("fit.data[" + std::to_string(k) + "] needs flux_phi0 and zz_mhz");
                }
                p.finish();
                cfg.fit.data.push_back(pt);
            }
        } else {
            f.mark("data");
        }
        cfg.fit.fit_squid = f.boolean("fit_squid", false);
        cfg.fit.weighting = fit_weighting_from_string(f.string("weighting", "relative"));
        cfg.fit.max_iterations = static_cast<int>(f.integer("max_iterations", 200));
        f.finish();
        if (!cfg.fit.synthetic && cfg.fit.data.empty() && cfg.fit.data_path.empty()) {
            throw ConfigError("fit.synthetic is false but neither fit.data nor fit.data_path is given");
        }
    }
    {
        Reader p = root.child("pulse");
        const PulseParams seed = pair8 ? presets::pair8_pulse() : presets::pair1_pulse();
        cfg.pulse.delta1_ghz = p.number("delta1_ghz", q1 - bus);
        cfg.pulse.delta2_ghz = p.number("delta2_ghz", seed.delta2_ghz);
        cfg.pulse.g_eff_ghz = p.number("g_eff_ghz", 1.2 * cfg.device.coupling(Mode::Q1, Mode::Bus));
        cfg.pulse.turn_rate_per_ns = p.number("turn_rate_per_ns", seed.turn_rate_per_ns);
        cfg.pulse.half_length_ns = p.number("half_length_ns", seed.half_length_ns);
        cfg.pulse.sample_dt_ns = p.number("sample_dt_ns", seed.sample_dt_ns);
        cfg.pulse_delay_ns = p.optional_number("delay_ns");
        cfg.waveform_kind = p.string("waveform_kind", "detuning");
        p.finish();
        if (cfg.waveform_kind != "detuning" && cfg.waveform_kind != "flux") {
            throw ConfigError("pulse.waveform_kind must be detuning or flux");
        }
        if (command == "pulse" || command == "gate" || command == "amp-scan" || command == "delay-scan") {
            cfg.pulse.validate();
        }
    }
    {
        Reader p = root.child("propagation");
        cfg.propagation.step_dt_ns = p.number("step_dt_ns", cfg.pulse.sample_dt_ns);
        cfg.propagation.method = integrator_from_string(p.string("method", "piecewise-exponential"));
        const std::string frame = p.string("frame", "dressed-idle");
        if (frame != "dressed-idle") throw ConfigError("propagation.frame must be dressed-idle");
        p.finish();
    }
    {
        Reader g = root.child("gate");
        cfg.gate_calibrate = g.boolean("calibrate", true);
        cfg.calibration.scale_lo = g.number("scale_lo", cfg.calibration.scale_lo);
        cfg.calibration.scale_hi = g.number("scale_hi", cfg.calibration.scale_hi);
        cfg.calibration.scan_points = static_cast<int>(g.integer("scan_points", cfg.calibration.scan_points));
        cfg.calibration.tolerance_rad = g.number("tolerance_rad", cfg.calibration.tolerance_rad);
        g.finish();
    }
    {
        Reader a = root.child("amp_scan");
        cfg.amplitude_scales = a.grid("scales", linspace(0.0, 1.2, 13));
        a.finish();
    }
    {
        Reader d = root.child("delay_scan");
        cfg.delays_ns = d.grid("delays_ns", linspace(0.0, 120.0, 25));
        cfg.delay_calibrate = d.boolean("calibrate", false);
        cfg.delay_lo_ns = d.number("bracket_lo_ns", 0.0);
        cfg.delay_hi_ns = d.number("bracket_hi_ns", 120.0);
        cfg.iswap_tolerance_rad = d.number("iswap_tolerance_rad", 0.01);
        d.finish();
    }
    {
        Reader r = root.child("rb");
        const auto depths = r.grid("depths", {1, 10, 25, 50, 100, 200, 300, 500});
        cfg.rb.depths.clear();
        for (std::size_t k = 0; k < depths.size(); ++k) {
            if (depths[k] != std::floor(depths[k]) || depths[k] < 0 || depths[k] > 1e6) {
                throw ConfigError("rb.depths[" + std::to_string(k) + "] must be a non-negative integer");
            }
            cfg.rb.depths.push_back(static_cast<int>(depths[k]));
        }
        cfg.rb.sequences_per_depth = static_cast<int>(r.integer("sequences_per_depth", 30));
        {
            Reader n = r.child("noise");
            cfg.noise_model = n.string("model", "depolarizing");
            noise_kind_from_string(cfg.noise_model);
            cfg.noise_cz_error = n.number("cz_error", 0.0015);
            n.finish();
        }
        {
            Reader ro = r.child("readout");
            if (ro.present("confusion")) cfg.rb.readout_confusion = read_matrix4(ro.raw("confusion"), "rb.readout.confusion");
            else ro.mark("confusion");
            cfg.rb.readout_correct = ro.boolean("correct", false);
            ro.finish();
        }
        r.finish();
        cfg.rb.validate();
    }
    {
        Reader o = root.child("output");
        const std::string fmt = o.string("format", "csv");
        if (fmt != "csv" && fmt != "json") throw ConfigError("output.format must be csv or json");
        cfg.output_format = fmt;
        cfg.output_path = o.string("path", "bbq_" + command + "." + fmt);
        o.finish();
    }
    cfg.seed = root.unsigned_integer("seed", 1);
    cfg.rb.seed = cfg.seed;
    root.finish();
    return cfg;
}

json to_json(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    const DeviceSpec& d = cfg.device;
    json dev = {{"q1", mode_json(d.mode(Mode::Q1))},
                {"q2", mode_json(d.mode(Mode::Q2))},
                {"bus", mode_json(d.mode(Mode::Bus))},
                {"couplings",
                 {{"q1_bus_ghz", d.coupling(Mode::Q1, Mode::Bus)},
                  {"q2_bus_ghz", d.coupling(Mode::Q2, Mode::Bus)},
                  {"q1_q2_ghz", d.coupling(Mode::Q1, Mode::Q2)}}}};
    if (d.squid) {
        dev["squid"] = {{"f_max_ghz", d.squid->f_max_ghz},
                        {"asymmetry", d.squid->asymmetry},
                        {"flux_offset_phi0", d.squid->flux_offset}};
    } else {
        dev["squid"] = nullptr;
    }
    j["device"] = dev;
    json axes = json::array();
    for (const auto& a : cfg.sweep_axes) axes.push_back({{"parameter", a.parameter}, {"values", a.values}});
    j["sweep"] = {{"axes", axes}};
    j["zero_search"] = {{"bracket_lo_ghz", cfg.bracket_lo_ghz},
                        {"bracket_hi_ghz", cfg.bracket_hi_ghz},
                        {"tolerance_mhz", cfg.zero.zz_tolerance_mhz},
                        {"scan_intervals", cfg.zero.scan_intervals},
                        {"max_refinements", cfg.zero.max_refinements}};
    j["flux"] = {{"values_phi0", cfg.flux_phi0}};
    json data = json::array();
    for (const auto& p : cfg.fit.data) data.push_back({{"flux_phi0", p.flux}, {"zz_mhz", p.zz_mhz}});
    j["fit"] = {{"synthetic", cfg.fit.synthetic},
                {"noise_fraction", cfg.fit.noise_fraction},
                {"initial_coupling_scale", cfg.fit.initial_coupling_scale},
                {"data", data},
                {"data_path", cfg.fit.data_path},
                {"fit_squid", cfg.fit.fit_squid},
                {"weighting", to_string(cfg.fit.weighting)},
                {"max_iterations", cfg.fit.max_iterations}};
    j["pulse"] = {{"delta1_ghz", cfg.pulse.delta1_ghz},
                  {"delta2_ghz", cfg.pulse.delta2_ghz},
                  {"g_eff_ghz", cfg.pulse.g_eff_ghz},
                  {"turn_rate_per_ns", cfg.pulse.turn_rate_per_ns},
                  {"half_length_ns", cfg.pulse.half_length_ns},
                  {"sample_dt_ns", cfg.pulse.sample_dt_ns},
                  {"delay_ns", cfg.pulse_delay_ns ? json(*cfg.pulse_delay_ns) : json(nullptr)},
                  {"waveform_kind", cfg.waveform_kind}};
    j["propagation"] = {{"step_dt_ns", cfg.propagation.step_dt_ns},
                        {"method", to_string(cfg.propagation.method)},
                        {"frame", "dressed-idle"}};
    j["gate"] = {{"calibrate", cfg.gate_calibrate},
                 {"scale_lo", cfg.calibration.scale_lo},
                 {"scale_hi", cfg.calibration.scale_hi},
                 {"scan_points", cfg.calibration.scan_points},
                 {"tolerance_rad", cfg.calibration.tolerance_rad}};
    j["amp_scan"] = {{"scales", cfg.amplitude_scales}};
    j["delay_scan"] = {{"delays_ns", cfg.delays_ns},
                       {"calibrate", cfg.delay_calibrate},
                       {"bracket_lo_ns", cfg.delay_lo_ns},
                       {"bracket_hi_ns", cfg.delay_hi_ns},
                       {"iswap_tolerance_rad", cfg.iswap_tolerance_rad}};
    json readout = {{"correct", cfg.rb.readout_correct}};
    if (cfg.rb.readout_confusion) {
        json m = json::array();
        for (int i = 0; i < 4; ++i) {
            json row = json::array();
            for (int k = 0; k < 4; ++k) row.push_back((*cfg.rb.readout_confusion)(i, k));
            m.push_back(row);
        }
        readout["confusion"] = m;
    } else {
        readout["confusion"] = nullptr;
    }
    j["rb"] = {{"depths", cfg.rb.depths},
               {"sequences_per_depth", cfg.rb.sequences_per_depth},
               {"noise", {{"model", cfg.noise_model}, {"cz_error", cfg.noise_cz_error}}},
               {"readout", readout}};
    j["output"] = {{"path", cfg.output_path}, {"format", cfg.output_format}};
    j["seed"] = cfg.seed;
    return j;
}

void apply_override(json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override '" + assignment + "' must look like a.b.c=value");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    json* node = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("override path '" + path + "' has an empty component");
        if (!node->is_object()) {
            if (node->is_null()) *node = json::object();
            else throw ConfigError("override path '" + path + "' descends into a non-object");
        }
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

}  // namespace bbq::cli
