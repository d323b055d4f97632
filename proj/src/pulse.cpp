#include "bbq/pulse.hpp"

#include "bbq/errors.hpp"
#include "bbq/io.hpp"
#include "bbq/spectrum.hpp"

#include <cmath>
#include <ostream>

namespace bbq {

namespace {

// F(t) = 2at·atan(at) − log(1 + a²t²); θ(t) interpolates θ₂ → θ₁ as F(t)/F(l).
double shape_integral(double a, double t) {
    const double at = a * t;
    return 2.0 * at * std::atan(at) - std::log1p(at * at);
}

int grid_intervals(double span, double dt) {
    const double ratio = span / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)) {
        return static_cast<int>(nearest);
    }
    return static_cast<int>(std::ceil(ratio));
}

}  // namespace

void PulseParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0)) {
            throw ConfigError(std::string("pulse.") + name + " must be positive and finite");
        }
    };
    positive(half_length_ns, "half_length_ns");
    positive(sample_dt_ns, "sample_dt_ns");
    positive(g_eff_ghz, "g_eff_ghz");
    positive(turn_rate_per_ns, "turn_rate_per_ns");
    if (!std::isfinite(delta1_ghz) || !std::isfinite(delta2_ghz)) {
        throw ConfigError("pulse.delta1_ghz and pulse.delta2_ghz must be finite");
    }
    if (delta1_ghz == 0.0) throw ConfigError("pulse.delta1_ghz must be nonzero");
    if (delta1_ghz * delta2_ghz <= 0.0) {
        throw ConfigError("pulse.delta2_ghz must have the same sign as pulse.delta1_ghz");
    }
    if (std::abs(delta2_ghz) > std::abs(delta1_ghz)) {
        throw ConfigError("pulse.delta2_ghz must satisfy |delta2| <= |delta1|");
    }
}

std::string to_string(WaveformKind kind) {
    return kind == WaveformKind::Detuning ? "detuning" : "flux";
}

double PulseWaveform::duration_ns() const {
    return times_ns.empty() ? 0.0 : times_ns.back() - times_ns.front();
}

void PulseWaveform::validate() const {
    if (times_ns.empty() || times_ns.size() != values.size()) {
        throw ConfigError("waveform must have matching, nonempty times and values");
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k]) || !std::isfinite(times_ns[k])) {
            throw ConfigError("waveform sample " + std::to_string(k) + " is not finite");
        }
    }
    if (times_ns.size() < 2) return;
    const double dt = (times_ns.back() - times_ns.front()) / static_cast<double>(times_ns.size() - 1);
    if (!(dt > 0.0)) throw ConfigError("waveform times must be strictly increasing");
    for (std::size_t k = 1; k < times_ns.size(); ++k) {
        const double step = times_ns[k] - times_ns[k - 1];
        if (!(step > 0.0) || std::abs(step - dt) > 1e-9 * dt) {
            throw ConfigError("waveform grid is not uniform at sample " + std::to_string(k));
        }
    }
}

double quantization_angle(double delta_ghz, double g_eff_ghz) {
    if (!(g_eff_ghz > 0.0)) throw DomainError("g_eff_ghz must be positive");
    return std::atan(delta_ghz / (2.0 * g_eff_ghz));
}

double shape_rate_constant(const PulseParams& params) {
    params.validate();
    const double a = params.turn_rate_per_ns;
    const double th1 = quantization_angle(params.delta1_ghz, params.g_eff_ghz);
    const double th2 = quantization_angle(params.delta2_ghz, params.g_eff_ghz);
    return 2.0 * a * (th1 - th2) / shape_integral(a, params.half_length_ns);
}

double adiabatic_shape(const PulseParams& params, double t_ns) {
    params.validate();
    const double l = params.half_length_ns;
    if (!(std::abs(t_ns) <= l)) {
        throw DomainError("t = " + std::to_string(t_ns) + " ns lies outside [-l, l] with l = " +
                          std::to_string(l));
    }
    if (std::abs(t_ns) == l) return params.delta1_ghz;
    if (t_ns == 0.0) return params.delta2_ghz;
    if (params.delta1_ghz == params.delta2_ghz) return params.delta1_ghz;
    const double a = params.turn_rate_per_ns;
    const double g = params.g_eff_ghz;
    const double th1 = quantization_angle(params.delta1_ghz, g);
    const double th2 = quantization_angle(params.delta2_ghz, g);
    const double theta = (th1 - th2) * shape_integral(a, t_ns) / shape_integral(a, l) + th2;
    return 2.0 * g * std::tan(theta);
}

PulseWaveform sample_pulse(const PulseParams& params) {
    params.validate();
    const double dt = params.sample_dt_ns;
    const int n = grid_intervals(2.0 * params.half_length_ns, dt);
    if (n + 1 < 8) {
        throw ResolutionError("pulse has " + std::to_string(n + 1) +
                              " samples; at least 8 are required (reduce sample_dt_ns)");
    }
    PulseParams effective = params;
    effective.half_length_ns = n * dt / 2.0;

    PulseWaveform wf;
    wf.kind = WaveformKind::Detuning;
    wf.sample_dt_ns = dt;
    wf.half_length_ns = effective.half_length_ns;
    wf.times_ns.resize(static_cast<std::size_t>(n) + 1);
    wf.values.resize(wf.times_ns.size());
    for (int k = 0; k <= n; ++k) {
        const double t = (2 * k - n) * dt / 2.0;
        wf.times_ns[static_cast<std::size_t>(k)] = t;
        // Mirror the first half so the sampled waveform is exactly even.
        if (2 * k > n) {
            wf.values[static_cast<std::size_t>(k)] = wf.values[static_cast<std::size_t>(n - k)];
        } else {
            wf.values[static_cast<std::size_t>(k)] = adiabatic_shape(effective, t);
        }
    }
    return wf;
}

PulseWaveform compose_double_pulse(const PulseParams& single, double delay_ns) {
    if (!(delay_ns >= 0.0) || !std::isfinite(delay_ns)) {
        throw ConfigError("delay_ns must be finite and >= 0");
    }
    const PulseWaveform one = sample_pulse(single);
    const double dt = one.sample_dt_ns;
    const auto gap = static_cast<std::size_t>(std::llround(delay_ns / dt));
    const std::size_t n = one.values.size() - 1;

    PulseWaveform wf;
    wf.kind = WaveformKind::Detuning;
    wf.sample_dt_ns = dt;
    wf.half_length_ns = one.half_length_ns;
    wf.delay_ns = static_cast<double>(gap) * dt;
    wf.values.reserve(2 * n + gap + 1);
    wf.values.insert(wf.values.end(), one.values.begin(), one.values.end());
    wf.values.insert(wf.values.end(), gap, single.delta1_ghz);
    wf.values.insert(wf.values.end(), one.values.begin() + 1, one.values.end());
    wf.times_ns.resize(wf.values.size());
    for (std::size_t k = 0; k < wf.times_ns.size(); ++k) wf.times_ns[k] = static_cast<double>(k) * dt;
    return wf;
}

PulseWaveform constant_waveform(double delta_ghz, double duration_ns, double sample_dt_ns) {
    if (!(sample_dt_ns > 0.0)) throw ConfigError("sample_dt_ns must be positive");
    if (!(duration_ns >= 0.0)) throw ConfigError("duration_ns must be >= 0");
    const auto n = static_cast<std::size_t>(std::llround(duration_ns / sample_dt_ns));
    PulseWaveform wf;
    wf.kind = WaveformKind::Detuning;
    wf.sample_dt_ns = sample_dt_ns;
    wf.values.assign(n + 1, delta_ghz);
    wf.times_ns.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) wf.times_ns[k] = static_cast<double>(k) * sample_dt_ns;
    return wf;
}

PulseWaveform to_flux_waveform(const PulseWaveform& wf, double anchor_qubit_frequency_ghz,
                               const SquidSpec& squid) {
    if (wf.kind != WaveformKind::Detuning) {
        throw ConfigError("to_flux_waveform expects a detuning waveform");
    }
    squid.validate();
    PulseWaveform out = wf;
    out.kind = WaveformKind::Flux;
    for (std::size_t k = 0; k < wf.values.size(); ++k) {
        const double fb = anchor_qubit_frequency_ghz - wf.values[k];
        try {
            out.values[k] = inverse_flux(squid, fb);
        } catch (const RangeError& e) {
            throw RangeError("waveform sample " + std::to_string(k) + ": " + e.what());
        }
    }
    return out;
}

PulseWaveform to_detuning_waveform(const PulseWaveform& wf, double anchor_qubit_frequency_ghz,
                                   const SquidSpec& squid) {
    if (wf.kind != WaveformKind::Flux) {
        throw ConfigError("to_detuning_waveform expects a flux waveform");
    }
    PulseWaveform out = wf;
    out.kind = WaveformKind::Detuning;
    for (std::size_t k = 0; k < wf.values.size(); ++k) {
        out.values[k] = anchor_qubit_frequency_ghz - flux_to_frequency(squid, wf.values[k]);
    }
    return out;
}

double waveform_area(const PulseWaveform& wf, double reference) {
    double s = 0.0;
    for (std::size_t k = 1; k < wf.values.size(); ++k) {
        s += 0.5 * (wf.values[k] + wf.values[k - 1] - 2.0 * reference) *
             (wf.times_ns[k] - wf.times_ns[k - 1]);
    }
    return s;
}

void write_waveform_csv(std::ostream& os, const PulseWaveform& wf) {
    os << "# kind=" << to_string(wf.kind)
       << " units=" << (wf.kind == WaveformKind::Detuning ? "GHz" : "Phi0") << '\n';
    os << "t_ns,value\n";
    for (std::size_t k = 0; k < wf.values.size(); ++k) {
        os << io::fmt(wf.times_ns[k]) << ',' << io::fmt(wf.values[k]) << '\n';
    }
}

}  // namespace bbq
