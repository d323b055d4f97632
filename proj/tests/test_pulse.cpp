#include <doctest.h>

#include "bbq/errors.hpp"
#include "bbq/presets.hpp"
#include "bbq/pulse.hpp"
#include "bbq/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace bbq;

TEST_CASE("quantization angle") {
    CHECK(quantization_angle(0.0, 0.1) == 0.0);
    CHECK(quantization_angle(0.2, 0.1) == doctest::Approx(std::numbers::pi / 4));
    CHECK(quantization_angle(1.8, 0.125) == doctest::Approx(1.43276).epsilon(1e-4));
    CHECK(quantization_angle(1.8, 0.125) == doctest::Approx(std::atan(7.2)).epsilon(1e-14));
}

TEST_CASE("adiabatic shape contract") {
    PulseParams p;
    p.delta1_ghz = 2.2;
    p.delta2_ghz = 0.31;
    p.half_length_ns = 23.0;
    CHECK(adiabatic_shape(p, -23.0) == 2.2);
    CHECK(adiabatic_shape(p, 23.0) == 2.2);
    CHECK(adiabatic_shape(p, 0.0) == 0.31);
    CHECK(adiabatic_shape(p, 7.0) == adiabatic_shape(p, -7.0));
    CHECK_THROWS_AS(adiabatic_shape(p, 23.5), DomainError);

    // Reference θ(t) from the closed form F(t) = 2at·atan(at) − ln(1 + a²t²).
    const double a = p.turn_rate_per_ns, l = p.half_length_ns;
    auto big_f = [&](double t) { return 2 * a * t * std::atan(a * t) - std::log1p(a * a * t * t); };
    const double th1 = std::atan(p.delta1_ghz / (2 * p.g_eff_ghz));
    const double th2 = std::atan(p.delta2_ghz / (2 * p.g_eff_ghz));
    for (double t : {-20.0, -5.5, 1.0, 13.0}) {
        const double th = (th1 - th2) * big_f(t) / big_f(l) + th2;
        CHECK(adiabatic_shape(p, t) == doctest::Approx(2 * p.g_eff_ghz * std::tan(th)).epsilon(1e-12));
    }

    PulseParams flat = p;
    flat.delta2_ghz = flat.delta1_ghz;
    for (double t : {-23.0, -3.0, 0.0, 11.0}) CHECK(adiabatic_shape(flat, t) == doctest::Approx(2.2));
}

TEST_CASE("angular rate is proportional to atan(a t)") {
    PulseParams p = presets::pair1_pulse();
    const double c = shape_rate_constant(p);
    const double h = 1e-4;
    double worst = 0.0;
    for (double t = -29.0; t <= 29.0; t += 0.5) {
        if (std::abs(t) < 1e-9) continue;
        const double rate = (quantization_angle(adiabatic_shape(p, t + h), p.g_eff_ghz) -
                             quantization_angle(adiabatic_shape(p, t - h), p.g_eff_ghz)) / (2 * h);
        const double model = c * std::atan(p.turn_rate_per_ns * t);
        worst = std::max(worst, std::abs(rate / model - 1.0));
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("sampling") {
    PulseParams p;
    p.half_length_ns = 23.0;
    p.sample_dt_ns = 0.1;
    const auto wf = sample_pulse(p);
    REQUIRE(wf.values.size() == 461);
    CHECK(wf.values.front() == p.delta1_ghz);
    CHECK(wf.values.back() == p.delta1_ghz);
    CHECK(wf.values[230] == p.delta2_ghz);
    CHECK(wf.duration_ns() == doctest::Approx(46.0));
    // Δ decreases toward the middle, so the largest excursion from Δ₁ is at the middle.
    std::size_t arg = 0;
    for (std::size_t k = 0; k < wf.values.size(); ++k) {
        if (std::abs(wf.values[k] - p.delta1_ghz) > std::abs(wf.values[arg] - p.delta1_ghz)) arg = k;
    }
    CHECK(arg == 230);

    PulseParams fine = p;
    fine.sample_dt_ns = 0.05;
    const auto wf2 = sample_pulse(fine);
    REQUIRE(wf2.values.size() == 921);
    double diff = 0.0;
    for (std::size_t k = 0; k < wf.values.size(); ++k) diff = std::max(diff, std::abs(wf.values[k] - wf2.values[2 * k]));
    CHECK(diff < 1e-12);

    PulseParams coarse = p;
    coarse.sample_dt_ns = 10.0;
    CHECK_THROWS_AS(sample_pulse(coarse), ResolutionError);
    PulseParams bad = p;
    bad.delta2_ghz = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("double pulse") {
    PulseParams p;
    p.half_length_ns = 10.0;
    const auto single = sample_pulse(p);
    const auto zero = compose_double_pulse(p, 0.0);
    CHECK(zero.duration_ns() == doctest::Approx(40.0));
    const auto fifty = compose_double_pulse(p, 50.0);
    CHECK(fifty.duration_ns() == doctest::Approx(90.0));
    CHECK(fifty.delay_ns == doctest::Approx(50.0));
    for (std::size_t k = 0; k < fifty.times_ns.size(); ++k) {
        const double t = fifty.times_ns[k];
        if (t >= 20.0 - 1e-9 && t <= 70.0 + 1e-9) CHECK(fifty.values[k] == p.delta1_ghz);
    }
    const double area = waveform_area(single, p.delta1_ghz);
    CHECK(waveform_area(zero, p.delta1_ghz) == doctest::Approx(2 * area).epsilon(1e-12));
    CHECK(waveform_area(fifty, p.delta1_ghz) == doctest::Approx(2 * area).epsilon(1e-12));
    CHECK(compose_double_pulse(p, 12.34).delay_ns == doctest::Approx(12.3));
}

TEST_CASE("flux conversion") {
    const DeviceSpec dev = presets::pair1_like();
    const double anchor = dev.mode(Mode::Q1).frequency_ghz;
    const auto flat = constant_waveform(presets::pair1_pulse().delta1_ghz, 10.0, 0.1);
    const auto flux_flat = to_flux_waveform(flat, anchor, *dev.squid);
    for (double v : flux_flat.values) CHECK(v == flux_flat.values.front());

    const auto wf = sample_pulse(presets::pair1_pulse());
    const auto flux = to_flux_waveform(wf, anchor, *dev.squid);
    CHECK(flux.kind == WaveformKind::Flux);
    const auto back = to_detuning_waveform(flux, anchor, *dev.squid);
    const auto again = to_flux_waveform(back, anchor, *dev.squid);
    double worst = 0.0;
    for (std::size_t k = 0; k < flux.values.size(); ++k) {
        worst = std::max(worst, std::abs(again.values[k] - flux.values[k]));
        CHECK(back.values[k] == doctest::Approx(wf.values[k]).epsilon(1e-9));
    }
    CHECK(worst < 1e-9);

    const SquidSpec fixed{4.55, 1.0, 0.0};
    CHECK_THROWS_AS(to_flux_waveform(wf, anchor, fixed), RangeError);
    const auto at_max = constant_waveform(anchor - 4.55, 2.0, 0.1);
    CHECK_NOTHROW(to_flux_waveform(at_max, anchor, fixed));
}

TEST_CASE("waveform CSV") {
    PulseParams p;
    p.half_length_ns = 1.0;
    p.sample_dt_ns = 0.25;
    std::ostringstream os;
    write_waveform_csv(os, sample_pulse(p));
    const std::string s = os.str();
    CHECK(s.rfind("# kind=detuning units=GHz\nt_ns,value\n", 0) == 0);
    CHECK(s.find('\r') == std::string::npos);
    CHECK(s.find("0,0.25\n") != std::string::npos);
}
