#include "bbq/presets.hpp"

#include "bbq/errors.hpp"

namespace bbq::presets {

namespace {

DeviceSpec family(double q1, double q2, double bus, double g1, double g2, double g12) {
    DeviceSpec d;
    d.modes = {{Mode::Q1, q1, -0.24, 4}, {Mode::Q2, q2, -0.24, 4}, {Mode::Bus, bus, -0.14, 4}};
    d.couplings = {{Mode::Q1, Mode::Bus, g1}, {Mode::Q2, Mode::Bus, g2}, {Mode::Q1, Mode::Q2, g12}};
    return d;
}

}  // namespace

DeviceSpec bbq(double qubit_detuning_ghz) {
    return family(5.0, 5.0 - qubit_detuning_ghz, 3.0, 0.11, 0.11, -0.006);
}

DeviceSpec baq(double qubit_detuning_ghz) {
    return family(5.0, 5.0 - qubit_detuning_ghz, 7.0, 0.11, 0.11, 0.006);
}

DeviceSpec pair1_like() {
    DeviceSpec d = family(4.65, 5.001, kPair1IdleBusGhz, 0.13, 0.12, -0.004);
    d.squid = SquidSpec{4.55, 0.2, 0.0};
    return d;
}

PulseParams pair1_pulse() {
    PulseParams p;
    p.delta1_ghz = 4.65 - kPair1IdleBusGhz;
    p.delta2_ghz = 0.243;
    p.g_eff_ghz = 1.2 * 0.13;
    p.turn_rate_per_ns = 0.3;
    p.half_length_ns = 30.0;
    p.sample_dt_ns = 0.1;
    return p;
}

DeviceSpec pair8_like() { return family(4.991, 5.0, 3.7, 0.08, 0.08, -0.004); }

PulseParams pair8_pulse() {
    PulseParams p;
    p.delta1_ghz = 4.991 - 3.7;
    p.delta2_ghz = 0.10;
    p.g_eff_ghz = 1.2 * 0.08;
    p.turn_rate_per_ns = 1.0;
    p.half_length_ns = 10.0;
    p.sample_dt_ns = 0.1;
    return p;
}

std::vector<std::string> device_names() { return {"bbq", "baq", "pair1-like", "pair8-like"}; }

DeviceSpec device(const std::string& name) {
    if (name == "bbq") return bbq();
    if (name == "baq") return baq();
    if (name == "pair1-like") return pair1_like();
    if (name == "pair8-like") return pair8_like();
    throw ConfigError("unknown device preset '" + name + "'");
}

}  // namespace bbq::presets
