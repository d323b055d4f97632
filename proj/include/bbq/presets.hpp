// presets.hpp: named parameter sets used by the CLI, tests and README.
#pragma once

#include "bbq/hilbert.hpp"
#include "bbq/pulse.hpp"

#include <string>
#include <vector>

namespace bbq::presets {

/// Model family of the tunable-bus study: ω_Q1 = 5 GHz, ω_Q2 = ω_Q1 − detuning,
/// δ_Q = −240 MHz, δ_bus = −140 MHz, g_{Q,bus} = 110 MHz, four levels per mode.
/// Bus below the qubits with g_{Q1,Q2} = −6 MHz.
DeviceSpec bbq(double qubit_detuning_ghz = 0.09);
/// Same family, bus above the qubits with g_{Q1,Q2} = +6 MHz.
DeviceSpec baq(double qubit_detuning_ghz = 0.09);

/// Pair-1-like device: lower qubit Q1 at 4.65 GHz, Q2 351 MHz above, couplings
/// 130/120/−4 MHz, asymmetric SQUID bus (f_max 4.55 GHz, d = 0.2).
DeviceSpec pair1_like();
/// Idle bus frequency of pair1_like() (minimum of |ZZ|, below the qubits).
inline constexpr double kPair1IdleBusGhz = 2.19266;
/// Calibration seed for pair1_like(): l = 30 ns, a = 0.3/ns, g_eff = 1.2·g_{Q1,bus}.
PulseParams pair1_pulse();

/// Near-degenerate pair (9 MHz detuning), couplings 80/80/−4 MHz.
DeviceSpec pair8_like();
PulseParams pair8_pulse();

std::vector<std::string> device_names();
DeviceSpec device(const std::string& name);

}  // namespace bbq::presets
