// Truncated bosonic operators and the three-mode transmon Hamiltonian.
//
// Configuration is in linear frequency (GHz). Matrices returned here are in
// angular units (rad/ns, i.e. 2π·GHz) with ħ = 1. The product basis is ordered
// Q1 ⊗ Q2 ⊗ BUS with row-major index composition.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace bbq {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class Mode { Q1 = 0, Q2 = 1, Bus = 2 };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct ModeSpec {
    Mode label = Mode::Q1;
    double frequency_ghz = 5.0;
    double anharmonicity_ghz = -0.24;
    int levels = 4;
};

/// Coupling g/2π between two distinct modes. Order of `a` and `b` is irrelevant.
struct CouplingSpec {
    Mode a = Mode::Q1;
    Mode b = Mode::Bus;
    double strength_ghz = 0.0;
};

/// Asymmetric-SQUID dispersion parameters for the bus.
struct SquidSpec {
    double f_max_ghz = 5.0;
    double asymmetry = 0.0;
    double flux_offset = 0.0;  // Φ_off / Φ0

    void validate() const;
};

struct DeviceSpec {
    std::vector<ModeSpec> modes;
    std::vector<CouplingSpec> couplings;
    std::optional<SquidSpec> squid;

    /// Throws ConfigError/DimensionError when an invariant is violated.
    void validate() const;

    const ModeSpec& mode(Mode label) const;
    ModeSpec& mode(Mode label);
    /// Coupling strength for an unordered pair; 0 when absent.
    double coupling(Mode a, Mode b) const;
    void set_coupling(Mode a, Mode b, double strength_ghz);

    std::array<int, 3> levels() const;
    int dimension() const;
};

/// Bare product-state label |n m; l⟩ (Q1, Q2, BUS occupations).
struct BareLabel {
    int q1 = 0;
    int q2 = 0;
    int bus = 0;

    auto operator<=>(const BareLabel&) const = default;
    std::string str() const;
};

int basis_index(const std::array<int, 3>& levels, const BareLabel& label);
BareLabel basis_label(const std::array<int, 3>& levels, int index);

struct LadderOperators {
    Eigen::MatrixXd lowering;
    Eigen::MatrixXd raising;
    Eigen::MatrixXd number;
};

LadderOperators ladder_operators(int levels);

/// Duffing-mode Hamiltonian 2π(ν n + δ/2 n(n−1)); diagonal.
Eigen::MatrixXd mode_hamiltonian(const ModeSpec& mode);

/// Full Hamiltonian in rad/ns. The override replaces the bus frequency.
Eigen::MatrixXd total_hamiltonian(const DeviceSpec& spec,
                                  std::optional<double> bus_frequency_override = std::nullopt);

/// Same Hamiltonian assembled from complex ladder operators.
Eigen::MatrixXcd total_hamiltonian_complex(
    const DeviceSpec& spec, std::optional<double> bus_frequency_override = std::nullopt);

/// Precomputed split H(ν_bus) = H_fixed + 2π·ν_bus·N_bus for repeated evaluation
/// at many bus frequencies (sweeps, time-dependent propagation).
class SystemModel {
public:
    explicit SystemModel(const DeviceSpec& spec);

    const DeviceSpec& spec() const noexcept { return spec_; }
    int dimension() const noexcept { return static_cast<int>(fixed_.rows()); }
    std::array<int, 3> levels() const noexcept { return levels_; }

    Eigen::MatrixXd hamiltonian(double bus_frequency_ghz) const;
    /// Diagonal of the bus number operator in the product basis.
    const Eigen::VectorXd& bus_number() const noexcept { return bus_number_; }

private:
    DeviceSpec spec_;
    std::array<int, 3> levels_{};
    Eigen::MatrixXd fixed_;
    Eigen::VectorXd bus_number_;
};

}  // namespace bbq
