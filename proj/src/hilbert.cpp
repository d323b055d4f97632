#include "bbq/hilbert.hpp"

#include "bbq/errors.hpp"

#include <cmath>
#include <complex>

namespace bbq {

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Mat<Scalar> kron(const Mat<Scalar>& a, const Mat<Scalar>& b) {
    Mat<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

template <typename Scalar>
Mat<Scalar> embed(const Mat<Scalar>& op, int slot, const std::array<int, 3>& levels) {
    std::array<Mat<Scalar>, 3> factors;
    for (int k = 0; k < 3; ++k) {
        factors[k] = (k == slot) ? op : Mat<Scalar>::Identity(levels[k], levels[k]);
    }
    return kron<Scalar>(kron<Scalar>(factors[0], factors[1]), factors[2]);
}

template <typename Scalar>
Mat<Scalar> assemble(const DeviceSpec& spec, std::optional<double> bus_override) {
    spec.validate();
    const auto levels = spec.levels();
    const int dim = spec.dimension();
    Mat<Scalar> h = Mat<Scalar>::Zero(dim, dim);
    std::array<Mat<Scalar>, 3> quadrature;
    for (int k = 0; k < 3; ++k) {
        ModeSpec mode = spec.mode(static_cast<Mode>(k));
        if (k == static_cast<int>(Mode::Bus) && bus_override) {
            mode.frequency_ghz = *bus_override;
        }
        h += embed<Scalar>(mode_hamiltonian(mode).template cast<Scalar>(), k, levels);
        const auto ops = ladder_operators(mode.levels);
        Mat<Scalar> lowering = ops.lowering.template cast<Scalar>();
        Mat<Scalar> raising = lowering.adjoint();
        quadrature[k] = embed<Scalar>(Mat<Scalar>(raising + lowering), k, levels);
    }
    for (const auto& c : spec.couplings) {
        const int i = static_cast<int>(c.a);
        const int j = static_cast<int>(c.b);
        h += Scalar(kTwoPi * c.strength_ghz) * (quadrature[i] * quadrature[j]);
    }
    return h;
}

}  // namespace

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::Q1: return "Q1";
        case Mode::Q2: return "Q2";
        case Mode::Bus: return "BUS";
    }
    return "?";
}

Mode mode_from_string(const std::string& name) {
    if (name == "Q1" || name == "q1") return Mode::Q1;
    if (name == "Q2" || name == "q2") return Mode::Q2;
    if (name == "BUS" || name == "bus" || name == "Bus") return Mode::Bus;
    throw ConfigError("unknown mode label '" + name + "' (expected Q1, Q2 or BUS)");
}

void SquidSpec::validate() const {
    if (!(f_max_ghz > 0.0) || !std::isfinite(f_max_ghz)) {
        throw ConfigError("squid.f_max_ghz must be positive");
    }
    if (!(asymmetry >= 0.0 && asymmetry <= 1.0)) {
        throw ConfigError("squid.asymmetry must lie in [0, 1]");
    }
    if (!std::isfinite(flux_offset)) {
        throw ConfigError("squid.flux_offset_phi0 must be finite");
    }
}

void DeviceSpec::validate() const {
    if (modes.size() != 3) {
        throw ConfigError("device must define exactly three modes (Q1, Q2, BUS)");
    }
    std::array<int, 3> seen{0, 0, 0};
    for (const auto& m : modes) {
        seen[static_cast<int>(m.label)]++;
        if (m.levels < 2) {
            throw DimensionError("mode " + to_string(m.label) + ": levels must be >= 2");
        }
        if (!std::isfinite(m.frequency_ghz) || !std::isfinite(m.anharmonicity_ghz)) {
            throw ConfigError("mode " + to_string(m.label) + ": non-finite parameter");
        }
        if (!(m.anharmonicity_ghz < 0.0)) {
            throw ConfigError("mode " + to_string(m.label) +
                              ": anharmonicity_ghz must be negative for a transmon");
        }
    }
    for (int k = 0; k < 3; ++k) {
        if (seen[k] != 1) {
            throw ConfigError("mode " + to_string(static_cast<Mode>(k)) +
                              " must appear exactly once");
        }
    }
    for (std::size_t i = 0; i < couplings.size(); ++i) {
        const auto& c = couplings[i];
        if (c.a == c.b) {
            throw ConfigError("coupling " + std::to_string(i) + " joins " + to_string(c.a) +
                              " to itself");
        }
        if (!std::isfinite(c.strength_ghz)) {
            throw ConfigError("coupling " + std::to_string(i) + ": non-finite strength");
        }
        for (std::size_t j = 0; j < i; ++j) {
            const auto& o = couplings[j];
            if ((o.a == c.a && o.b == c.b) || (o.a == c.b && o.b == c.a)) {
                throw ConfigError("duplicate coupling for pair " + to_string(c.a) + "-" +
                                  to_string(c.b));
            }
        }
    }
    if (squid) squid->validate();
}

const ModeSpec& DeviceSpec::mode(Mode label) const {
    for (const auto& m : modes) {
        if (m.label == label) return m;
    }
    throw ConfigError("device has no mode " + to_string(label));
}

ModeSpec& DeviceSpec::mode(Mode label) {
    for (auto& m : modes) {
        if (m.label == label) return m;
    }
    throw ConfigError("device has no mode " + to_string(label));
}

double DeviceSpec::coupling(Mode a, Mode b) const {
    for (const auto& c : couplings) {
        if ((c.a == a && c.b == b) || (c.a == b && c.b == a)) return c.strength_ghz;
    }
    return 0.0;
}

void DeviceSpec::set_coupling(Mode a, Mode b, double strength_ghz) {
    for (auto& c : couplings) {
        if ((c.a == a && c.b == b) || (c.a == b && c.b == a)) {
            c.strength_ghz = strength_ghz;
            return;
        }
    }
    couplings.push_back({a, b, strength_ghz});
}

std::array<int, 3> DeviceSpec::levels() const {
    return {mode(Mode::Q1).levels, mode(Mode::Q2).levels, mode(Mode::Bus).levels};
}

int DeviceSpec::dimension() const {
    const auto l = levels();
    return l[0] * l[1] * l[2];
}

std::string BareLabel::str() const {
    return std::to_string(q1) + std::to_string(q2) + ";" + std::to_string(bus);
}

int basis_index(const std::array<int, 3>& levels, const BareLabel& label) {
    if (label.q1 < 0 || label.q1 >= levels[0] || label.q2 < 0 || label.q2 >= levels[1] ||
        label.bus < 0 || label.bus >= levels[2]) {
        throw DimensionError("bare label " + label.str() + " exceeds the truncation");
    }
    return (label.q1 * levels[1] + label.q2) * levels[2] + label.bus;
}

BareLabel basis_label(const std::array<int, 3>& levels, int index) {
    BareLabel out;
    out.bus = index % levels[2];
    out.q2 = (index / levels[2]) % levels[1];
    out.q1 = index / (levels[1] * levels[2]);
    return out;
}

LadderOperators ladder_operators(int levels) {
    if (levels < 2) {
        throw DimensionError("ladder operators need levels >= 2, got " + std::to_string(levels));
    }
    LadderOperators ops;
    ops.lowering = Eigen::MatrixXd::Zero(levels, levels);
    ops.number = Eigen::MatrixXd::Zero(levels, levels);
    for (int n = 1; n < levels; ++n) {
        ops.lowering(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    for (int n = 0; n < levels; ++n) ops.number(n, n) = n;
    ops.raising = ops.lowering.transpose();
    return ops;
}

Eigen::MatrixXd mode_hamiltonian(const ModeSpec& mode) {
    if (mode.levels < 2) {
        throw DimensionError("mode " + to_string(mode.label) + ": levels must be >= 2");
    }
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(mode.levels, mode.levels);
    for (int n = 0; n < mode.levels; ++n) {
        h(n, n) = kTwoPi * (mode.frequency_ghz * n + 0.5 * mode.anharmonicity_ghz * n * (n - 1));
    }
    return h;
}

Eigen::MatrixXd total_hamiltonian(const DeviceSpec& spec, std::optional<double> bus_override) {
    return assemble<double>(spec, bus_override);
}

Eigen::MatrixXcd total_hamiltonian_complex(const DeviceSpec& spec,
                                           std::optional<double> bus_override) {
    return assemble<std::complex<double>>(spec, bus_override);
}

SystemModel::SystemModel(const DeviceSpec& spec) : spec_(spec) {
    spec_.validate();
    levels_ = spec_.levels();
    // Evaluate at bus frequency 0 so the bus contribution is the anharmonic part only.
    fixed_ = total_hamiltonian(spec_, 0.0);
    const int dim = spec_.dimension();
    bus_number_.resize(dim);
    for (int i = 0; i < dim; ++i) bus_number_(i) = basis_label(levels_, i).bus;
}

Eigen::MatrixXd SystemModel::hamiltonian(double bus_frequency_ghz) const {
    Eigen::MatrixXd h = fixed_;
    h.diagonal() += (kTwoPi * bus_frequency_ghz) * bus_number_;
    return h;
}

}  // namespace bbq
