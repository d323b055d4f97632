#include "bbq/rb.hpp"

#include "bbq/clifford.hpp"
#include "bbq/dynamics.hpp"
#include "bbq/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace bbq {

namespace {

using cd = std::complex<double>;
using Mat5 = Eigen::Matrix<cd, 5, 5>;

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

Mat5 embed(const Eigen::Matrix4cd& u) {
    Mat5 m = Mat5::Zero();
    m.topLeftCorner<4, 4>() = u;
    m(4, 4) = 1.0;
    return m;
}

// Noisy CZ as a list of Kraus operators plus an optional depolarizing step.
struct CzChannel {
    std::vector<Mat5> kraus;
    double depolarizing_p = 1.0;

    explicit CzChannel(const NoiseModel& noise) {
        Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
        cz(3, 3) = -1.0;
        switch (noise.kind) {
            case NoiseKind::Ideal: kraus.push_back(embed(cz)); break;
            case NoiseKind::Depolarizing:
                kraus.push_back(embed(cz));
                depolarizing_p = 1.0 - 4.0 * noise.cz_error / 3.0;
                break;
            case NoiseKind::CustomKraus: {
                const Eigen::Matrix4cd& m = noise.cz_operator;
                Mat5 k0 = Mat5::Zero();
                k0.topLeftCorner<4, 4>() = m;
                k0(4, 4) = 1.0;
                kraus.push_back(k0);
                const Eigen::Matrix4cd loss = Eigen::Matrix4cd::Identity() - m.adjoint() * m;
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (loss + loss.adjoint()));
                for (int j = 0; j < 4; ++j) {
                    const double lam = es.eigenvalues()(j);
                    if (lam <= 1e-15) continue;
                    Mat5 k = Mat5::Zero();
                    k.row(4).head<4>() = std::sqrt(lam) * es.eigenvectors().col(j).adjoint();
                    kraus.push_back(k);
                }
                break;
            }
        }
    }

    void apply(Mat5& rho) const {
        if (kraus.size() == 1) {
            rho = kraus[0] * rho * kraus[0].adjoint();
        } else {
            Mat5 out = Mat5::Zero();
            for (const auto& k : kraus) out += k * rho * k.adjoint();
            rho = out;
        }
        if (depolarizing_p != 1.0) {
            const double p = depolarizing_p;
            const cd tr = rho.topLeftCorner<4, 4>().trace();
            rho.topLeftCorner<4, 4>() *= p;
            rho.topLeftCorner<4, 4>().diagonal().array() += (1.0 - p) * tr / 4.0;
            rho.col(4).head<4>() *= p;
            rho.row(4).head<4>() *= p;
        }
    }
};

void apply_unitary(Mat5& rho, const Eigen::Matrix4cd& u) {
    const Mat5 m = embed(u);
    rho = m * rho * m.adjoint();
}

void apply_element(Mat5& rho, const CliffordElement& e, const CzChannel& cz) {
    for (std::size_t j = 0; j < e.layers.size(); ++j) {
        if (j > 0) cz.apply(rho);
        apply_unitary(rho, e.layers[j]);
    }
}

double outcome_00(const Mat5& rho, const RBConfig& config) {
    Eigen::Vector4d probs;
    for (int i = 0; i < 4; ++i) probs(i) = std::max(0.0, rho(i, i).real());
    if (config.readout_confusion) {
        probs = (*config.readout_confusion) * probs;
        if (config.readout_correct) {
            const double total = probs.sum();
            if (total > 0.0) {
                probs = readout_correction(probs / total, *config.readout_confusion).corrected * total;
            }
        }
    }
    return probs(0);
}

std::uint64_t stream_id(int depth, int sequence) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(depth)) << 32) |
           static_cast<std::uint32_t>(sequence);
}

RBResult run(const NoiseModel& noise, const RBConfig& config, bool interleaved) {
    noise.validate();
    config.validate();
    const auto& group = CliffordGroup::instance();
    const std::size_t nd = config.depths.size();
    const auto ns = static_cast<std::size_t>(config.sequences_per_depth);
    std::vector<double> values(nd * ns);
    numeric::parallel_for(nd * ns, config.threads, [&](std::size_t cell) {
        const std::size_t i = cell / ns;
        const std::size_t j = cell % ns;
        const int depth = config.depths[i];
        // Reference and interleaved runs draw identical Clifford sequences.
        CounterRng rng(config.seed, stream_id(depth, static_cast<int>(j)));
        std::vector<std::size_t> seq(static_cast<std::size_t>(depth));
        for (auto& s : seq) s = static_cast<std::size_t>(rng.uniform_index(group.size()));
        values[cell] = sequence_survival(noise, seq, interleaved, config);
    });

    RBResult r;
    r.depths = config.depths;
    r.interleaved = interleaved;
    r.seed = config.seed;
    r.sequences_per_depth = config.sequences_per_depth;
    std::vector<double> x;
    for (std::size_t i = 0; i < nd; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < ns; ++j) mean += values[i * ns + j];
        mean /= static_cast<double>(ns);
        double var = 0.0;
        for (std::size_t j = 0; j < ns; ++j) var += std::pow(values[i * ns + j] - mean, 2);
        const double sem = ns > 1 ? std::sqrt(var / static_cast<double>(ns - 1) / static_cast<double>(ns)) : 0.0;
        r.survival.push_back(std::clamp(mean, 0.0, 1.0));
        r.survival_sem.push_back(sem);
        x.push_back(static_cast<double>(config.depths[i]));
    }
    r.fit = fit_decay(x, r.survival);
    r.epc = epc_from_p(r.fit.p);
    r.epg_bound = epg_bound(r.epc, decomposition_stats().avg_cz);
    return r;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += kGamma;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(splitmix64(seed ^ splitmix64(stream))) {}

std::uint64_t CounterRng::next() {
    state_ += kGamma;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t CounterRng::uniform_index(std::uint64_t n) {
    if (n == 0) throw ConfigError("uniform_index needs n > 0");
    const std::uint64_t bucket = std::numeric_limits<std::uint64_t>::max() / n;
    while (true) {
        const std::uint64_t r = next() / bucket;
        if (r < n) return r;
    }
}

double CounterRng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::Ideal: return "ideal";
        case NoiseKind::Depolarizing: return "depolarizing";
        case NoiseKind::CustomKraus: return "custom-kraus";
    }
    return "?";
}

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "ideal") return NoiseKind::Ideal;
    if (name == "depolarizing") return NoiseKind::Depolarizing;
    if (name == "custom-kraus") return NoiseKind::CustomKraus;
    throw ConfigError("unknown noise model '" + name +
                      "' (expected ideal, depolarizing or custom-kraus)");
}

NoiseModel NoiseModel::ideal() { return {}; }

NoiseModel NoiseModel::depolarizing(double cz_error) {
    NoiseModel n;
    n.kind = NoiseKind::Depolarizing;
    n.cz_error = cz_error;
    n.validate();
    return n;
}

NoiseModel NoiseModel::from_gate_report(const GateReport& report) {
    NoiseModel n;
    n.kind = NoiseKind::CustomKraus;
    n.cz_operator = report.projected;
    n.validate();
    return n;
}

void NoiseModel::validate() const {
    if (kind == NoiseKind::Depolarizing && !(cz_error >= 0.0 && cz_error <= 0.75)) {
        throw ConfigError("noise.cz_error must lie in [0, 0.75]");
    }
    if (kind == NoiseKind::CustomKraus) {
        const Eigen::Matrix4cd g = cz_operator.adjoint() * cz_operator;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (g + g.adjoint()), Eigen::EigenvaluesOnly);
        if (!cz_operator.allFinite() || es.eigenvalues().maxCoeff() > 1.0 + 1e-9) {
            throw ConfigError("noise.cz_operator must be a contraction (singular values <= 1)");
        }
    }
}

double clifford_depolarizing_parameter(double p_cz) {
    const auto s = decomposition_stats();
    double acc = 0.0;
    for (std::size_t k = 0; k < 4; ++k) acc += static_cast<double>(s.elements_by_cz[k]) * std::pow(p_cz, static_cast<double>(k));
    return acc / static_cast<double>(s.size);
}

DecayFit fit_decay(const std::vector<double>& depths, const std::vector<double>& survival) {
    if (depths.size() != survival.size()) {
        throw ConfigError("depths and survival lengths differ");
    }
    std::vector<double> distinct = depths;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) throw ConfigError("fit_decay needs at least 3 distinct depths");
    for (std::size_t k = 0; k < survival.size(); ++k) {
        if (!std::isfinite(survival[k]) || !std::isfinite(depths[k]) || depths[k] < 0) {
            throw ConfigError("survival/depth " + std::to_string(k) + " is invalid");
        }
    }
    const auto [mn, mx] = std::minmax_element(survival.begin(), survival.end());
    if (*mx - *mn <= 1e-9) {
        if (*mn <= 0.25) throw DecayFitError("flat survival at or below 1/4: decay is not resolvable");
        DecayFit f;
        f.p = 1.0;
        f.B = 0.25;
        f.A = std::min(1.0, *mn - 0.25);
        f.covariance_ok = false;
        return f;
    }

    // Initial guess from the extreme depths.
    std::size_t first = 0, last = 0;
    for (std::size_t k = 0; k < depths.size(); ++k) {
        if (depths[k] < depths[first]) first = k;
        if (depths[k] > depths[last]) last = k;
    }
    const double b0 = 0.25;
    const double a0 = std::clamp(survival[first] - b0, 1e-3, 1.0);
    double p0 = 0.99;
    const double y1 = survival[first] - b0;
    const double y2 = survival[last] - b0;
    if (y1 > 0 && y2 > 0 && depths[last] > depths[first]) {
        p0 = std::pow(y2 / y1, 1.0 / (depths[last] - depths[first]));
    }
    p0 = std::clamp(p0, 1e-6, 1.0);

    auto residual = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd r(static_cast<Eigen::Index>(depths.size()));
        for (std::size_t k = 0; k < depths.size(); ++k) {
            r(static_cast<Eigen::Index>(k)) = x(0) * std::pow(x(1), depths[k]) + x(2) - survival[k];
        }
        return r;
    };
    numeric::LeastSquaresOptions o;
    o.lower = Eigen::Vector3d(0.0, 1e-12, 0.0);
    o.upper = Eigen::Vector3d(1.0, 1.0, 1.0);
    o.relative_step = 1e-7;
    o.step_tolerance = 1e-14;
    o.cost_tolerance = 1e-20;
    o.gradient_tolerance = 1e-20;
    const auto res = numeric::levenberg_marquardt(residual, Eigen::Vector3d(a0, p0, b0), o);
    if (!res.converged) throw DecayFitError("decay fit did not converge: " + res.message);
    DecayFit f;
    f.A = res.x(0);
    f.p = res.x(1);
    f.B = res.x(2);
    f.residual_norm = res.residual.norm();
    if (auto se = numeric::standard_errors(res.jacobian, res.residual)) {
        f.A_err = (*se)(0);
        f.p_err = (*se)(1);
        f.B_err = (*se)(2);
    } else {
        f.covariance_ok = false;
    }
    return f;
}

double epc_from_p(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("p must lie in (0, 1]");
    return 0.75 * (1.0 - p);
}

double epg_bound(double epc, double avg_cz) {
    if (!(avg_cz > 0.0)) throw DomainError("avg_cz must be positive");
    return epc / avg_cz;
}

ReadoutCorrection readout_correction(const Eigen::Vector4d& raw, const Eigen::Matrix4d& confusion) {
    for (int j = 0; j < 4; ++j) {
        if (std::abs(confusion.col(j).sum() - 1.0) > 1e-9 || (confusion.col(j).array() < 0.0).any()) {
            throw ConfigError("confusion column " + std::to_string(j) +
                              " must be non-negative and sum to 1");
        }
    }
    Eigen::FullPivLU<Eigen::Matrix4d> lu(confusion);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-12) {
        throw CorrectionError("confusion matrix is singular");
    }
    Eigen::Vector4d x = lu.solve(raw);
    ReadoutCorrection out;
    for (int i = 0; i < 4; ++i) {
        if (x(i) < 0.0) {
            out.residual += -x(i);
            x(i) = 0.0;
        }
    }
    const double total = x.sum();
    if (!(total > 0.0)) throw CorrectionError("corrected probabilities vanish after clipping");
    out.corrected = x / total;
    return out;
}

void RBConfig::validate() const {
    if (depths.empty()) throw ConfigError("rb.depths must be nonempty");
    for (std::size_t k = 0; k < depths.size(); ++k) {
        if (depths[k] < 0) throw ConfigError("rb.depths[" + std::to_string(k) + "] must be >= 0");
    }
    if (sequences_per_depth < 1) throw ConfigError("rb.sequences_per_depth must be >= 1");
    if (readout_confusion) {
        for (int j = 0; j < 4; ++j) {
            if (std::abs(readout_confusion->col(j).sum() - 1.0) > 1e-9) {
                throw ConfigError("rb.readout.confusion column " + std::to_string(j) + " must sum to 1");
            }
        }
    }
}

double sequence_survival(const NoiseModel& noise, const std::vector<std::size_t>& elements,
                         bool interleave_cz, const RBConfig& config) {
    const auto& group = CliffordGroup::instance();
    const CzChannel cz(noise);
    Eigen::Matrix4cd czu = Eigen::Matrix4cd::Identity();
    czu(3, 3) = -1.0;
    Mat5 rho = Mat5::Zero();
    rho(0, 0) = 1.0;
    std::size_t net = group.identity_index();
    for (std::size_t idx : elements) {
        const CliffordElement& e = group[idx];
        apply_element(rho, e, cz);
        net = group.find(e.unitary * group[net].unitary);
        if (interleave_cz) {
            cz.apply(rho);
            net = group.find(czu * group[net].unitary);
        }
    }
    const std::size_t recovery = group.find(group[net].unitary.adjoint());
    apply_element(rho, group[recovery], cz);
    return outcome_00(rho, config);
}

RBResult simulate_rb(const NoiseModel& noise, const RBConfig& config) {
    return run(noise, config, false);
}

IRBResult simulate_irb(const NoiseModel& noise, const RBConfig& config) {
    IRBResult out;
    out.reference = run(noise, config, false);
    out.interleaved = run(noise, config, true);
    const double pr = out.reference.fit.p;
    const double pi = out.interleaved.fit.p;
    out.epg = 0.75 * (1.0 - pi / pr);
    const double rel = std::hypot(out.interleaved.fit.p_err / pi, out.reference.fit.p_err / pr);
    out.epg_err = 0.75 * (pi / pr) * rel;
    out.unphysical = pi > pr + std::hypot(out.interleaved.fit.p_err, out.reference.fit.p_err);
    return out;
}

}  // namespace bbq
