// clifford.hpp: two-qubit Clifford group over {Xπ, Xπ/2, Z(±π), Z(±π/2), CZ}
// with CZ-minimal, then non-Z-minimal decompositions.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace bbq {

enum class GateKind { X180, X90, Z180, Z90, ZMinus90, CZ };

struct Gate {
    GateKind kind = GateKind::CZ;
    int qubit = 0;  // 1 or 2 for single-qubit gates, 0 for CZ
    bool operator==(const Gate&) const = default;
};

/// Gates in application order (first element acts first).
using GateSeq = std::vector<Gate>;

std::string to_string(const Gate& gate);
std::string to_string(const GateSeq& seq);

bool is_virtual_z(const Gate& gate);

/// 4×4 unitary in the |q1 q2⟩ basis (index 2·q1 + q2).
Eigen::Matrix4cd gate_unitary(const Gate& gate);
Eigen::Matrix4cd sequence_unitary(const GateSeq& seq);

struct CliffordElement {
    GateSeq sequence;
    Eigen::Matrix4cd unitary;
    /// Single-qubit layers between CZs: unitary = L_k·CZ·…·CZ·L_0.
    std::vector<Eigen::Matrix4cd> layers;
    int cz_count = 0;
    int non_z_count = 0;
};

class CliffordGroup {
public:
    static const CliffordGroup& instance();

    std::size_t size() const { return elements_.size(); }
    const CliffordElement& operator[](std::size_t i) const { return elements_[i]; }
    const std::vector<CliffordElement>& elements() const { return elements_; }

    /// Index of the element equal to `u` up to global phase; throws if absent.
    std::size_t find(const Eigen::Matrix4cd& u) const;
    bool contains(const Eigen::Matrix4cd& u) const;
    std::size_t identity_index() const { return identity_; }

private:
    CliffordGroup();
    std::vector<CliffordElement> elements_;
    std::vector<std::pair<std::array<long long, 32>, std::size_t>> index_;  // sorted by key
    std::size_t identity_ = 0;
};

const std::vector<CliffordElement>& clifford_group();

struct DecompositionStats {
    std::size_t size = 0;
    double avg_cz = 0.0;
    double avg_non_z_1q = 0.0;
    std::array<std::size_t, 4> elements_by_cz{};  // 0, 1, 2, 3 CZs
};

DecompositionStats decomposition_stats();

/// Phase-canonical rounded key used for projective equality.
std::array<long long, 32> projective_key(const Eigen::Matrix4cd& u);

}  // namespace bbq
