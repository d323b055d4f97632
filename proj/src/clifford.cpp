#include "bbq/clifford.hpp"

#include "bbq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <unordered_map>
#include <optional>

namespace bbq {

namespace {

using cd = std::complex<double>;

Eigen::Matrix2cd single(GateKind kind) {
    const double r = 1.0 / std::sqrt(2.0);
    const cd i(0.0, 1.0);
    Eigen::Matrix2cd m;
    switch (kind) {
        case GateKind::X180: m << 0.0, -i, -i, 0.0; break;
        case GateKind::X90: m << r, -i * r, -i * r, r; break;
        case GateKind::Z180: m << -i, 0.0, 0.0, i; break;
        case GateKind::Z90: m << std::polar(1.0, -M_PI / 4), 0.0, 0.0, std::polar(1.0, M_PI / 4); break;
        case GateKind::ZMinus90: m << std::polar(1.0, M_PI / 4), 0.0, 0.0, std::polar(1.0, -M_PI / 4); break;
        case GateKind::CZ: throw ConfigError("CZ is not a single-qubit gate");
    }
    return m;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Eigen::Matrix4cd cz_matrix() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    m(3, 3) = -1.0;
    return m;
}

// One single-qubit Clifford with the gates that realize it on a given qubit.
struct OneQubit {
    std::vector<GateKind> gates;  // application order
    Eigen::Matrix2cd u;
    int non_z = 0;
};

std::array<long long, 8> key2(const Eigen::Matrix2cd& u) {
    Eigen::Matrix4cd e = Eigen::Matrix4cd::Zero();
    e.block<2, 2>(0, 0) = u;
    const auto k = projective_key(e);
    std::array<long long, 8> out{};
    std::copy(k.begin(), k.begin() + 4, out.begin());
    std::copy(k.begin() + 8, k.begin() + 12, out.begin() + 4);
    return out;
}

std::vector<OneQubit> single_qubit_cliffords() {
    const std::array<std::optional<GateKind>, 4> zs{std::nullopt, GateKind::Z90, GateKind::Z180,
                                                    GateKind::ZMinus90};
    std::vector<OneQubit> out;
    std::vector<std::array<long long, 8>> seen;
    auto add = [&](std::vector<GateKind> gates, int non_z) {
        Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
        for (GateKind g : gates) u = single(g) * u;
        const auto k = key2(u);
        if (std::find(seen.begin(), seen.end(), k) != seen.end()) return;
        seen.push_back(k);
        out.push_back({std::move(gates), u, non_z});
    };
    for (const auto& z : zs) add(z ? std::vector<GateKind>{*z} : std::vector<GateKind>{}, 0);
    for (GateKind x : {GateKind::X90, GateKind::X180}) {
        for (const auto& before : zs) {
            for (const auto& after : zs) {
                std::vector<GateKind> g;
                if (before) g.push_back(*before);
                g.push_back(x);
                if (after) g.push_back(*after);
                add(g, 1);
            }
        }
    }
    for (GateKind x : {GateKind::X90, GateKind::X180}) {
        for (GateKind y : {GateKind::X90, GateKind::X180}) {
            for (const auto& z0 : zs) {
                for (const auto& z1 : zs) {
                    for (const auto& z2 : zs) {
                        std::vector<GateKind> g;
                        if (z0) g.push_back(*z0);
                        g.push_back(x);
                        if (z1) g.push_back(*z1);
                        g.push_back(y);
                        if (z2) g.push_back(*z2);
                        add(g, 2);
                    }
                }
            }
        }
    }
    if (out.size() != 24) throw NumericalError("single-qubit Clifford enumeration failed");
    return out;
}

struct KeyHash {
    std::size_t operator()(const std::array<long long, 32>& k) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (long long v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
        return h;
    }
};

struct Layer {
    std::size_t a = 0;  // index into the single-qubit table for Q1
    std::size_t b = 0;  // and for Q2
    Eigen::Matrix4cd u;
    int non_z = 0;
};

}  // namespace

std::string to_string(const Gate& gate) {
    const std::string q = std::to_string(gate.qubit);
    switch (gate.kind) {
        case GateKind::X180: return "X180(q" + q + ")";
        case GateKind::X90: return "X90(q" + q + ")";
        case GateKind::Z180: return "Z180(q" + q + ")";
        case GateKind::Z90: return "Z90(q" + q + ")";
        case GateKind::ZMinus90: return "Z-90(q" + q + ")";
        case GateKind::CZ: return "CZ";
    }
    return "?";
}

std::string to_string(const GateSeq& seq) {
    std::string s;
    for (std::size_t k = 0; k < seq.size(); ++k) {
        if (k) s += ' ';
        s += to_string(seq[k]);
    }
    return s;
}

bool is_virtual_z(const Gate& gate) {
    return gate.kind == GateKind::Z180 || gate.kind == GateKind::Z90 ||
           gate.kind == GateKind::ZMinus90;
}

Eigen::Matrix4cd gate_unitary(const Gate& gate) {
    if (gate.kind == GateKind::CZ) return cz_matrix();
    if (gate.qubit == 1) return kron2(single(gate.kind), Eigen::Matrix2cd::Identity());
    if (gate.qubit == 2) return kron2(Eigen::Matrix2cd::Identity(), single(gate.kind));
    throw ConfigError("single-qubit gate needs qubit 1 or 2");
}

Eigen::Matrix4cd sequence_unitary(const GateSeq& seq) {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    for (const Gate& g : seq) u = gate_unitary(g) * u;
    return u;
}

std::array<long long, 32> projective_key(const Eigen::Matrix4cd& u) {
    cd phase(1.0, 0.0);
    for (int k = 0; k < 16; ++k) {
        const cd v = u(k / 4, k % 4);
        if (std::abs(v) > 1e-6) {
            phase = v / std::abs(v);
            break;
        }
    }
    std::array<long long, 32> key{};
    for (int k = 0; k < 16; ++k) {
        const cd v = u(k / 4, k % 4) / phase;
        key[2 * k] = std::llround(v.real() * 1000.0);
        key[2 * k + 1] = std::llround(v.imag() * 1000.0);
    }
    return key;
}

CliffordGroup::CliffordGroup() {
    const auto c1 = single_qubit_cliffords();
    std::vector<Layer> layers;
    layers.reserve(c1.size() * c1.size());
    for (std::size_t a = 0; a < c1.size(); ++a) {
        for (std::size_t b = 0; b < c1.size(); ++b) {
            layers.push_back({a, b, kron2(c1[a].u, c1[b].u), c1[a].non_z + c1[b].non_z});
        }
    }

    // Dynamic programme over CZ count: level k holds elements whose minimal CZ
    // count is k, each reached as L·CZ·(level k−1 element) with the smallest
    // non-Z total. Frontiers are visited in key order so ties resolve the same way
    // on every platform.
    struct Node {
        Eigen::Matrix4cd u;
        int cost = 0;
        int cz = 0;
        std::size_t layer = 0;
        std::optional<std::array<long long, 32>> parent;
    };
    std::unordered_map<std::array<long long, 32>, Node, KeyHash> all;
    std::vector<std::array<long long, 32>> frontier;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto k = projective_key(layers[l].u);
        auto it = all.find(k);
        if (it == all.end()) {
            all.emplace(k, Node{layers[l].u, layers[l].non_z, 0, l, std::nullopt});
            frontier.push_back(k);
        } else if (layers[l].non_z < it->second.cost) {
            it->second = Node{layers[l].u, layers[l].non_z, 0, l, std::nullopt};
        }
    }
    const Eigen::Matrix4cd cz = cz_matrix();
    for (int ncz = 1; ncz <= 3; ++ncz) {
        std::unordered_map<std::array<long long, 32>, Node, KeyHash> next;
        for (const auto& pk : frontier) {
            const Node& prev = all.at(pk);
            const Eigen::Matrix4cd v = cz * prev.u;
            for (std::size_t l = 0; l < layers.size(); ++l) {
                const Eigen::Matrix4cd w = layers[l].u * v;
                const auto k = projective_key(w);
                if (all.count(k)) continue;
                const int cost = prev.cost + layers[l].non_z;
                auto it = next.find(k);
                if (it == next.end()) {
                    next.emplace(k, Node{w, cost, ncz, l, pk});
                } else if (cost < it->second.cost) {
                    it->second = Node{w, cost, ncz, l, pk};
                }
            }
        }
        frontier.clear();
        for (auto& [k, node] : next) {
            frontier.push_back(k);
            all.emplace(k, std::move(node));
        }
        std::sort(frontier.begin(), frontier.end());
    }

    auto append_layer = [&](GateSeq& seq, std::size_t l) {
        for (GateKind g : c1[layers[l].a].gates) seq.push_back({g, 1});
        for (GateKind g : c1[layers[l].b].gates) seq.push_back({g, 2});
    };
    elements_.reserve(all.size());
    index_.reserve(all.size());
    std::vector<std::array<long long, 32>> keys;
    keys.reserve(all.size());
    for (const auto& entry : all) keys.push_back(entry.first);
    std::sort(keys.begin(), keys.end());
    for (const auto& key : keys) {
        const Node& node = all.at(key);
        // Walk parents to recover layers from the innermost (first applied) out.
        std::vector<std::size_t> chain;
        const Node* n = &node;
        while (true) {
            chain.push_back(n->layer);
            if (!n->parent) break;
            n = &all.at(*n->parent);
        }
        std::reverse(chain.begin(), chain.end());
        CliffordElement e;
        e.cz_count = node.cz;
        e.non_z_count = node.cost;
        for (std::size_t j = 0; j < chain.size(); ++j) {
            if (j > 0) e.sequence.push_back({GateKind::CZ, 0});
            append_layer(e.sequence, chain[j]);
            e.layers.push_back(layers[chain[j]].u);
        }
        e.unitary = node.u;
        index_.emplace_back(key, elements_.size());
        elements_.push_back(std::move(e));
    }
    std::sort(index_.begin(), index_.end());
    identity_ = find(Eigen::Matrix4cd::Identity());
}

const CliffordGroup& CliffordGroup::instance() {
    static const CliffordGroup group;
    return group;
}

std::size_t CliffordGroup::find(const Eigen::Matrix4cd& u) const {
    const auto k = projective_key(u);
    auto it = std::lower_bound(index_.begin(), index_.end(), k,
                               [](const auto& entry, const auto& key) { return entry.first < key; });
    if (it == index_.end() || it->first != k) {
        throw NumericalError("unitary is not a two-qubit Clifford");
    }
    return it->second;
}

bool CliffordGroup::contains(const Eigen::Matrix4cd& u) const {
    const auto k = projective_key(u);
    auto it = std::lower_bound(index_.begin(), index_.end(), k,
                               [](const auto& entry, const auto& key) { return entry.first < key; });
    return it != index_.end() && it->first == k;
}

const std::vector<CliffordElement>& clifford_group() { return CliffordGroup::instance().elements(); }

DecompositionStats decomposition_stats() {
    const auto& g = clifford_group();
    DecompositionStats s;
    s.size = g.size();
    long long cz = 0, nz = 0;
    for (const auto& e : g) {
        cz += e.cz_count;
        nz += e.non_z_count;
        s.elements_by_cz[static_cast<std::size_t>(e.cz_count)]++;
    }
    s.avg_cz = static_cast<double>(cz) / static_cast<double>(g.size());
    s.avg_non_z_1q = static_cast<double>(nz) / static_cast<double>(g.size());
    return s;
}

}  // namespace bbq
