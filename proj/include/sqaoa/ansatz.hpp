#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqaoa/problems.hpp"
#include "sqaoa/statevector.hpp"

namespace sqaoa {

enum class AnsatzFamily : std::uint8_t { Qaoa, ZzFree, SQaoa };

inline std::string family_name(AnsatzFamily f) {
    switch (f) {
        case AnsatzFamily::Qaoa: return "qaoa";
        case AnsatzFamily::ZzFree: return "zz_free";
        case AnsatzFamily::SQaoa: return "s_qaoa";
    }
    return "?";
}

inline AnsatzFamily family_from_name(const std::string& s) {
    if (s == "qaoa") return AnsatzFamily::Qaoa;
    if (s == "zz_free" || s == "zz") return AnsatzFamily::ZzFree;
    if (s == "s_qaoa" || s == "sqaoa") return AnsatzFamily::SQaoa;
    throw std::invalid_argument("unknown ansatz family: " + s);
}

// Circuit family descriptor. mixers lists the extra two-body interactions of
// an s_qaoa ansatz in application order; two or more entries give the
// multi-mixer variants (YZ_YY etc.), which are only defined ungathered.
// gathered selects the fused exp(-i w gamma (alpha M + ZZ)) block over the
// separate ZZ-then-M form.
struct AnsatzSpec {
    AnsatzFamily family = AnsatzFamily::SQaoa;
    int layers = 1;
    std::vector<MixerKind> mixers = {MixerKind::YY};
    bool gathered = true;

    void validate() const {
        if (layers < 1) throw std::invalid_argument("layer count must be >= 1");
        const bool has_mixers = !mixers.empty();
        if ((family == AnsatzFamily::SQaoa) != has_mixers) {
            throw std::invalid_argument(
                "mixers must be non-empty exactly for the s_qaoa family");
        }
        for (MixerKind m : mixers) {
            if (m == MixerKind::None) {
                throw std::invalid_argument("mixer list may not contain none");
            }
        }
        if (family == AnsatzFamily::SQaoa && gathered && mixers.size() > 1) {
            throw std::invalid_argument(
                "multi-mixer ansatz is only defined ungathered");
        }
    }

    // label used in records and figure tables: QAOA, ZZ, YY, YZ_YY, ...
    std::string label() const {
        switch (family) {
            case AnsatzFamily::Qaoa: return "QAOA";
            case AnsatzFamily::ZzFree: return "ZZ";
            case AnsatzFamily::SQaoa: break;
        }
        std::string s;
        for (MixerKind m : mixers) {
            if (!s.empty()) s += "_";
            s += mixer_name(m);
        }
        if (!gathered) s += "-ungathered";
        return s;
    }
};

// --- parameter layout ------------------------------------------------------
// qaoa:    (gamma_1..gamma_p, beta_1..beta_p)
// zz_free: per layer k: ({gamma_k^e} in edge order, beta_k)
// s_qaoa:  per layer k: ({gamma_k^e}, beta_k, one alpha per mixer)

inline int layer_stride(const AnsatzSpec& spec, int num_edges) {
    switch (spec.family) {
        case AnsatzFamily::Qaoa: return 2;
        case AnsatzFamily::ZzFree: return num_edges + 1;
        case AnsatzFamily::SQaoa:
            return num_edges + 1 + static_cast<int>(spec.mixers.size());
    }
    throw std::invalid_argument("bad ansatz family");
}

inline int param_count(const AnsatzSpec& spec, const ProblemInstance& inst) {
    spec.validate();
    return spec.layers * layer_stride(spec, static_cast<int>(inst.edges.size()));
}

// Embeds a depth-p QAOA optimum into the released layout: gamma_k^e = gamma_k
// for every edge, beta_k kept, every alpha = 0.
inline std::vector<double> embed_qaoa_params(const AnsatzSpec& spec,
                                             int num_edges,
                                             std::span<const double> qaoa) {
    const int p = spec.layers;
    if (std::ssize(qaoa) != 2 * p) {
        throw std::invalid_argument("qaoa parameter vector has wrong length");
    }
    std::vector<double> out(std::size_t(p) * layer_stride(spec, num_edges), 0.0);
    const int stride = layer_stride(spec, num_edges);
    for (int k = 0; k < p; ++k) {
        for (int e = 0; e < num_edges; ++e) {
            out[std::size_t(k) * stride + e] = qaoa[k];
        }
        out[std::size_t(k) * stride + num_edges] = qaoa[p + k];
    }
    return out;
}

// Precomputed per-instance tables reused across thousands of circuit
// evaluations: the exact diagonal for expectations, the constant-free
// diagonal driving the QAOA phase (the identity part of the MaxCut cost only
// shifts the global phase), per-edge couplings and bit masks.
struct CircuitContext {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<double> phase_weights;     // w for SK, w/2 for MaxCut
    std::vector<std::uint64_t> edge_masks;
    std::vector<double> h_diag;
    std::vector<double> h_phase;           // h_diag minus its identity offset

    explicit CircuitContext(const ProblemInstance& inst)
        : n(inst.n), edges(inst.edges), h_diag(build_h_diag(inst)) {
        phase_weights.reserve(edges.size());
        edge_masks.reserve(edges.size());
        double offset = 0.0;
        for (const Edge& e : edges) {
            phase_weights.push_back(inst.phase_weight(e));
            edge_masks.push_back((std::uint64_t(1) << e.i) |
                                 (std::uint64_t(1) << e.j));
            if (inst.is_maxcut()) offset -= 0.5 * e.w;
        }
        h_phase.reserve(h_diag.size());
        for (double h : h_diag) h_phase.push_back(h - offset);
    }
};

namespace detail {

// One fused sweep for a layer of per-edge ZZ phases (all diagonal, so order
// is irrelevant): amplitude[z] *= exp(-i sum_e angle_e s_i s_j).
inline void apply_edge_phases(StateVector& state,
                              std::span<const std::uint64_t> masks,
                              std::span<const double> angles) {
    auto amps = state.amplitudes();
    for (std::size_t z = 0; z < amps.size(); ++z) {
        double total = 0.0;
        for (std::size_t e = 0; e < masks.size(); ++e) {
            total += (std::popcount(z & masks[e]) & 1) ? -angles[e] : angles[e];
        }
        amps[z] *= std::exp(cplx(0, -total));
    }
}

}  // namespace detail

// Applies the circuit for `spec` with the given flattened parameters to
// `state`. Per layer: the two-body block for every edge in edge-list order
// (edge blocks with alpha != 0 do not commute across shared vertices, so the
// order is part of the contract), then the transverse mixer e^{i beta sum X}.
inline void apply_ansatz(const AnsatzSpec& spec, const CircuitContext& ctx,
                         std::span<const double> params, StateVector& state) {
    spec.validate();
    const int num_edges = static_cast<int>(ctx.edges.size());
    const int stride = layer_stride(spec, num_edges);
    if (std::ssize(params) != std::int64_t(spec.layers) * stride) {
        throw std::invalid_argument("parameter vector has wrong length");
    }
    if (state.num_qubits() != ctx.n) {
        throw std::invalid_argument("state size does not match instance");
    }

    std::vector<double> edge_angles(num_edges);
    for (int k = 0; k < spec.layers; ++k) {
        const double* layer = params.data() + std::size_t(k) * stride;
        switch (spec.family) {
            case AnsatzFamily::Qaoa: {
                apply_diagonal_phase(state, ctx.h_phase, params[k]);
                apply_mixer(state, params[spec.layers + k]);
                continue;
            }
            case AnsatzFamily::ZzFree: {
                for (int e = 0; e < num_edges; ++e) {
                    edge_angles[e] = layer[e] * ctx.phase_weights[e];
                }
                detail::apply_edge_phases(state, ctx.edge_masks, edge_angles);
                apply_mixer(state, layer[num_edges]);
                continue;
            }
            case AnsatzFamily::SQaoa: break;
        }

        const double beta = layer[num_edges];
        const double* alphas = layer + num_edges + 1;
        if (spec.gathered) {
            const double alpha = alphas[0];
            const TwoBodyBasis basis = two_body_basis(1.0, alpha, spec.mixers[0]);
            for (int e = 0; e < num_edges; ++e) {
                const double theta = layer[e] * ctx.phase_weights[e];
                if (basis.diagonal) {
                    apply_zz_phase(state, ctx.edges[e].i, ctx.edges[e].j, theta);
                } else {
                    apply_two_qubit(state, ctx.edges[e].i, ctx.edges[e].j,
                                    two_body_unitary(basis, theta));
                }
            }
        } else {
            std::vector<TwoBodyBasis> bases;
            bases.reserve(spec.mixers.size());
            for (std::size_t m = 0; m < spec.mixers.size(); ++m) {
                bases.push_back(two_body_basis(0.0, alphas[m] == 0.0 ? 0.0 : 1.0,
                                               spec.mixers[m]));
            }
            for (int e = 0; e < num_edges; ++e) {
                const double theta = layer[e] * ctx.phase_weights[e];
                apply_zz_phase(state, ctx.edges[e].i, ctx.edges[e].j, theta);
                for (std::size_t m = 0; m < spec.mixers.size(); ++m) {
                    if (alphas[m] == 0.0) continue;
                    apply_two_qubit(
                        state, ctx.edges[e].i, ctx.edges[e].j,
                        two_body_unitary(bases[m], alphas[m] * theta));
                }
            }
        }
        apply_mixer(state, beta);
    }
}

inline void apply_ansatz(const AnsatzSpec& spec, const ProblemInstance& inst,
                         std::span<const double> params, StateVector& state) {
    apply_ansatz(spec, CircuitContext(inst), params, state);
}

// --- CNOT-level compilation (resource accounting) --------------------------

enum class GateKind : std::uint8_t { Cnot, Rx, Ry, Rz, Phase };

// Single- or two-qubit gate on the local pair; qubit 0 is the edge's first
// endpoint, qubit 1 the second. control is -1 for single-qubit gates.
struct Gate {
    GateKind kind;
    int target;
    int control = -1;
    double angle = 0.0;
};

using GateList = std::vector<Gate>;

// Two-CNOT realization of exp(-i theta (Z⊗Z + alpha M)) for M in {YY, XX},
// and the standard two-CNOT ZZ phase for none. Exact (global phase one):
//   CNOT (RX_0(2a) ⊗ RZ_1(2b)) CNOT = exp(-i (a XX + b ZZ))
// and conjugating both qubits by RZ(pi/2) turns XX into YY.
inline GateList compile_edge_block(double theta, double alpha, MixerKind kind) {
    constexpr double half_pi = std::numbers::pi / 2;
    switch (kind) {
        case MixerKind::None:
            return {{GateKind::Cnot, 1, 0},
                    {GateKind::Rz, 1, -1, 2 * theta},
                    {GateKind::Cnot, 1, 0}};
        case MixerKind::XX:
            return {{GateKind::Cnot, 1, 0},
                    {GateKind::Rx, 0, -1, 2 * theta * alpha},
                    {GateKind::Rz, 1, -1, 2 * theta},
                    {GateKind::Cnot, 1, 0}};
        case MixerKind::YY:
            return {{GateKind::Rz, 0, -1, -half_pi},
                    {GateKind::Rz, 1, -1, -half_pi},
                    {GateKind::Cnot, 1, 0},
                    {GateKind::Rx, 0, -1, 2 * theta * alpha},
                    {GateKind::Rz, 1, -1, 2 * theta},
                    {GateKind::Cnot, 1, 0},
                    {GateKind::Rz, 0, -1, half_pi},
                    {GateKind::Rz, 1, -1, half_pi}};
        default:
            throw std::invalid_argument(
                "two-CNOT compilation covers none/YY/XX only; " +
                mixer_name(kind) + " is simulated as an exact matrix");
    }
}

namespace detail {

inline Eigen::Matrix2cd single_qubit_matrix(GateKind kind, double angle) {
    const double h = 0.5 * angle;
    Eigen::Matrix2cd m;
    switch (kind) {
        case GateKind::Rx:
            m << std::cos(h), cplx(0, -std::sin(h)),
                 cplx(0, -std::sin(h)), std::cos(h);
            return m;
        case GateKind::Ry:
            m << std::cos(h), -std::sin(h), std::sin(h), std::cos(h);
            return m;
        case GateKind::Rz:
            m << std::exp(cplx(0, -h)), 0, 0, std::exp(cplx(0, h));
            return m;
        case GateKind::Phase:
            m << 1, 0, 0, std::exp(cplx(0, angle));
            return m;
        case GateKind::Cnot: break;
    }
    throw std::invalid_argument("not a single-qubit gate");
}

}  // namespace detail

// Composes a local two-qubit gate list into its 4x4 unitary (basis index
// b = bit_0 + 2*bit_1), for equivalence tests and CNOT accounting.
inline Eigen::Matrix4cd compose_gate_list(const GateList& gates) {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    for (const Gate& g : gates) {
        Eigen::Matrix4cd m;
        if (g.kind == GateKind::Cnot) {
            m = Eigen::Matrix4cd::Zero();
            // control g.control, target g.target on the local pair
            for (int b = 0; b < 4; ++b) {
                const int cbit = (b >> g.control) & 1;
                const int flipped = cbit ? b ^ (1 << g.target) : b;
                m(flipped, b) = 1.0;
            }
        } else {
            const Eigen::Matrix2cd sq = detail::single_qubit_matrix(g.kind, g.angle);
            m = g.target == 0 ? detail::kron22(id, sq) : detail::kron22(sq, id);
        }
        u = m * u;
    }
    return u;
}

inline int count_cnots(const GateList& gates) {
    int c = 0;
    for (const Gate& g : gates) {
        if (g.kind == GateKind::Cnot) ++c;
    }
    return c;
}

// Total CNOTs of the compiled circuit: 2 per edge block for QAOA, zz_free and
// gathered YY/XX s_qaoa, plus 2 per extra ungathered mixer exponential.
inline int cnot_count(const AnsatzSpec& spec, const ProblemInstance& inst) {
    spec.validate();
    const int edges = static_cast<int>(inst.edges.size());
    if (spec.family != AnsatzFamily::SQaoa) {
        return 2 * edges * spec.layers;
    }
    for (MixerKind m : spec.mixers) {
        if (m != MixerKind::YY && m != MixerKind::XX) {
            throw std::invalid_argument("no two-CNOT compilation for mixer " +
                                        mixer_name(m));
        }
    }
    if (spec.gathered) {
        return 2 * edges * spec.layers;
    }
    return (2 + 2 * static_cast<int>(spec.mixers.size())) * edges * spec.layers;
}

}  // namespace sqaoa
