#pragma once

// Shared test helpers. The dense circuit oracle here goes through the
// symbolic-algebra + matrix-exponential route only, so it stays independent
// of the statevector kernels it is used to check.

#include <Eigen/Dense>
#include <vector>

#include "sqaoa/ansatz.hpp"
#include "sqaoa/dense.hpp"
#include "sqaoa/hamiltonians.hpp"
#include "sqaoa/pauli.hpp"
#include "sqaoa/problems.hpp"
#include "sqaoa/rng.hpp"

namespace test_support {

using namespace sqaoa;

inline PauliSum random_pauli_sum(int n, int num_terms, Rng& rng,
                                 bool hermitian = false) {
    PauliSum s(n);
    for (int t = 0; t < num_terms; ++t) {
        std::vector<Axis> axes(n, Axis::I);
        for (int q = 0; q < n; ++q) {
            axes[q] = static_cast<Axis>(rng.below(4));
        }
        const double re = rng.uniform(-1.0, 1.0);
        const double im = hermitian ? 0.0 : rng.uniform(-1.0, 1.0);
        s.add_term(PauliTerm(cplx(re, im), std::move(axes)));
    }
    return s;
}

// Z_i Z_j + alpha * M_ij embedded on n qubits (unit coupling; the edge angle
// carries the weight).
inline PauliSum edge_generator(int n, int i, int j, double alpha,
                               MixerKind kind) {
    PauliSum g(n);
    std::vector<Axis> zz(n, Axis::I);
    zz[i] = Axis::Z;
    zz[j] = Axis::Z;
    g.add_term(PauliTerm(1.0, std::move(zz)));
    if (alpha != 0.0 && kind != MixerKind::None) {
        const std::string name = mixer_name(kind);
        const Axis p = axis_from_char(name[0]);
        const Axis q = axis_from_char(name[1]);
        std::vector<Axis> pq(n, Axis::I), qp(n, Axis::I);
        pq[i] = p;
        pq[j] = q;
        qp[i] = q;
        qp[j] = p;
        g.add_term(PauliTerm(0.5 * alpha, std::move(pq)));
        g.add_term(PauliTerm(0.5 * alpha, std::move(qp)));
    }
    return g;
}

inline PauliSum transverse_field_sum(int n) {
    PauliSum s(n);
    for (int q = 0; q < n; ++q) {
        std::vector<Axis> axes(n, Axis::I);
        axes[q] = Axis::X;
        s.add_term(PauliTerm(1.0, std::move(axes)));
    }
    return s;
}

// M_ij alone on n qubits
inline PauliSum interaction_generator(int n, int i, int j, MixerKind kind) {
    const std::string name = mixer_name(kind);
    const Axis p = axis_from_char(name[0]);
    const Axis q = axis_from_char(name[1]);
    PauliSum g(n);
    std::vector<Axis> pq(n, Axis::I), qp(n, Axis::I);
    pq[i] = p;
    pq[j] = q;
    qp[i] = q;
    qp[j] = p;
    g.add_term(PauliTerm(0.5, std::move(pq)));
    g.add_term(PauliTerm(0.5, std::move(qp)));
    return g;
}

// Product of exact dense exponentials mirroring the layer structure of
// apply_ansatz, built via the symbolic route.
inline Eigen::MatrixXcd dense_circuit_unitary(const AnsatzSpec& spec,
                                              const ProblemInstance& inst,
                                              std::span<const double> params) {
    spec.validate();
    const int n = inst.n;
    const std::size_t dim = std::size_t(1) << n;
    const int num_edges = static_cast<int>(inst.edges.size());
    const int stride = layer_stride(spec, num_edges);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    const PauliSum x_sum = transverse_field_sum(n);
    const PauliSum phase_sum = cost_phase_hamiltonian(inst);

    for (int k = 0; k < spec.layers; ++k) {
        const double* layer = params.data() + std::size_t(k) * stride;
        double beta = 0.0;
        if (spec.family == AnsatzFamily::Qaoa) {
            beta = params[spec.layers + k];
            u = dense_exp(phase_sum, params[k]) * u;
        } else {
            beta = layer[num_edges];
            const double* alphas = layer + num_edges + 1;
            for (int e = 0; e < num_edges; ++e) {
                const Edge& ed = inst.edges[e];
                const double theta = layer[e] * inst.phase_weight(ed);
                if (spec.family == AnsatzFamily::ZzFree) {
                    u = dense_exp(
                            edge_generator(n, ed.i, ed.j, 0.0, MixerKind::None),
                            theta) *
                        u;
                } else if (spec.gathered) {
                    u = dense_exp(edge_generator(n, ed.i, ed.j, alphas[0],
                                                 spec.mixers[0]),
                                  theta) *
                        u;
                } else {
                    u = dense_exp(
                            edge_generator(n, ed.i, ed.j, 0.0, MixerKind::None),
                            theta) *
                        u;
                    for (std::size_t m = 0; m < spec.mixers.size(); ++m) {
                        u = dense_exp(interaction_generator(n, ed.i, ed.j,
                                                            spec.mixers[m]),
                                      alphas[m] * theta) *
                            u;
                    }
                }
            }
        }
        u = dense_exp(x_sum, -beta) * u;  // e^{+i beta sum X}
    }
    return u;
}

}  // namespace test_support
