#pragma once

#include <string>
#include <vector>

#include "sqaoa/pauli.hpp"
#include "sqaoa/problems.hpp"
#include "sqaoa/statevector.hpp"

namespace sqaoa {

// H_B = -sum_i X_i, whose ground state is |+>^n.
inline PauliSum driver_hamiltonian(int n) {
    PauliSum h(n);
    for (int q = 0; q < n; ++q) {
        std::vector<Axis> axes(n, Axis::I);
        axes[q] = Axis::X;
        h.add_term(PauliTerm(-1.0, std::move(axes)));
    }
    return h;
}

namespace detail {

inline std::vector<Axis> two_site(int n, int i, Axis a, int j, Axis b) {
    std::vector<Axis> axes(n, Axis::I);
    axes[i] = a;
    axes[j] = b;
    return axes;
}

}  // namespace detail

// The exact cost: MaxCut -sum w (I - ZZ)/2 (identity offset included so the
// spectrum matches the classical energies), SK sum w ZZ.
inline PauliSum cost_hamiltonian(const ProblemInstance& inst) {
    PauliSum h(inst.n);
    for (const Edge& e : inst.edges) {
        h.add_term(PauliTerm(inst.phase_weight(e),
                             detail::two_site(inst.n, e.i, Axis::Z, e.j, Axis::Z)));
        if (inst.is_maxcut()) {
            h.add_term(PauliTerm(-0.5 * e.w, std::vector<Axis>(inst.n, Axis::I)));
        }
    }
    return h;
}

// The traceless part sum_e c_e Z_i Z_j (c = w for SK, w/2 for MaxCut); this is
// the generator the circuit phases actually implement.
inline PauliSum cost_phase_hamiltonian(const ProblemInstance& inst) {
    PauliSum h(inst.n);
    for (const Edge& e : inst.edges) {
        h.add_term(PauliTerm(inst.phase_weight(e),
                             detail::two_site(inst.n, e.i, Axis::Z, e.j, Axis::Z)));
    }
    return h;
}

// sum_e c_e (P_i Q_j + Q_i P_j)/2 over the instance edges; c_e = w_e by
// default (the H_Y convention), or the phase weight when requested.
inline PauliSum interaction_hamiltonian(const ProblemInstance& inst,
                                        MixerKind kind,
                                        bool use_phase_weights = false) {
    if (kind == MixerKind::None) {
        throw std::invalid_argument("interaction sum needs a two-body type");
    }
    const std::string name = mixer_name(kind);
    const Axis p = axis_from_char(name[0]);
    const Axis q = axis_from_char(name[1]);
    PauliSum h(inst.n);
    for (const Edge& e : inst.edges) {
        const double c = use_phase_weights ? inst.phase_weight(e) : e.w;
        h.add_term(PauliTerm(0.5 * c,
                             detail::two_site(inst.n, e.i, p, e.j, q)));
        h.add_term(PauliTerm(0.5 * c,
                             detail::two_site(inst.n, e.i, q, e.j, p)));
    }
    return h;
}

}  // namespace sqaoa
