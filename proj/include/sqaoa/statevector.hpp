#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqaoa/pauli.hpp"

namespace sqaoa {

inline constexpr int kMaxQubits = 24;

// Extra two-body interaction type M = (P_i Q_j + Q_i P_j)/2. None selects a
// plain ZZ phase.
enum class MixerKind : std::uint8_t { None, YZ, YY, XX, XZ, XY };

inline std::string mixer_name(MixerKind m) {
    switch (m) {
        case MixerKind::None: return "none";
        case MixerKind::YZ: return "YZ";
        case MixerKind::YY: return "YY";
        case MixerKind::XX: return "XX";
        case MixerKind::XZ: return "XZ";
        case MixerKind::XY: return "XY";
    }
    return "?";
}

inline MixerKind mixer_from_name(const std::string& s) {
    if (s == "none") return MixerKind::None;
    if (s == "YZ" || s == "yz") return MixerKind::YZ;
    if (s == "YY" || s == "yy") return MixerKind::YY;
    if (s == "XX" || s == "xx") return MixerKind::XX;
    if (s == "XZ" || s == "xz") return MixerKind::XZ;
    if (s == "XY" || s == "xy") return MixerKind::XY;
    throw std::invalid_argument("unknown mixer type: " + s);
}

// Basis indices of the classical ground states; all members attain the
// optimal energy.
struct GroundSpace {
    std::vector<std::uint64_t> bitstrings;
};

// Dense n-qubit state, amplitude[z] indexed by the computational basis
// bitstring z with qubit 0 = least significant bit. Mutated in place by the
// gate kernels below; one state is owned by one simulation at a time.
class StateVector {
  public:
    explicit StateVector(int n) : n_(n) {
        if (n < 1 || n > kMaxQubits) {
            throw std::length_error("qubit count out of supported range 1..24");
        }
        amps_.assign(std::size_t(1) << n, cplx(0, 0));
        amps_[0] = cplx(1, 0);
    }

    static StateVector plus_state(int n) {
        StateVector s(n);
        const double a = std::pow(2.0, -0.5 * n);
        std::fill(s.amps_.begin(), s.amps_.end(), cplx(a, 0));
        return s;
    }

    void reset_to_plus() {
        const double a = std::pow(2.0, -0.5 * n_);
        std::fill(amps_.begin(), amps_.end(), cplx(a, 0));
    }

    int num_qubits() const { return n_; }
    std::size_t size() const { return amps_.size(); }

    cplx& operator[](std::size_t z) { return amps_[z]; }
    const cplx& operator[](std::size_t z) const { return amps_[z]; }

    std::span<cplx> amplitudes() { return amps_; }
    std::span<const cplx> amplitudes() const { return amps_; }

    double norm() const {
        double s = 0.0;
        for (const cplx& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

    Eigen::VectorXcd to_eigen() const {
        Eigen::VectorXcd v(amps_.size());
        for (std::size_t z = 0; z < amps_.size(); ++z) v(z) = amps_[z];
        return v;
    }

    double distance(const StateVector& other) const {
        if (other.n_ != n_) throw std::invalid_argument("qubit counts differ");
        double d = 0.0;
        for (std::size_t z = 0; z < amps_.size(); ++z) {
            d = std::max(d, std::abs(amps_[z] - other.amps_[z]));
        }
        return d;
    }

  private:
    int n_;
    std::vector<cplx> amps_;
};

// exp(+i beta X) on every qubit (the e^{i beta sum X} convention; equal to
// e^{-i beta H_B} with H_B = -sum X).
inline void apply_mixer(StateVector& state, double beta) {
    const double c = std::cos(beta);
    const cplx is(0, std::sin(beta));
    const std::size_t pairs = state.size() >> 1;
    auto amps = state.amplitudes();
    for (int q = 0; q < state.num_qubits(); ++q) {
        const std::size_t bit = std::size_t(1) << q;
        const std::size_t low_mask = bit - 1;
        for (std::size_t k = 0; k < pairs; ++k) {
            const std::size_t base = (k >> q << (q + 1)) | (k & low_mask);
            const cplx a0 = amps[base];
            const cplx a1 = amps[base | bit];
            amps[base] = c * a0 + is * a1;
            amps[base | bit] = is * a0 + c * a1;
        }
    }
}

// amplitude[z] *= exp(-i gamma h_diag[z])
inline void apply_diagonal_phase(StateVector& state,
                                 std::span<const double> h_diag, double gamma) {
    if (h_diag.size() != state.size()) {
        throw std::invalid_argument("diagonal length does not match state");
    }
    auto amps = state.amplitudes();
    for (std::size_t z = 0; z < amps.size(); ++z) {
        amps[z] *= std::exp(cplx(0, -gamma * h_diag[z]));
    }
}

// exp(-i theta Z_i Z_j): pure phase, e^{-i theta} on even parity of bits
// (i, j), e^{+i theta} on odd
inline void apply_zz_phase(StateVector& state, int i, int j, double theta) {
    if (i == j) throw std::invalid_argument("two-body term needs i != j");
    const std::size_t mask =
        (std::size_t(1) << i) | (std::size_t(1) << j);
    const cplx even = std::exp(cplx(0, -theta));
    const cplx odd = std::exp(cplx(0, theta));
    auto amps = state.amplitudes();
    for (std::size_t z = 0; z < amps.size(); ++z) {
        amps[z] *= (std::popcount(z & mask) & 1) ? odd : even;
    }
}

// Applies a 4x4 unitary to qubits (i, j); local basis index b = bit_i + 2*bit_j.
inline void apply_two_qubit(StateVector& state, int i, int j,
                            const Eigen::Matrix4cd& u) {
    if (i == j) throw std::invalid_argument("two-body term needs i != j");
    const int n = state.num_qubits();
    if (i < 0 || j < 0 || i >= n || j >= n) {
        throw std::invalid_argument("qubit index out of range");
    }
    const std::size_t bi = std::size_t(1) << i;
    const std::size_t bj = std::size_t(1) << j;
    const int p = std::min(i, j);
    const int q = std::max(i, j);
    const std::size_t low_mask = (std::size_t(1) << p) - 1;
    const std::size_t mid_mask = (std::size_t(1) << (q - 1)) - 1;
    const std::size_t groups = state.size() >> 2;
    auto amps = state.amplitudes();
    for (std::size_t k = 0; k < groups; ++k) {
        const std::size_t low = k & low_mask;
        const std::size_t mid = (k & mid_mask) >> p << (p + 1);
        const std::size_t high = k >> (q - 1) << (q + 1);
        const std::size_t base = high | mid | low;
        const cplx a0 = amps[base];
        const cplx a1 = amps[base | bi];
        const cplx a2 = amps[base | bj];
        const cplx a3 = amps[base | bi | bj];
        amps[base]           = u(0, 0) * a0 + u(0, 1) * a1 + u(0, 2) * a2 + u(0, 3) * a3;
        amps[base | bi]      = u(1, 0) * a0 + u(1, 1) * a1 + u(1, 2) * a2 + u(1, 3) * a3;
        amps[base | bj]      = u(2, 0) * a0 + u(2, 1) * a1 + u(2, 2) * a2 + u(2, 3) * a3;
        amps[base | bi | bj] = u(3, 0) * a0 + u(3, 1) * a1 + u(3, 2) * a2 + u(3, 3) * a3;
    }
}

namespace detail {

inline Eigen::Matrix2cd pauli_matrix(Axis a) {
    Eigen::Matrix2cd m;
    switch (a) {
        case Axis::I: m << 1, 0, 0, 1; break;
        case Axis::X: m << 0, 1, 1, 0; break;
        case Axis::Y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        case Axis::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

inline std::pair<Axis, Axis> mixer_axes(MixerKind kind) {
    switch (kind) {
        case MixerKind::YZ: return {Axis::Y, Axis::Z};
        case MixerKind::YY: return {Axis::Y, Axis::Y};
        case MixerKind::XX: return {Axis::X, Axis::X};
        case MixerKind::XZ: return {Axis::X, Axis::Z};
        case MixerKind::XY: return {Axis::X, Axis::Y};
        case MixerKind::None: break;
    }
    throw std::invalid_argument("mixer kind carries no interaction");
}

// kron(B, A): local index b = bit_i + 2*bit_j, so the j factor is the left
// (high) slot
inline Eigen::Matrix4cd kron22(const Eigen::Matrix2cd& on_j,
                               const Eigen::Matrix2cd& on_i) {
    Eigen::Matrix4cd m;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            m.block<2, 2>(2 * r, 2 * c) = on_j(r, c) * on_i;
        }
    }
    return m;
}

}  // namespace detail

// M_{ij} = (P_i Q_j + Q_i P_j) / 2 as a local 4x4 (symmetric in i <-> j)
inline Eigen::Matrix4cd mixer_matrix(MixerKind kind) {
    auto [p, q] = detail::mixer_axes(kind);
    const Eigen::Matrix2cd mp = detail::pauli_matrix(p);
    const Eigen::Matrix2cd mq = detail::pauli_matrix(q);
    return 0.5 * (detail::kron22(mq, mp) + detail::kron22(mp, mq));
}

// zz_coeff * Z⊗Z + m_coeff * M
inline Eigen::Matrix4cd two_body_generator(double zz_coeff, double m_coeff,
                                           MixerKind kind) {
    const Eigen::Matrix2cd z = detail::pauli_matrix(Axis::Z);
    Eigen::Matrix4cd g = zz_coeff * detail::kron22(z, z);
    if (m_coeff != 0.0 && kind != MixerKind::None) {
        g += m_coeff * mixer_matrix(kind);
    }
    return g;
}

// Eigenbasis of a two-body generator; reused across edges that share the
// generator shape and differ only in the angle.
struct TwoBodyBasis {
    Eigen::Matrix4cd vectors;
    Eigen::Vector4d values;
    bool diagonal = false;  // generator is zz_coeff * ZZ only
    double zz_coeff = 0.0;
};

inline TwoBodyBasis two_body_basis(double zz_coeff, double m_coeff,
                                   MixerKind kind) {
    TwoBodyBasis b;
    if (m_coeff == 0.0 || kind == MixerKind::None) {
        b.diagonal = true;
        b.zz_coeff = zz_coeff;
        return b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(
        two_body_generator(zz_coeff, m_coeff, kind));
    b.vectors = es.eigenvectors();
    b.values = es.eigenvalues();
    return b;
}

// exp(-i theta G) from a precomputed eigenbasis of G
inline Eigen::Matrix4cd two_body_unitary(const TwoBodyBasis& basis,
                                         double theta) {
    if (basis.diagonal) {
        const cplx even = std::exp(cplx(0, -theta * basis.zz_coeff));
        const cplx odd = std::exp(cplx(0, theta * basis.zz_coeff));
        Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
        u(0, 0) = even;
        u(1, 1) = odd;
        u(2, 2) = odd;
        u(3, 3) = even;
        return u;
    }
    Eigen::Vector4cd phases;
    for (int k = 0; k < 4; ++k) {
        phases(k) = std::exp(cplx(0, -theta * basis.values(k)));
    }
    return basis.vectors * phases.asDiagonal() * basis.vectors.adjoint();
}

// exp(-i theta (Z_i Z_j + alpha * M_ij)), exact via 4x4 diagonalization
inline void apply_two_body_exp(StateVector& state, int i, int j, double theta,
                               double alpha, MixerKind kind) {
    if (i == j) throw std::invalid_argument("two-body term needs i != j");
    if (alpha == 0.0 || kind == MixerKind::None) {
        apply_zz_phase(state, i, j, theta);
        return;
    }
    const TwoBodyBasis basis = two_body_basis(1.0, alpha, kind);
    apply_two_qubit(state, i, j, two_body_unitary(basis, theta));
}

inline double expectation_diagonal(const StateVector& state,
                                   std::span<const double> h_diag) {
    if (h_diag.size() != state.size()) {
        throw std::invalid_argument("diagonal length does not match state");
    }
    double e = 0.0;
    auto amps = state.amplitudes();
    for (std::size_t z = 0; z < amps.size(); ++z) {
        e += std::norm(amps[z]) * h_diag[z];
    }
    return e;
}

// Total probability mass on the optimal bitstrings.
inline double fidelity(const StateVector& state, const GroundSpace& gs) {
    if (gs.bitstrings.empty()) {
        throw std::invalid_argument("ground space is empty");
    }
    double p = 0.0;
    for (std::uint64_t z : gs.bitstrings) {
        p += std::norm(state[z]);
    }
    return p;
}

}  // namespace sqaoa
