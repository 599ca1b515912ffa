#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "sqaoa/pauli.hpp"

namespace sqaoa {

// Dense-matrix expansion caps at 12 qubits (a 4096x4096 complex matrix);
// beyond that the oracle would silently eat gigabytes.
inline constexpr int kMaxDenseQubits = 12;

// Exact Kronecker expansion of a Pauli sum, qubit 0 = least significant bit
// of the basis index. Pauli strings map basis states to single basis states,
// so the matrix is filled column by column in O(2^n · n) per term.
inline Eigen::MatrixXcd to_dense_matrix(const PauliSum& s) {
    const int n = s.num_qubits();
    if (n > kMaxDenseQubits) {
        throw std::length_error("dense expansion limited to 12 qubits");
    }
    const std::size_t dim = std::size_t(1) << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const PauliTerm& t : s.terms()) {
        for (std::size_t col = 0; col < dim; ++col) {
            std::size_t row = col;
            cplx amp = t.coeff;
            for (int k = 0; k < n; ++k) {
                const bool bit = (col >> k) & 1u;
                switch (t.axes[k]) {
                    case Axis::I: break;
                    case Axis::X: row ^= std::size_t(1) << k; break;
                    case Axis::Y:
                        row ^= std::size_t(1) << k;
                        amp *= bit ? cplx(0, -1) : cplx(0, 1);
                        break;
                    case Axis::Z:
                        if (bit) amp = -amp;
                        break;
                }
            }
            m(row, col) += amp;
        }
    }
    return m;
}

// exp(-i · angle · H) for a Hermitian Pauli sum, via exact diagonalization.
inline Eigen::MatrixXcd dense_exp(const PauliSum& h, double angle) {
    if (!h.is_hermitian(1e-9)) {
        throw std::invalid_argument("dense_exp requires a Hermitian sum");
    }
    const Eigen::MatrixXcd m = to_dense_matrix(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    const Eigen::VectorXd lam = es.eigenvalues();
    Eigen::VectorXcd phases(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
        phases(k) = std::exp(cplx(0, -angle * lam(k)));
    }
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
}

// max entrywise deviation
inline double matrix_distance(const Eigen::MatrixXcd& a,
                              const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// min over a global phase of the max entrywise deviation; decompositions are
// defined only up to phase
inline double phase_invariant_distance(const Eigen::MatrixXcd& a,
                                       const Eigen::MatrixXcd& b) {
    Eigen::Index r = 0, c = 0;
    a.cwiseAbs().maxCoeff(&r, &c);
    const cplx ref = a(r, c);
    if (std::abs(ref) < 1e-14 || std::abs(b(r, c)) < 1e-14) {
        return matrix_distance(a, b);
    }
    const cplx phase = ref / b(r, c) * (std::abs(b(r, c)) / std::abs(ref));
    return matrix_distance(a, phase / std::abs(phase) * b);
}

}  // namespace sqaoa
