#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sqaoa {

using cplx = std::complex<double>;

// Coefficients below this magnitude are floating-point dust from cancellation
// and are dropped on canonicalization.
inline constexpr double kCoeffEps = 1e-12;

enum class Axis : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char axis_char(Axis a) {
    switch (a) {
        case Axis::I: return 'I';
        case Axis::X: return 'X';
        case Axis::Y: return 'Y';
        case Axis::Z: return 'Z';
    }
    return '?';
}

inline Axis axis_from_char(char c) {
    switch (c) {
        case 'I': return Axis::I;
        case 'X': return Axis::X;
        case 'Y': return Axis::Y;
        case 'Z': return Axis::Z;
    }
    throw std::invalid_argument(std::string("not a Pauli axis: ") + c);
}

// Weighted Pauli string on a fixed qubit register. axes[k] is the operator on
// qubit k; the register size is axes.size().
struct PauliTerm {
    cplx coeff;
    std::vector<Axis> axes;

    PauliTerm(cplx c, std::vector<Axis> a) : coeff(c), axes(std::move(a)) {}

    // e.g. PauliTerm(1.0, "XIZ") = X0 Z2 on three qubits
    PauliTerm(cplx c, std::string_view s) : coeff(c) {
        axes.reserve(s.size());
        for (char ch : s) axes.push_back(axis_from_char(ch));
    }

    int num_qubits() const { return static_cast<int>(axes.size()); }

    int weight() const {
        return static_cast<int>(
            std::count_if(axes.begin(), axes.end(),
                          [](Axis a) { return a != Axis::I; }));
    }

    std::string axes_string() const {
        std::string s;
        s.reserve(axes.size());
        for (Axis a : axes) s.push_back(axis_char(a));
        return s;
    }
};

namespace detail {

// Single-qubit product table: pauli_product(a, b) = (phase, axis) with
// a·b = phase · axis, phase in {1, i, -1, -i}.
inline std::pair<cplx, Axis> pauli_product(Axis a, Axis b) {
    if (a == Axis::I) return {cplx(1, 0), b};
    if (b == Axis::I) return {cplx(1, 0), a};
    if (a == b) return {cplx(1, 0), Axis::I};
    const cplx pi(0, 1), mi(0, -1);
    switch (a) {
        case Axis::X: return (b == Axis::Y) ? std::pair{pi, Axis::Z}
                                            : std::pair{mi, Axis::Y};
        case Axis::Y: return (b == Axis::Z) ? std::pair{pi, Axis::X}
                                            : std::pair{mi, Axis::Z};
        case Axis::Z: return (b == Axis::X) ? std::pair{pi, Axis::Y}
                                            : std::pair{mi, Axis::X};
        default: break;
    }
    throw std::logic_error("unreachable pauli product");
}

}  // namespace detail

inline PauliTerm multiply(const PauliTerm& a, const PauliTerm& b) {
    if (a.axes.size() != b.axes.size()) {
        throw std::invalid_argument("pauli term qubit counts differ");
    }
    PauliTerm out(a.coeff * b.coeff, std::vector<Axis>(a.axes.size(), Axis::I));
    for (std::size_t k = 0; k < a.axes.size(); ++k) {
        auto [phase, axis] = detail::pauli_product(a.axes[k], b.axes[k]);
        out.coeff *= phase;
        out.axes[k] = axis;
    }
    return out;
}

// Canonicalized linear combination of Pauli strings: axes-strings are unique
// and sorted lexicographically (qubit 0 most significant), duplicate terms are
// merged exactly, coefficients with |c| < kCoeffEps are dropped.
class PauliSum {
  public:
    explicit PauliSum(int num_qubits) : n_(num_qubits) {
        if (num_qubits < 1) {
            throw std::invalid_argument("qubit count must be positive");
        }
    }

    PauliSum(int num_qubits, std::initializer_list<PauliTerm> terms)
        : PauliSum(num_qubits) {
        for (const auto& t : terms) add_term(t);
    }

    int num_qubits() const { return n_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const PauliTerm& t) {
        if (t.num_qubits() != n_) {
            throw std::invalid_argument("term qubit count differs from sum");
        }
        auto it = terms_.find(t.axes);
        if (it == terms_.end()) {
            terms_.emplace(t.axes, t.coeff);
        } else {
            it->second += t.coeff;
        }
        prune(t.axes);
    }

    void add_term(cplx coeff, std::string_view axes) {
        add_term(PauliTerm(coeff, axes));
    }

    // coefficient of an axes-string, zero if absent
    cplx coefficient(const std::vector<Axis>& axes) const {
        auto it = terms_.find(axes);
        return it == terms_.end() ? cplx(0, 0) : it->second;
    }

    cplx coefficient(std::string_view axes) const {
        PauliTerm probe(1.0, axes);
        return coefficient(probe.axes);
    }

    std::vector<PauliTerm> terms() const {
        std::vector<PauliTerm> out;
        out.reserve(terms_.size());
        for (const auto& [axes, c] : terms_) out.emplace_back(c, axes);
        return out;
    }

    PauliSum& operator+=(const PauliSum& other) {
        check_same_register(other);
        for (const auto& [axes, c] : other.terms_) {
            auto it = terms_.find(axes);
            if (it == terms_.end()) {
                terms_.emplace(axes, c);
            } else {
                it->second += c;
            }
            prune(axes);
        }
        return *this;
    }

    PauliSum& operator-=(const PauliSum& other) {
        check_same_register(other);
        for (const auto& [axes, c] : other.terms_) {
            auto it = terms_.find(axes);
            if (it == terms_.end()) {
                terms_.emplace(axes, -c);
            } else {
                it->second -= c;
            }
            prune(axes);
        }
        return *this;
    }

    PauliSum& operator*=(cplx scale) {
        if (std::abs(scale) < kCoeffEps) {
            terms_.clear();
            return *this;
        }
        for (auto& [axes, c] : terms_) c *= scale;
        return *this;
    }

    friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
    friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
    friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }
    friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }

    friend PauliSum operator*(const PauliSum& a, const PauliSum& b) {
        a.check_same_register(b);
        PauliSum out(a.n_);
        for (const auto& [ax_a, ca] : a.terms_) {
            for (const auto& [ax_b, cb] : b.terms_) {
                PauliTerm p = multiply(PauliTerm(ca, ax_a), PauliTerm(cb, ax_b));
                out.add_term(p);
            }
        }
        return out;
    }

    // max |coeff| difference over the union of axes-strings
    double distance(const PauliSum& other) const {
        check_same_register(other);
        double d = 0.0;
        for (const auto& [axes, c] : terms_) {
            d = std::max(d, std::abs(c - other.coefficient(axes)));
        }
        for (const auto& [axes, c] : other.terms_) {
            d = std::max(d, std::abs(c - coefficient(axes)));
        }
        return d;
    }

    // a Pauli string is Hermitian, so the sum is Hermitian iff all
    // coefficients are real (up to tol)
    bool is_hermitian(double tol = kCoeffEps) const {
        for (const auto& [axes, c] : terms_) {
            if (std::abs(c.imag()) > tol) return false;
        }
        return true;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [axes, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.real();
            if (c.imag() != 0.0) {
                os << (c.imag() > 0 ? "+" : "-") << std::abs(c.imag()) << "i";
            }
            os << ")*";
            std::string ops;
            for (std::size_t k = 0; k < axes.size(); ++k) {
                if (axes[k] == Axis::I) continue;
                if (!ops.empty()) ops.push_back(' ');
                ops.push_back(axis_char(axes[k]));
                ops += std::to_string(k);
            }
            os << (ops.empty() ? "I" : ops);
        }
        return os.str();
    }

  private:
    void check_same_register(const PauliSum& other) const {
        if (other.n_ != n_) {
            throw std::invalid_argument("pauli sums on different registers");
        }
    }

    void prune(const std::vector<Axis>& axes) {
        auto it = terms_.find(axes);
        if (it != terms_.end() && std::abs(it->second) < kCoeffEps) {
            terms_.erase(it);
        }
    }

    int n_;
    // std::map keeps axes-strings sorted lexicographically with qubit 0 most
    // significant (Axis order I < X < Y < Z), which fixes the canonical term
    // order for printing and equality.
    std::map<std::vector<Axis>, cplx> terms_;
};

inline PauliSum commutator(const PauliSum& a, const PauliSum& b) {
    return a * b - b * a;
}

// (2·order - 1)-fold nested commutator [h,[h,...[h, seed]]], the operator
// content of the order-k gauge-potential term (without its free coefficient).
inline PauliSum nested_commutator(const PauliSum& h, const PauliSum& seed,
                                  int order) {
    if (order < 1) throw std::invalid_argument("nesting order must be >= 1");
    PauliSum acc = seed;
    for (int i = 0; i < 2 * order - 1; ++i) acc = commutator(h, acc);
    return acc;
}

// Second-order Baker-Campbell-Hausdorff effective generator of the product
// exp(-i a1 A1) exp(-i a2 A2) ... : linear terms plus all pairwise
// -i(ai aj / 2)[Ai, Aj] cross terms in list order.
inline PauliSum bch_second_order(
    std::span<const std::pair<double, PauliSum>> generators) {
    if (generators.empty()) {
        throw std::invalid_argument("bch expansion needs at least one generator");
    }
    if (generators.size() > 3) {
        throw std::invalid_argument("bch expansion supports 2 or 3 generators");
    }
    PauliSum out(generators.front().second.num_qubits());
    for (const auto& [a, ham] : generators) {
        out += cplx(a, 0) * ham;
    }
    for (std::size_t i = 0; i < generators.size(); ++i) {
        for (std::size_t j = i + 1; j < generators.size(); ++j) {
            const double scale = generators[i].first * generators[j].first;
            out += cplx(0, -0.5 * scale) *
                   commutator(generators[i].second, generators[j].second);
        }
    }
    return out;
}

inline PauliSum bch_second_order(
    std::initializer_list<std::pair<double, PauliSum>> generators) {
    std::vector<std::pair<double, PauliSum>> v(generators);
    return bch_second_order(std::span<const std::pair<double, PauliSum>>(v));
}

}  // namespace sqaoa
