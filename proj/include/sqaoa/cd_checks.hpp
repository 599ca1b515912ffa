#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sqaoa/hamiltonians.hpp"
#include "sqaoa/pauli.hpp"
#include "sqaoa/problems.hpp"

namespace sqaoa {

// Structural verification of the counterdiabatic identities on one instance:
//  - i[H_B, H_C] = -2 sum w~ (Z_i Y_j + Y_i Z_j)            (first order)
//  - H_2 = -i(ab/2)[H_Y, H_B] = ab sum w (Y_i Z_j + Z_i Y_j)
//  - H_3 = -i(ag/2)[H_Y, H_C] = ag sum_i sum_{j!=k in n_i} w_ij w~_ik X_i Y_j Z_k
//  - the order-2 nested commutator contains exactly the YZ / XYZ / YZZZ term
//    families with the documented sign pattern, and its constants fit the
//    c1 b^2 + c2 g^2 / c3 bg / c4 g^2 forms.
// The YZ-family constant fit needs a uniform |w| (u3r, sk); for real-weighted
// graphs only the family and sign checks apply.

struct CdReport {
    bool ok = true;
    std::vector<std::string> failures;
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
    std::string text;

    void fail(const std::string& msg) {
        ok = false;
        failures.push_back(msg);
    }
};

namespace detail {

// term pattern: sorted non-identity axis letters, e.g. "YZ", "XYZ", "YZZZ"
inline std::string term_pattern(const PauliTerm& t) {
    std::string s;
    for (Axis a : t.axes) {
        if (a != Axis::I) s.push_back(axis_char(a));
    }
    std::sort(s.begin(), s.end());
    return s;
}

inline std::string preview(const PauliSum& s, std::size_t max_terms = 24) {
    const auto terms = s.terms();
    if (terms.size() <= max_terms) return s.to_string();
    PauliSum head(s.num_qubits());
    for (std::size_t k = 0; k < max_terms; ++k) head.add_term(terms[k]);
    return head.to_string() + " + ... (" + std::to_string(terms.size()) +
           " terms total)";
}

}  // namespace detail

inline CdReport verify_cd_identities(const ProblemInstance& inst) {
    CdReport rep;
    std::ostringstream text;
    const int n = inst.n;
    const PauliSum h_b = driver_hamiltonian(n);
    const PauliSum h_c = cost_hamiltonian(inst);
    const PauliSum h_y = interaction_hamiltonian(inst, MixerKind::YY);
    constexpr double tol = 1e-9;

    // first order: i[H_B, H_C] against the closed form
    const PauliSum first_order = cplx(0, 1) * commutator(h_b, h_c);
    PauliSum first_expected(n);
    for (const Edge& e : inst.edges) {
        const double w = inst.phase_weight(e);
        first_expected.add_term(PauliTerm(
            -2.0 * w, detail::two_site(n, e.i, Axis::Z, e.j, Axis::Y)));
        first_expected.add_term(PauliTerm(
            -2.0 * w, detail::two_site(n, e.i, Axis::Y, e.j, Axis::Z)));
    }
    if (first_order.distance(first_expected) > tol) {
        rep.fail("first-order identity i[H_B,H_C] mismatch");
    }
    text << "i[H_B, H_C] = " << detail::preview(first_order) << "\n";

    // H_2 = -i(ab/2)[H_Y, H_B] = ab sum w (YZ + ZY)
    const double a = 0.37, b = 0.59, g = 0.83;
    const PauliSum h2 = cplx(0, -0.5 * a * b) * commutator(h_y, h_b);
    PauliSum h2_expected(n);
    for (const Edge& e : inst.edges) {
        h2_expected.add_term(PauliTerm(
            a * b * e.w, detail::two_site(n, e.i, Axis::Y, e.j, Axis::Z)));
        h2_expected.add_term(PauliTerm(
            a * b * e.w, detail::two_site(n, e.i, Axis::Z, e.j, Axis::Y)));
    }
    if (h2.distance(h2_expected) > tol) {
        rep.fail("H_2 = -i(ab/2)[H_Y,H_B] mismatch");
    }
    text << "H_2 = " << detail::preview(h2) << "\n";

    // H_3 = -i(ag/2)[H_Y, H_C] over common-neighbor triples
    std::vector<std::vector<std::pair<int, double>>> nbrs(n);
    for (const Edge& e : inst.edges) {
        nbrs[e.i].push_back({e.j, e.w});
        nbrs[e.j].push_back({e.i, e.w});
    }
    std::vector<std::vector<double>> phase_w(n, std::vector<double>(n, 0.0));
    for (const Edge& e : inst.edges) {
        phase_w[e.i][e.j] = phase_w[e.j][e.i] = inst.phase_weight(e);
    }
    const PauliSum h3 = cplx(0, -0.5 * a * g) * commutator(h_y, h_c);
    PauliSum h3_expected(n);
    for (int i = 0; i < n; ++i) {
        for (const auto& [j, wij] : nbrs[i]) {
            for (const auto& [k, wik] : nbrs[i]) {
                if (j == k) continue;
                std::vector<Axis> axes(n, Axis::I);
                axes[i] = Axis::X;
                axes[j] = Axis::Y;
                axes[k] = Axis::Z;
                h3_expected.add_term(
                    PauliTerm(a * g * wij * phase_w[i][k], std::move(axes)));
            }
        }
    }
    if (h3.distance(h3_expected) > tol) {
        rep.fail("H_3 = -i(ag/2)[H_Y,H_C] mismatch");
    }
    text << "H_3 = " << detail::preview(h3) << "\n";

    // full second-order effective generator of exp(-ia H_Y) exp(-ib H_B) exp(-ig H_C)
    const PauliSum h_eff =
        bch_second_order({{a, h_y}, {b, h_b}, {g, h_c}});
    text << "H_eff(BCH) = " << detail::preview(h_eff) << "\n";

    // order-2 nested commutator of H = b H_B + g H_C
    auto order2 = [&](double beta, double gamma) {
        const PauliSum h = cplx(beta, 0) * h_b + cplx(gamma, 0) * h_c;
        const PauliSum seed = commutator(h_b, h_c);
        return cplx(0, 1) * commutator(h, commutator(h, seed));
    };

    const PauliSum k_bg = order2(b, g);
    text << "i[H,[H,[H_B,H_C]]] at (beta,gamma)=(" << b << "," << g
         << ") = " << detail::preview(k_bg) << "\n";

    // family classification: nothing outside {YZ, XYZ, YZZZ}
    std::map<std::string, int> pattern_counts;
    for (const PauliTerm& t : k_bg.terms()) {
        pattern_counts[detail::term_pattern(t)]++;
    }
    for (const auto& [pattern, count] : pattern_counts) {
        if (pattern != "YZ" && pattern != "XYZ" && pattern != "YZZZ") {
            rep.fail("unexpected order-2 term family: " + pattern);
        }
    }

    // YZ family: sign opposite the edge coupling; the Y_iZ_j / Z_iY_j pair is
    // tied only for uniform |w| (with real weights the two pick up different
    // vertex sums)
    for (const Edge& e : inst.edges) {
        const double w = inst.phase_weight(e);
        if (std::abs(w) < 1e-9) continue;
        const cplx cyz = k_bg.coefficient(
            detail::two_site(n, e.i, Axis::Y, e.j, Axis::Z));
        const cplx czy = k_bg.coefficient(
            detail::two_site(n, e.i, Axis::Z, e.j, Axis::Y));
        if (inst.kind != ProblemKind::MaxCutW3R && std::abs(cyz - czy) > tol) {
            rep.fail("YZ/ZY coefficients differ on an edge");
        }
        if (cyz.real() * w >= 0.0 || czy.real() * w >= 0.0) {
            rep.fail("YZ coefficient does not oppose the edge coupling sign");
        }
    }

    // least-squares slope through the origin for coeff = -c * product
    auto fit_constant = [](const std::vector<std::pair<double, double>>& pts) {
        double num = 0.0, den = 0.0;
        for (const auto& [coeff, product] : pts) {
            num -= coeff * product;
            den += product * product;
        }
        return den > 0.0 ? num / den : 0.0;
    };

    // XYZ family: -c3 bg w~_ij w~_ik with one positive global c3
    const PauliSum k_11 = order2(1.0, 1.0);
    std::vector<std::pair<double, double>> xyz_pts;
    for (int i = 0; i < n; ++i) {
        for (const auto& [j, wij] : nbrs[i]) {
            for (const auto& [k, wik] : nbrs[i]) {
                if (j == k) continue;
                std::vector<Axis> axes(n, Axis::I);
                axes[i] = Axis::X;
                axes[j] = Axis::Y;
                axes[k] = Axis::Z;
                xyz_pts.push_back({k_11.coefficient(axes).real(),
                                   phase_w[i][j] * phase_w[i][k]});
            }
        }
    }
    if (!xyz_pts.empty()) {
        rep.c3 = fit_constant(xyz_pts);
        if (rep.c3 <= 0.0) rep.fail("c3 is not positive");
        for (const auto& [coeff, product] : xyz_pts) {
            if (std::abs(coeff + rep.c3 * product) > tol) {
                rep.fail("XYZ coefficient not proportional to w_ij w_ik");
                break;
            }
        }
    }

    // YZZZ family: -c4 g^2 w~ w~ w~ with one positive global c4 (gamma-only
    // point isolates it)
    const PauliSum k_01 = order2(0.0, 1.0);
    std::vector<std::pair<double, double>> yzzz_pts;
    for (int i = 0; i < n; ++i) {
        const auto& nb = nbrs[i];
        for (std::size_t x = 0; x < nb.size(); ++x) {
            for (std::size_t y = x + 1; y < nb.size(); ++y) {
                for (std::size_t z = y + 1; z < nb.size(); ++z) {
                    std::vector<Axis> axes(n, Axis::I);
                    axes[i] = Axis::Y;
                    axes[nb[x].first] = Axis::Z;
                    axes[nb[y].first] = Axis::Z;
                    axes[nb[z].first] = Axis::Z;
                    yzzz_pts.push_back({k_01.coefficient(axes).real(),
                                        phase_w[i][nb[x].first] *
                                            phase_w[i][nb[y].first] *
                                            phase_w[i][nb[z].first]});
                }
            }
        }
    }
    if (!yzzz_pts.empty()) {
        rep.c4 = fit_constant(yzzz_pts);
        if (rep.c4 <= 0.0) rep.fail("c4 is not positive");
        for (const auto& [coeff, product] : yzzz_pts) {
            if (std::abs(coeff + rep.c4 * product) > tol) {
                rep.fail("YZZZ coefficient not proportional to www");
                break;
            }
        }
    }

    // uniform-|w| families admit the global c1 b^2 + c2 g^2 fit of the YZ part
    if (inst.kind != ProblemKind::MaxCutW3R && !inst.edges.empty()) {
        const PauliSum k_10 = order2(1.0, 0.0);
        const Edge& e0 = inst.edges.front();
        const auto yz0 = detail::two_site(n, e0.i, Axis::Y, e0.j, Axis::Z);
        rep.c1 = -k_10.coefficient(yz0).real() / inst.phase_weight(e0);
        rep.c2 = -k_01.coefficient(yz0).real() / inst.phase_weight(e0);
        if (rep.c1 <= 0.0) rep.fail("c1 is not positive");
        if (rep.c2 <= 0.0) rep.fail("c2 is not positive");
        for (const Edge& e : inst.edges) {
            const auto yz = detail::two_site(n, e.i, Axis::Y, e.j, Axis::Z);
            const double expected =
                -(rep.c1 * b * b + rep.c2 * g * g) * inst.phase_weight(e);
            if (std::abs(k_bg.coefficient(yz).real() - expected) > tol) {
                rep.fail("YZ coefficient violates the c1 b^2 + c2 g^2 form");
            }
        }
        text << "fitted constants: c1=" << rep.c1 << " c2=" << rep.c2
             << " c3=" << rep.c3 << " c4=" << rep.c4 << "\n";
    }

    rep.text = text.str();
    return rep;
}

}  // namespace sqaoa
