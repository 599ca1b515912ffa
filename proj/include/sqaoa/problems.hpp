#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqaoa/rng.hpp"
#include "sqaoa/statevector.hpp"

namespace sqaoa {

enum class ProblemKind : std::uint8_t { MaxCutU3R, MaxCutW3R, SK };

inline std::string kind_name(ProblemKind k) {
    switch (k) {
        case ProblemKind::MaxCutU3R: return "u3r";
        case ProblemKind::MaxCutW3R: return "w3r";
        case ProblemKind::SK: return "sk";
    }
    return "?";
}

inline ProblemKind kind_from_name(const std::string& s) {
    if (s == "u3r") return ProblemKind::MaxCutU3R;
    if (s == "w3r") return ProblemKind::MaxCutW3R;
    if (s == "sk") return ProblemKind::SK;
    throw std::invalid_argument("unknown problem kind: " + s);
}

struct Edge {
    int i;
    int j;
    double w;
};

// Weighted graph plus problem family. Immutable after generation; the edge
// list order is the circuit application order downstream.
struct ProblemInstance {
    ProblemKind kind;
    int n = 0;
    std::vector<Edge> edges;
    std::uint64_t seed = 0;

    bool is_maxcut() const { return kind != ProblemKind::SK; }

    // Per-edge coupling entering the circuit exponentials: the MaxCut cost
    // -w(I - ZZ)/2 contributes w/2 per ZZ, the SK cost w ZZ contributes w.
    double phase_weight(const Edge& e) const {
        return is_maxcut() ? 0.5 * e.w : e.w;
    }

    std::string id() const {
        return kind_name(kind) + "_n" + std::to_string(n) + "_s" +
               std::to_string(seed);
    }
};

struct ExactSolution {
    double e_opt = 0.0;
    GroundSpace ground;
    int degeneracy = 0;
};

namespace detail {

// Configuration (stub-pairing) model draw; empty result means the pairing
// produced a self-loop or duplicate edge and must be retried.
inline std::vector<Edge> pair_stubs_3regular(int n, Rng& rng) {
    std::vector<int> stubs;
    stubs.reserve(3 * n);
    for (int v = 0; v < n; ++v) {
        stubs.insert(stubs.end(), 3, v);
    }
    rng.shuffle(stubs);
    std::set<std::pair<int, int>> seen;
    std::vector<Edge> edges;
    edges.reserve(3 * n / 2);
    for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
        int a = stubs[k], b = stubs[k + 1];
        if (a == b) return {};
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second) return {};
        edges.push_back({a, b, 1.0});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        return std::pair(x.i, x.j) < std::pair(y.i, y.j);
    });
    return edges;
}

inline std::vector<Edge> random_3regular(int n, std::uint64_t seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng(mix_seed(seed, attempt));
        std::vector<Edge> edges = pair_stubs_3regular(n, rng);
        if (!edges.empty()) return edges;
    }
}

}  // namespace detail

// Unweighted random 3-regular graph (configuration model with rejection);
// deterministic for a fixed seed.
inline ProblemInstance generate_u3r(int n, std::uint64_t seed) {
    if (n < 4 || n % 2 != 0) {
        throw std::invalid_argument("3-regular graphs need even n >= 4");
    }
    ProblemInstance inst{ProblemKind::MaxCutU3R, n, {}, seed};
    inst.edges = detail::random_3regular(n, seed);
    return inst;
}

// Same topology draw as generate_u3r for the same seed; weights come from an
// independent stream so topology and weight effects can be isolated.
inline ProblemInstance generate_w3r(int n, std::uint64_t seed) {
    ProblemInstance inst = generate_u3r(n, seed);
    inst.kind = ProblemKind::MaxCutW3R;
    Rng weights(mix_seed(seed, 0x77773b77u));
    for (Edge& e : inst.edges) {
        e.w = weights.uniform01();
    }
    return inst;
}

// Complete graph with iid ±1 couplings.
inline ProblemInstance generate_sk(int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("SK model needs n >= 2");
    ProblemInstance inst{ProblemKind::SK, n, {}, seed};
    Rng rng(mix_seed(seed, 0x5c5c5c5cu));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            inst.edges.push_back({i, j, double(rng.sign())});
        }
    }
    return inst;
}

inline ProblemInstance generate(ProblemKind kind, int n, std::uint64_t seed) {
    switch (kind) {
        case ProblemKind::MaxCutU3R: return generate_u3r(n, seed);
        case ProblemKind::MaxCutW3R: return generate_w3r(n, seed);
        case ProblemKind::SK: return generate_sk(n, seed);
    }
    throw std::invalid_argument("bad problem kind");
}

// For hand-built unit-test instances (triangles etc.); validates indices only.
inline ProblemInstance make_instance(ProblemKind kind, int n,
                                     std::vector<Edge> edges,
                                     std::uint64_t seed = 0) {
    for (const Edge& e : edges) {
        if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n || e.i == e.j) {
            throw std::invalid_argument("edge endpoints out of range");
        }
    }
    return ProblemInstance{kind, n, std::move(edges), seed};
}

// MaxCut: -sum w_ij [z_i != z_j]; SK: sum w_ij s_i s_j with s = 1 - 2z.
inline double classical_energy(const ProblemInstance& inst, std::uint64_t z) {
    double e = 0.0;
    if (inst.is_maxcut()) {
        for (const Edge& ed : inst.edges) {
            const bool cut = ((z >> ed.i) ^ (z >> ed.j)) & 1ull;
            if (cut) e -= ed.w;
        }
    } else {
        for (const Edge& ed : inst.edges) {
            const bool anti = ((z >> ed.i) ^ (z >> ed.j)) & 1ull;
            e += anti ? -ed.w : ed.w;
        }
    }
    return e;
}

// h_diag[z] = classical_energy(z) for every basis index.
inline std::vector<double> build_h_diag(const ProblemInstance& inst) {
    if (inst.n > kMaxQubits) {
        throw std::length_error("h_diag limited to 24 qubits");
    }
    const std::size_t dim = std::size_t(1) << inst.n;
    std::vector<double> h(dim, 0.0);
    for (const Edge& ed : inst.edges) {
        const std::uint64_t mask =
            (std::uint64_t(1) << ed.i) | (std::uint64_t(1) << ed.j);
        const double same = inst.is_maxcut() ? 0.0 : ed.w;
        for (std::size_t z = 0; z < dim; ++z) {
            h[z] += (std::popcount(z & mask) & 1) ? -ed.w : same;
        }
    }
    return h;
}

// Exhaustive minimum over all 2^n bitstrings. Ground membership is exact for
// integer-weight families (u3r, sk) and tolerance 1e-9 for w3r real weights.
inline ExactSolution brute_force_solve(const ProblemInstance& inst) {
    if (inst.n > kMaxQubits) {
        throw std::length_error("brute force limited to 24 qubits");
    }
    const std::uint64_t dim = std::uint64_t(1) << inst.n;
    ExactSolution sol;
    sol.e_opt = classical_energy(inst, 0);
    for (std::uint64_t z = 1; z < dim; ++z) {
        sol.e_opt = std::min(sol.e_opt, classical_energy(inst, z));
    }
    const double tol = inst.kind == ProblemKind::MaxCutW3R ? 1e-9 : 0.0;
    for (std::uint64_t z = 0; z < dim; ++z) {
        if (classical_energy(inst, z) <= sol.e_opt + tol) {
            sol.ground.bitstrings.push_back(z);
        }
    }
    sol.degeneracy = static_cast<int>(sol.ground.bitstrings.size());
    return sol;
}

// --- instance file format ------------------------------------------------
// header line: "kind n seed", then one line per edge: "i j w" in full
// decimal precision.

inline void write_instance(std::ostream& os, const ProblemInstance& inst) {
    os << kind_name(inst.kind) << " " << inst.n << " " << inst.seed << "\n";
    os << std::setprecision(17);
    for (const Edge& e : inst.edges) {
        os << e.i << " " << e.j << " " << e.w << "\n";
    }
}

inline void write_instance_file(const std::string& path,
                                const ProblemInstance& inst) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_instance(os, inst);
}

inline ProblemInstance read_instance(std::istream& is) {
    std::string kind;
    int n = 0;
    std::uint64_t seed = 0;
    if (!(is >> kind >> n >> seed)) {
        throw std::runtime_error("malformed instance header");
    }
    ProblemInstance inst{kind_from_name(kind), n, {}, seed};
    Edge e{};
    while (is >> e.i >> e.j >> e.w) {
        if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n) {
            throw std::runtime_error("edge endpoint out of range");
        }
        inst.edges.push_back(e);
    }
    return inst;
}

inline ProblemInstance read_instance_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open instance file: " + path);
    return read_instance(is);
}

}  // namespace sqaoa
