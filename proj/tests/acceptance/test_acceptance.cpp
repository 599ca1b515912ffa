// Acceptance suite: one test case per numbered criterion, each printing a
// single [PASS]/[FAIL] line. Cohort runs are shared between criteria through
// memoized helpers; every experiment config is pinned here, including the
// optimizer budgets, so reruns are deterministic.

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "sqaoa/cd_checks.hpp"
#include "sqaoa/dense.hpp"
#include "sqaoa/experiments.hpp"
#include "sqaoa/hamiltonians.hpp"
#include "sqaoa/optimizer.hpp"
#include "sqaoa/problems.hpp"
#include "../support.hpp"

using namespace sqaoa;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void report(int criterion, const std::string& what, bool ok) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
                what.c_str());
    std::fflush(stdout);
}

AnsatzSpec spec_qaoa() {
    AnsatzSpec s;
    s.family = AnsatzFamily::Qaoa;
    s.mixers.clear();
    return s;
}

AnsatzSpec spec_zz() {
    AnsatzSpec s;
    s.family = AnsatzFamily::ZzFree;
    s.mixers.clear();
    return s;
}

AnsatzSpec spec_mixer(MixerKind kind, bool gathered) {
    AnsatzSpec s;
    s.family = AnsatzFamily::SQaoa;
    s.mixers = {kind};
    s.gathered = gathered;
    return s;
}

struct CohortStats {
    std::vector<ExperimentRecord> records;
    double wall_seconds = 0.0;
};

CohortStats run_cohort(const ExperimentConfig& cfg) {
    const auto t0 = clock_type::now();
    ExperimentOutput out = run_experiment(cfg);
    CohortStats stats;
    stats.records = std::move(out.records);
    stats.wall_seconds = seconds_since(t0);
    REQUIRE(out.failures.empty());
    return stats;
}

double mean_fidelity(const CohortStats& s, const std::string& family, int p) {
    double sum = 0.0;
    int count = 0;
    for (const ExperimentRecord& r : s.records) {
        if (r.family == family && r.depth == p) {
            sum += r.fidelity;
            ++count;
        }
    }
    REQUIRE(count > 0);
    return sum / count;
}

double fidelity_std(const CohortStats& s, const std::string& family, int p) {
    const double mean = mean_fidelity(s, family, p);
    double var = 0.0;
    int count = 0;
    for (const ExperimentRecord& r : s.records) {
        if (r.family == family && r.depth == p) {
            var += (r.fidelity - mean) * (r.fidelity - mean);
            ++count;
        }
    }
    return std::sqrt(var / count);
}

double mean_fractional_error(const CohortStats& s, const std::string& family,
                             int p) {
    double sum = 0.0;
    int count = 0;
    for (const ExperimentRecord& r : s.records) {
        if (r.family == family && r.depth == p) {
            sum += r.fractional_error;
            ++count;
        }
    }
    REQUIRE(count > 0);
    return sum / count;
}

double fractional_error_std(const CohortStats& s, const std::string& family,
                            int p) {
    const double mean = mean_fractional_error(s, family, p);
    double var = 0.0;
    int count = 0;
    for (const ExperimentRecord& r : s.records) {
        if (r.family == family && r.depth == p) {
            var += (r.fractional_error - mean) * (r.fractional_error - mean);
            ++count;
        }
    }
    return std::sqrt(var / count);
}

std::vector<double> rfp_values(const CohortStats& s, const std::string& family,
                               int p) {
    std::map<std::uint64_t, const ExperimentRecord*> qaoa;
    for (const ExperimentRecord& r : s.records) {
        if (r.family == "QAOA" && r.depth == p) qaoa[r.instance_seed] = &r;
    }
    std::vector<double> out;
    for (const ExperimentRecord& r : s.records) {
        if (r.family != family || r.depth != p) continue;
        const RatioMetrics m = ratio_metrics(*qaoa.at(r.instance_seed), r);
        REQUIRE(m.valid);
        out.push_back(m.r_fp);
    }
    return out;
}

double median(std::vector<double> v) {
    REQUIRE(!v.empty());
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

// nesting check: every released-family record sits at or below the QAOA
// energy of the same instance and depth
bool nesting_holds(const CohortStats& s, int p_max) {
    std::map<std::pair<std::uint64_t, int>, double> qaoa_energy;
    for (const ExperimentRecord& r : s.records) {
        if (r.family == "QAOA") {
            qaoa_energy[{r.instance_seed, r.depth}] = r.energy;
        }
    }
    for (const ExperimentRecord& r : s.records) {
        if (r.family == "QAOA" || r.depth > p_max) continue;
        if (r.energy > qaoa_energy.at({r.instance_seed, r.depth}) + 1e-10) {
            return false;
        }
    }
    return true;
}

// --- pinned cohort configurations ------------------------------------------

// SK n=6, quality-oriented budgets (criterion 5: the p=1 fidelity headline)
const CohortStats& sk_quality_cohort() {
    static const CohortStats stats = [] {
        ExperimentConfig cfg;
        cfg.kind = ProblemKind::SK;
        cfg.n = 6;
        cfg.cohort = 20;
        cfg.seed_base = 1;
        cfg.p_max = 1;
        cfg.ansatzes = {spec_qaoa(), spec_zz(), spec_mixer(MixerKind::YY, true)};
        cfg.optimizer.restarts = 10;
        cfg.optimizer.gradient_threshold = 1e-4;
        cfg.optimizer.energy_decrease_tol = 1e-6;
        cfg.optimizer.max_outer_iterations = 15;
        cfg.optimizer.inner.max_evals = 4000;
        cfg.optimizer.inner.tolerance = 1e-9;
        cfg.optimizer.inner.initial_step = 0.4;
        cfg.threads = 2;
        return run_cohort(cfg);
    }();
    return stats;
}

// SK n=6, cost-efficiency budgets (criterion 7: R_fp accounting)
const CohortStats& sk_efficiency_cohort() {
    static const CohortStats stats = [] {
        ExperimentConfig cfg;
        cfg.kind = ProblemKind::SK;
        cfg.n = 6;
        cfg.cohort = 20;
        cfg.seed_base = 1;
        cfg.p_max = 4;
        cfg.ansatzes = {spec_qaoa(), spec_mixer(MixerKind::YY, true)};
        cfg.optimizer.restarts = 12;
        cfg.optimizer.energy_decrease_tol = 2e-3;
        cfg.optimizer.max_outer_iterations = 2;
        cfg.optimizer.refine_max_evals = 500;
        cfg.optimizer.inner.max_evals = 2500;
        cfg.optimizer.inner.tolerance = 1e-8;
        cfg.optimizer.inner.initial_step = 0.4;
        cfg.threads = 2;
        return run_cohort(cfg);
    }();
    return stats;
}

// u3R n=14 paper-scale cohort, efficiency budgets (criterion 4 nesting and
// the u3R half of criterion 7)
const CohortStats& u3r14_cohort() {
    static const CohortStats stats = [] {
        ExperimentConfig cfg;
        cfg.kind = ProblemKind::MaxCutU3R;
        cfg.n = 14;
        cfg.cohort = 20;
        cfg.seed_base = 1;
        cfg.p_max = 5;
        cfg.ansatzes = {spec_qaoa(), spec_mixer(MixerKind::YY, true)};
        cfg.optimizer.restarts = 20;
        cfg.optimizer.energy_decrease_tol = 5e-3;
        cfg.optimizer.max_outer_iterations = 1;
        cfg.optimizer.refine_max_evals = 500;
        cfg.optimizer.inner.max_evals = 2500;
        cfg.optimizer.inner.tolerance = 1e-8;
        cfg.optimizer.inner.initial_step = 0.4;
        cfg.threads = 2;
        return run_cohort(cfg);
    }();
    return stats;
}

// n=10 smoke cohorts for the ordering trend (criterion 6)
ExperimentConfig smoke_config(ProblemKind kind) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.n = 10;
    cfg.cohort = 20;
    cfg.seed_base = 1;
    cfg.p_max = 5;
    cfg.ansatzes = {spec_qaoa(), spec_zz(), spec_mixer(MixerKind::YY, true)};
    cfg.optimizer.restarts = 10;
    cfg.optimizer.energy_decrease_tol = 1e-5;
    cfg.optimizer.max_outer_iterations = 8;
    cfg.optimizer.refine_max_evals = 1500;
    cfg.optimizer.inner.max_evals = 3000;
    cfg.optimizer.inner.tolerance = 1e-8;
    cfg.optimizer.inner.initial_step = 0.4;
    cfg.threads = 2;
    return cfg;
}

const CohortStats& u3r_smoke_cohort() {
    static const CohortStats stats =
        run_cohort(smoke_config(ProblemKind::MaxCutU3R));
    return stats;
}

const CohortStats& w3r_smoke_cohort() {
    static const CohortStats stats =
        run_cohort(smoke_config(ProblemKind::MaxCutW3R));
    return stats;
}

// mixer-comparison cohorts (criterion 8): ZZ baseline plus all five
// interaction types, ungathered, 10 instances each
ExperimentConfig mixer_config(ProblemKind kind, int n) {
    ExperimentConfig cfg;
    cfg.kind = kind;
    cfg.n = n;
    cfg.cohort = 10;
    cfg.seed_base = 1;
    cfg.p_max = 3;
    cfg.ansatzes = {spec_qaoa(),
                    spec_zz(),
                    spec_mixer(MixerKind::YZ, false),
                    spec_mixer(MixerKind::YY, false),
                    spec_mixer(MixerKind::XX, false),
                    spec_mixer(MixerKind::XZ, false),
                    spec_mixer(MixerKind::XY, false)};
    cfg.optimizer.restarts = 10;
    cfg.optimizer.gradient_threshold = 1e-4;
    cfg.optimizer.energy_decrease_tol = 1e-5;
    cfg.optimizer.max_outer_iterations = 8;
    cfg.optimizer.refine_max_evals = 1200;
    cfg.optimizer.inner.max_evals = 3000;
    cfg.optimizer.inner.tolerance = 1e-8;
    cfg.optimizer.inner.initial_step = 0.4;
    cfg.threads = 2;
    return cfg;
}

const CohortStats& mixer_cohort(ProblemKind kind) {
    static const CohortStats u3r =
        run_cohort(mixer_config(ProblemKind::MaxCutU3R, 10));
    static const CohortStats w3r =
        run_cohort(mixer_config(ProblemKind::MaxCutW3R, 10));
    static const CohortStats sk = run_cohort(mixer_config(ProblemKind::SK, 6));
    switch (kind) {
        case ProblemKind::MaxCutU3R: return u3r;
        case ProblemKind::MaxCutW3R: return w3r;
        case ProblemKind::SK: return sk;
    }
    throw std::logic_error("bad kind");
}

}  // namespace

TEST_CASE("criterion 1: symbolic counterdiabatic identities", "[acceptance]") {
    const auto t0 = clock_type::now();
    bool ok = true;
    for (int k = 0; k < 10; ++k) {
        for (const ProblemKind kind : {ProblemKind::MaxCutU3R,
                                       ProblemKind::MaxCutW3R, ProblemKind::SK}) {
            const int n = kind == ProblemKind::SK ? 6 : 8;
            const CdReport rep =
                verify_cd_identities(generate(kind, n, 1000 + k));
            if (!rep.ok) {
                UNSCOPED_INFO(kind_name(kind) << " seed " << 1000 + k << ": "
                                              << rep.failures.front());
                ok = false;
            }
        }
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 1.0;
    report(1, "symbolic CD identities on 30 instances, " +
                  std::to_string(secs) + " s (< 1 s)",
           ok);
    CHECK(ok);
}

TEST_CASE("criterion 2: simulator equals dense unitary products",
          "[acceptance]") {
    const auto t0 = clock_type::now();
    Rng rng(2026);
    double worst = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
        const ProblemKind kind =
            std::array{ProblemKind::MaxCutU3R, ProblemKind::MaxCutW3R,
                       ProblemKind::SK}[draw % 3];
        const int n = kind == ProblemKind::SK ? 5 : 6;
        const ProblemInstance inst = generate(kind, n, 300 + draw);

        AnsatzSpec spec;
        switch (draw % 4) {
            case 0: spec = spec_qaoa(); break;
            case 1: spec = spec_mixer(MixerKind::YY, true); break;
            case 2: spec = spec_mixer(MixerKind(1 + draw % 5), false); break;
            default: spec = spec_zz(); break;
        }
        spec.layers = 1 + int(rng.below(2));

        std::vector<double> params(param_count(spec, inst));
        for (double& v : params) v = rng.uniform(-1.5, 1.5);

        StateVector state = StateVector::plus_state(n);
        apply_ansatz(spec, inst, params, state);
        const Eigen::VectorXcd expected =
            test_support::dense_circuit_unitary(spec, inst, params) *
            StateVector::plus_state(n).to_eigen();
        for (std::size_t z = 0; z < state.size(); ++z) {
            worst = std::max(worst, std::abs(state[z] - expected(z)));
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = worst < 1e-8 && secs < 10.0;
    report(2, "50 random circuits vs dense products, max deviation " +
                  std::to_string(worst) + " (< 1e-8), " + std::to_string(secs) +
                  " s (< 10 s)",
           ok);
    CHECK(ok);
}

TEST_CASE("criterion 3: two-CNOT edge blocks", "[acceptance]") {
    const auto t0 = clock_type::now();
    double worst = 0.0;
    bool cnots_ok = true;
    for (const MixerKind kind : {MixerKind::YY, MixerKind::XX}) {
        for (int ti = 0; ti < 5; ++ti) {
            for (int ai = 0; ai < 4; ++ai) {
                const double theta = -1.1 + 0.55 * ti;
                const double alpha = -0.8 + 0.5 * ai;
                const GateList block = compile_edge_block(theta, alpha, kind);
                cnots_ok = cnots_ok && count_cnots(block) == 2;
                const Eigen::Matrix4cd exact = two_body_unitary(
                    two_body_basis(1.0, alpha, kind), theta);
                worst = std::max(
                    worst, phase_invariant_distance(compose_gate_list(block),
                                                    Eigen::MatrixXcd(exact)));
            }
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = worst < 1e-10 && cnots_ok && secs < 1.0;
    report(3, "YY/XX blocks on a 20-point grid, max phase-invariant deviation " +
                  std::to_string(worst) + " (< 1e-10), 2 CNOTs each",
           ok);
    CHECK(ok);
}

TEST_CASE("criterion 4: refined energy never exceeds QAOA at n=14",
          "[acceptance]") {
    const CohortStats& stats = u3r14_cohort();
    const bool nest = nesting_holds(stats, 5);
    const bool ok = nest && stats.wall_seconds < 900.0;
    report(4, "20-instance u3R n=14 cohort, p <= 5, nesting holds, " +
                  std::to_string(stats.wall_seconds) + " s (< 900 s)",
           ok);
    CHECK(ok);
}

TEST_CASE("criterion 5: SK p=1 fidelity headline", "[acceptance]") {
    const CohortStats& stats = sk_quality_cohort();
    const double yy = mean_fidelity(stats, "YY", 1);
    const double zz = mean_fidelity(stats, "ZZ", 1);
    const double qaoa = mean_fidelity(stats, "QAOA", 1);
    const bool ok = yy >= 0.65 && yy > zz && yy > qaoa;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "SK n=6 p=1 mean fidelity YY=%.3f (>= 0.65), ZZ=%.3f, "
                  "QAOA=%.3f",
                  yy, zz, qaoa);
    report(5, buf, ok);
    CHECK(ok);
}

TEST_CASE("criterion 6: fidelity ordering trend on MaxCut cohorts",
          "[acceptance]") {
    bool ok = true;
    for (const auto* stats : {&u3r_smoke_cohort(), &w3r_smoke_cohort()}) {
        for (int p = 1; p <= 5; ++p) {
            const double yy = mean_fidelity(*stats, "YY", p);
            const double zz = mean_fidelity(*stats, "ZZ", p);
            const double qaoa = mean_fidelity(*stats, "QAOA", p);
            const double se_yz = std::sqrt(
                (std::pow(fidelity_std(*stats, "YY", p), 2) +
                 std::pow(fidelity_std(*stats, "ZZ", p), 2)) / 20.0);
            const double se_zq = std::sqrt(
                (std::pow(fidelity_std(*stats, "ZZ", p), 2) +
                 std::pow(fidelity_std(*stats, "QAOA", p), 2)) / 20.0);
            if (yy < zz - se_yz || zz < qaoa - se_zq) ok = false;
        }
    }
    const double total_secs =
        u3r_smoke_cohort().wall_seconds + w3r_smoke_cohort().wall_seconds;
    ok = ok && total_secs < 900.0;
    report(6, "u3R/w3R n=10 smoke cohorts: YY >= ZZ >= QAOA within one SE at "
              "every p in 1..5, " + std::to_string(total_secs) +
                  " s (< 900 s)",
           ok);
    CHECK(ok);
}

TEST_CASE("criterion 7: evaluation accounting and R_fp medians",
          "[acceptance]") {
    bool identity_ok = true;
    for (const auto* stats :
         {&sk_quality_cohort(), &sk_efficiency_cohort(), &u3r14_cohort()}) {
        for (const ExperimentRecord& r : stats->records) {
            if (r.f_q < 0 || r.f_g < 0 || r.f_o < 0) identity_ok = false;
            if (r.family == "QAOA" && (r.f_g != 0 || r.f_o != 0)) {
                identity_ok = false;
            }
        }
    }

    bool medians_ok = true;
    char buf[64];
    std::string detail;
    for (int p = 1; p <= 4; ++p) {
        const double sk_med = median(rfp_values(sk_efficiency_cohort(), "YY", p));
        const double u3r_med = median(rfp_values(u3r14_cohort(), "YY", p));
        std::snprintf(buf, sizeof buf, " p%d: sk=%.2f u3r=%.2f;", p, sk_med,
                      u3r_med);
        detail += buf;
        if (sk_med >= 1.0 || u3r_med >= 1.0) medians_ok = false;
    }
    const bool ok = identity_ok && medians_ok;
    report(7, "f_S = f_Q+f_G+f_O and median R_fp < 1 at p <= 4;" + detail, ok);
    CHECK(ok);
}

TEST_CASE("criterion 8: mixer ranking", "[acceptance]") {
    bool yy_best = true;
    bool xz_xy_like_zz = true;
    for (const ProblemKind kind : {ProblemKind::MaxCutU3R,
                                   ProblemKind::MaxCutW3R, ProblemKind::SK}) {
        const CohortStats& stats = mixer_cohort(kind);
        for (int p = 1; p <= 3; ++p) {
            const double yy = mean_fractional_error(stats, "YY-ungathered", p);
            for (const std::string fam :
                 {"YZ-ungathered", "XX-ungathered", "XZ-ungathered",
                  "XY-ungathered"}) {
                if (yy > mean_fractional_error(stats, fam, p) + 1e-12) {
                    yy_best = false;
                }
            }
            const double zz_mean = mean_fractional_error(stats, "ZZ", p);
            const double zz_std = fractional_error_std(stats, "ZZ", p);
            for (const std::string fam : {"XZ-ungathered", "XY-ungathered"}) {
                const double m = mean_fractional_error(stats, fam, p);
                const double s = fractional_error_std(stats, fam, p);
                const double se = std::sqrt((s * s + zz_std * zz_std) / 10.0);
                if (std::abs(m - zz_mean) > se) xz_xy_like_zz = false;
            }
        }
    }
    const bool ok = yy_best && xz_xy_like_zz;
    report(8, std::string("YY mean fractional error <= every other mixer at "
                          "p in 1..3 for all families (") +
                  (yy_best ? "holds" : "violated") +
                  "); XZ/XY within one SE of ZZ (" +
                  (xz_xy_like_zz ? "holds" : "violated") + ")",
           ok);
    CHECK(ok);
}

TEST_CASE("criterion 9: brute-force oracle", "[acceptance]") {
    Rng rng(909);
    bool ok = true;
    for (const ProblemKind kind : {ProblemKind::MaxCutU3R,
                                   ProblemKind::MaxCutW3R, ProblemKind::SK}) {
        for (int k = 0; k < 100; ++k) {
            int n;
            if (kind == ProblemKind::SK) {
                n = 2 + int(rng.below(9));  // 2..10
            } else {
                n = 4 + 2 * int(rng.below(4));  // 4, 6, 8, 10
            }
            const ProblemInstance inst = generate(kind, n, 5000 + k);
            const ExactSolution sol = brute_force_solve(inst);

            // independent route: h_diag minimum + membership rescan
            const std::vector<double> diag = build_h_diag(inst);
            double min_e = diag[0];
            for (double v : diag) min_e = std::min(min_e, v);
            if (min_e != sol.e_opt) ok = false;
            const double tol = kind == ProblemKind::MaxCutW3R ? 1e-9 : 0.0;
            std::vector<std::uint64_t> ground;
            for (std::uint64_t z = 0; z < diag.size(); ++z) {
                if (diag[z] <= min_e + tol) ground.push_back(z);
            }
            if (ground != sol.ground.bitstrings) ok = false;
        }
    }
    const ExactSolution k4 = brute_force_solve(generate_u3r(4, 77));
    ok = ok && k4.e_opt == -4.0 && k4.degeneracy == 6;
    report(9, "brute force vs h_diag minimum on 300 instances; K4 gives "
              "e_opt=-4 with degeneracy 6",
           ok);
    CHECK(ok);
}

TEST_CASE("criterion 10: first-order convergence of forward differences",
          "[acceptance]") {
    Rng rng(1010);
    const ProblemInstance inst = generate_sk(6, 4242);
    const CircuitContext ctx(inst);
    AnsatzSpec depth_spec = spec_mixer(MixerKind::YY, true);
    depth_spec.layers = 2;
    EnergyObjective objective(depth_spec, ctx);
    const int dim = param_count(depth_spec, inst);

    int valid = 0, in_range = 0, attempts = 0;
    std::int64_t scratch = 0;
    const double eps = 4e-3;
    while (valid < 100 && attempts < 2000) {
        ++attempts;
        std::vector<double> params(dim);
        for (double& v : params) v = rng.uniform(-1.5, 1.5);
        const std::size_t k = rng.below(dim);

        const double base = objective(params, scratch);
        auto shifted_value = [&](double step) {
            std::vector<double> x = params;
            x[k] += step;
            return objective(x, scratch);
        };
        const double g1 = (shifted_value(eps) - base) / eps;
        const double g2 = (shifted_value(eps / 2) - base) / (eps / 2);
        const double g4 = (shifted_value(eps / 4) - base) / (eps / 4);

        // skip stationary or curvature-free points, where the ratio test is
        // undefined
        if (std::abs(g2) < 1e-2 || std::abs(g2 - g4) < 2e-4) continue;
        ++valid;
        const double ratio = (g1 - g2) / (g2 - g4);
        if (ratio > 1.5 && ratio < 2.5) ++in_range;
    }
    const bool ok = valid == 100 && in_range == 100;
    report(10, "halving epsilon halves the forward-difference deviation at " +
                   std::to_string(in_range) + "/100 sampled points",
           ok);
    CHECK(ok);
}
