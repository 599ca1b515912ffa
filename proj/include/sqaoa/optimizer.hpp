#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sqaoa/ansatz.hpp"
#include "sqaoa/nelder_mead.hpp"
#include "sqaoa/problems.hpp"
#include "sqaoa/rng.hpp"

namespace sqaoa {

struct InnerOptimizerConfig {
    std::string method = "nelder-mead";  // or "gradient-descent"
    int max_evals = 4000;                // objective-evaluation budget per run
    double tolerance = 1e-8;
    double initial_step = 0.1;
};

struct OptimizerConfig {
    double fd_epsilon = 1e-3;           // forward-difference step
    double gradient_threshold = 1e-3;   // delta_1: |g| above this is released
    double energy_decrease_tol = 1e-6;  // delta_2: outer-loop exit
    int restarts = 10;                  // random seeds tried at p = 1
    int max_outer_iterations = 40;      // hard cap on the screen/optimize loop
    int refine_max_evals = 0;           // per-outer budget of the refinement
                                        // stage; 0 falls back to inner.max_evals
    std::string refine_method;          // override of inner.method for the
                                        // refinement stage; empty = same
    std::uint64_t seed = 0;
    InnerOptimizerConfig inner;

    void validate() const {
        if (fd_epsilon <= 0) {
            throw std::invalid_argument("fd_epsilon must be positive");
        }
        if (gradient_threshold < 0) {
            throw std::invalid_argument("gradient_threshold must be >= 0");
        }
        if (energy_decrease_tol <= 0) {
            throw std::invalid_argument("energy_decrease_tol must be positive");
        }
        if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
        if (max_outer_iterations < 1) {
            throw std::invalid_argument("max_outer_iterations must be >= 1");
        }
    }
};

// f_S = f_Q + f_G + f_O: QAOA phase, gradient screening, refinement.
struct EvalCounter {
    std::int64_t f_q = 0;
    std::int64_t f_g = 0;
    std::int64_t f_o = 0;
    std::int64_t total() const { return f_q + f_g + f_o; }
};

struct TraceRecord {
    int depth;
    std::string phase;  // "qaoa" or "refine"
    double energy;
    EvalCounter counter;
};
using TraceSink = std::function<void(const TraceRecord&)>;

struct OptimizationResult {
    std::vector<double> params;
    double energy = 0.0;
    double fidelity = 0.0;
    std::vector<double> trace;  // energy per outer iteration
    EvalCounter counter;        // cumulative when this result was produced
    bool inner_converged = true;
};

// Objective bound to one instance and ansatz: expectation of the exact cost
// diagonal after running the circuit from |+>^n. Owns a scratch state so the
// hot loop does not allocate. Every call increments the caller's counter slot.
class EnergyObjective {
  public:
    EnergyObjective(AnsatzSpec spec, const CircuitContext& ctx)
        : spec_(std::move(spec)), ctx_(&ctx), state_(ctx.n) {
        spec_.validate();
    }

    double operator()(std::span<const double> params, std::int64_t& slot) {
        ++slot;
        state_.reset_to_plus();
        apply_ansatz(spec_, *ctx_, params, state_);
        return expectation_diagonal(state_, ctx_->h_diag);
    }

    // metric evaluation, not counted
    double fidelity_of(std::span<const double> params, const GroundSpace& gs) {
        state_.reset_to_plus();
        apply_ansatz(spec_, *ctx_, params, state_);
        return fidelity(state_, gs);
    }

    const AnsatzSpec& spec() const { return spec_; }

  private:
    AnsatzSpec spec_;
    const CircuitContext* ctx_;
    StateVector state_;
};

// --- INTERP -----------------------------------------------------------------

// Depth p -> p+1 warm start: each of the gamma and beta schedules is resampled
// by linear interpolation,
//   new_i = ((i-1)/p) old_{i-1} + ((p-i+1)/p) old_i,  i = 1..p+1,
// with old_0 = old_{p+1} = 0, i.e. the new schedule samples the piecewise
// linear envelope of the old one at p+1 evenly spaced positions.
inline std::vector<double> interp_extend(std::span<const double> qaoa_params) {
    if (qaoa_params.empty()) {
        throw std::invalid_argument("cannot extend an empty parameter vector");
    }
    if (qaoa_params.size() % 2 != 0) {
        throw std::invalid_argument("qaoa layout is (gammas..., betas...)");
    }
    const int p = static_cast<int>(qaoa_params.size()) / 2;
    auto resample = [p](const double* old) {
        std::vector<double> out(p + 1);
        for (int i = 1; i <= p + 1; ++i) {
            const double lo = (i >= 2) ? old[i - 2] : 0.0;
            const double hi = (i <= p) ? old[i - 1] : 0.0;
            out[i - 1] = (double(i - 1) / p) * lo + (double(p - i + 1) / p) * hi;
        }
        return out;
    };
    std::vector<double> gammas = resample(qaoa_params.data());
    std::vector<double> betas = resample(qaoa_params.data() + p);
    gammas.insert(gammas.end(), betas.begin(), betas.end());
    return gammas;
}

// --- inner local search -------------------------------------------------------

namespace detail {

// Forward-difference gradient descent with backtracking; the derivative-light
// alternative to the simplex search.
inline NelderMeadResult gradient_descent(
    const std::function<double(std::span<const double>)>& f,
    std::vector<double> x0, const NelderMeadOptions& opt, double fd_eps) {
    NelderMeadResult res;
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    std::vector<double> x = std::move(x0), grad(x.size()), cand(x.size());
    double fx = eval(x);
    double step = opt.initial_step;
    while (evals + std::ssize(x) < opt.max_evals) {
        for (std::size_t k = 0; k < x.size(); ++k) {
            cand = x;
            cand[k] += fd_eps;
            grad[k] = (eval(cand) - fx) / fd_eps;
        }
        double gnorm = 0.0;
        for (double g : grad) gnorm += g * g;
        gnorm = std::sqrt(gnorm);
        if (gnorm < opt.f_tol) {
            res.converged = true;
            break;
        }
        bool accepted = false;
        double t = step / gnorm;
        for (int tries = 0; tries < 20 && evals < opt.max_evals; ++tries) {
            for (std::size_t k = 0; k < x.size(); ++k) {
                cand[k] = x[k] - t * grad[k];
            }
            const double fc = eval(cand);
            if (fc < fx) {
                const double gain = fx - fc;
                x = cand;
                fx = fc;
                accepted = true;
                step = std::min(step * 1.5, 1.0);
                if (gain < opt.f_tol) {
                    res.converged = true;
                }
                break;
            }
            t *= 0.5;
        }
        if (!accepted || res.converged) {
            res.converged = true;
            break;
        }
    }
    res.x = std::move(x);
    res.fx = fx;
    res.evals = evals;
    return res;
}

inline NelderMeadResult run_inner(
    const std::function<double(std::span<const double>)>& f,
    std::vector<double> x0, const OptimizerConfig& cfg) {
    NelderMeadOptions opt;
    opt.max_evals = cfg.inner.max_evals;
    opt.f_tol = cfg.inner.tolerance;
    opt.initial_step = cfg.inner.initial_step;
    if (cfg.inner.method == "nelder-mead") {
        return nelder_mead(f, std::move(x0), opt);
    }
    if (cfg.inner.method == "gradient-descent") {
        return gradient_descent(f, std::move(x0), opt, cfg.fd_epsilon);
    }
    throw std::invalid_argument("unknown inner optimizer: " + cfg.inner.method);
}

}  // namespace detail

// --- gradient screening -------------------------------------------------------

// Forward differences g_k = (E(x + eps e_k) - E(x)) / eps for every
// parameter; spends params.size() + 1 evaluations on the supplied counter
// slot. Also returns the base energy.
inline std::pair<std::vector<double>, double> finite_diff_gradients(
    EnergyObjective& objective, std::span<const double> params, double eps,
    std::int64_t& slot) {
    if (eps <= 0) throw std::invalid_argument("fd step must be positive");
    const double base = objective(params, slot);
    std::vector<double> grad(params.size());
    std::vector<double> shifted(params.begin(), params.end());
    for (std::size_t k = 0; k < params.size(); ++k) {
        shifted[k] += eps;
        grad[k] = (objective(shifted, slot) - base) / eps;
        shifted[k] = params[k];
    }
    return {std::move(grad), base};
}

inline std::vector<double> finite_diff_gradients(const ProblemInstance& inst,
                                                 const AnsatzSpec& spec,
                                                 std::span<const double> params,
                                                 double eps) {
    CircuitContext ctx(inst);
    EnergyObjective obj(spec, ctx);
    std::int64_t scratch = 0;
    return finite_diff_gradients(obj, params, eps, scratch).first;
}

// Indices with |g| strictly above delta_1.
inline std::vector<int> select_active_set(std::span<const double> gradients,
                                          double delta1) {
    std::vector<int> active;
    for (std::size_t k = 0; k < gradients.size(); ++k) {
        if (std::abs(gradients[k]) > delta1) {
            active.push_back(static_cast<int>(k));
        }
    }
    return active;
}

// --- pipeline -----------------------------------------------------------------

// Everything derived from one instance that the optimization loop needs.
struct PipelineContext {
    CircuitContext circuit;
    ExactSolution exact;
    std::uint64_t instance_seed;

    explicit PipelineContext(const ProblemInstance& inst)
        : circuit(inst), exact(brute_force_solve(inst)),
          instance_seed(inst.seed) {}
};

namespace detail {

inline AnsatzSpec qaoa_spec(int layers) {
    AnsatzSpec s;
    s.family = AnsatzFamily::Qaoa;
    s.layers = layers;
    s.mixers.clear();
    s.gathered = true;
    return s;
}

}  // namespace detail

// Step 1: layerwise QAOA. Depth 1 takes the best of `restarts` random seeds;
// each further depth starts from the INTERP extension of the previous
// optimum, with the zero-padded extension as a fallback start whenever the
// INTERP result fails to reach the previous depth's energy. Returns one
// result per depth; counters are cumulative across the chain.
inline std::vector<OptimizationResult> optimize_qaoa_interp(
    const PipelineContext& ctx, int p_max, const OptimizerConfig& cfg,
    const TraceSink& sink = nullptr) {
    cfg.validate();
    if (p_max < 1) throw std::invalid_argument("depth must be >= 1");

    std::vector<OptimizationResult> results;
    results.reserve(p_max);
    EvalCounter counter;
    Rng rng(mix_seed(mix_seed(ctx.instance_seed, cfg.seed), 0x9a0a));

    for (int p = 1; p <= p_max; ++p) {
        EnergyObjective objective(detail::qaoa_spec(p), ctx.circuit);
        auto fn = [&](std::span<const double> x) {
            return objective(x, counter.f_q);
        };

        NelderMeadResult best;
        best.fx = std::numeric_limits<double>::infinity();
        if (p == 1) {
            for (int r = 0; r < cfg.restarts; ++r) {
                std::vector<double> x0 = {
                    rng.uniform(-std::numbers::pi, std::numbers::pi),
                    rng.uniform(-std::numbers::pi / 2, std::numbers::pi / 2)};
                NelderMeadResult cand = detail::run_inner(fn, std::move(x0), cfg);
                if (cand.fx < best.fx) best = std::move(cand);
            }
        } else {
            const OptimizationResult& prev = results.back();
            best = detail::run_inner(fn, interp_extend(prev.params), cfg);
            if (best.fx > prev.energy - 1e-12) {
                // padded circuit reproduces the depth-(p-1) value exactly, so
                // this start restores depth monotonicity
                std::vector<double> padded(prev.params.begin(),
                                           prev.params.begin() + (p - 1));
                padded.push_back(0.0);
                padded.insert(padded.end(), prev.params.begin() + (p - 1),
                              prev.params.end());
                padded.push_back(0.0);
                NelderMeadResult cand =
                    detail::run_inner(fn, std::move(padded), cfg);
                if (cand.fx < best.fx) best = std::move(cand);
            }
        }

        OptimizationResult out;
        out.params = best.x;
        out.energy = best.fx;
        out.fidelity = objective.fidelity_of(best.x, ctx.exact.ground);
        out.trace = {best.fx};
        out.counter = counter;
        out.inner_converged = best.converged;
        if (sink) sink({p, "qaoa", out.energy, counter});
        results.push_back(std::move(out));
    }
    return results;
}

// Steps 2-4 for one depth: start from the embedded QAOA optimum, then loop
// {screen gradients, optimize the released set with everything else frozen,
// stop when the energy decrease falls below delta_2 or nothing is released}.
// Improvements are always kept, so the refined energy never exceeds the
// starting energy.
inline OptimizationResult sqaoa_refine(const AnsatzSpec& spec,
                                       const PipelineContext& ctx,
                                       const OptimizationResult& qaoa_result,
                                       const OptimizerConfig& cfg,
                                       const TraceSink& sink = nullptr) {
    cfg.validate();
    spec.validate();
    if (spec.family == AnsatzFamily::Qaoa) {
        throw std::invalid_argument("refinement applies to released ansatzes");
    }
    const int num_edges = static_cast<int>(ctx.circuit.edges.size());

    EvalCounter counter;
    counter.f_q = qaoa_result.counter.f_q;

    EnergyObjective objective(spec, ctx.circuit);
    std::vector<double> params =
        embed_qaoa_params(spec, num_edges, qaoa_result.params);

    OptimizationResult out;
    double energy = qaoa_result.energy;
    bool converged = true;

    for (int outer = 0; outer < cfg.max_outer_iterations; ++outer) {
        auto [grad, base] =
            finite_diff_gradients(objective, params, cfg.fd_epsilon, counter.f_g);
        energy = base;
        const std::vector<int> active =
            select_active_set(grad, cfg.gradient_threshold);
        if (active.empty()) break;

        std::vector<double> x0(active.size());
        for (std::size_t k = 0; k < active.size(); ++k) {
            x0[k] = params[active[k]];
        }
        std::vector<double> full = params;
        auto fn = [&](std::span<const double> x) {
            for (std::size_t k = 0; k < active.size(); ++k) {
                full[active[k]] = x[k];
            }
            return objective(full, counter.f_o);
        };
        OptimizerConfig inner_cfg = cfg;
        if (cfg.refine_max_evals > 0) {
            inner_cfg.inner.max_evals = cfg.refine_max_evals;
        }
        if (!cfg.refine_method.empty()) {
            inner_cfg.inner.method = cfg.refine_method;
        }
        NelderMeadResult inner = detail::run_inner(fn, std::move(x0), inner_cfg);
        converged = converged && inner.converged;

        const double decrease = base - inner.fx;
        if (inner.fx < energy) {
            for (std::size_t k = 0; k < active.size(); ++k) {
                params[active[k]] = inner.x[k];
            }
            energy = inner.fx;
        }
        out.trace.push_back(energy);
        if (sink) sink({spec.layers, "refine", energy, counter});
        if (decrease < cfg.energy_decrease_tol) break;
    }

    out.params = std::move(params);
    out.energy = energy;
    out.fidelity = objective.fidelity_of(out.params, ctx.exact.ground);
    out.counter = counter;
    out.inner_converged = converged;
    return out;
}

struct PipelineResult {
    std::vector<OptimizationResult> qaoa;     // index p-1
    std::vector<OptimizationResult> refined;  // empty for the qaoa family
};

// Full procedure: the QAOA chain once, then (for released families) one
// refinement per depth starting from that depth's QAOA optimum.
inline PipelineResult run_full_pipeline(const ProblemInstance& inst,
                                        const AnsatzSpec& spec,
                                        const OptimizerConfig& cfg,
                                        const TraceSink& sink = nullptr) {
    spec.validate();
    PipelineContext ctx(inst);
    PipelineResult result;
    result.qaoa = optimize_qaoa_interp(ctx, spec.layers, cfg, sink);
    if (spec.family == AnsatzFamily::Qaoa) return result;
    result.refined.reserve(spec.layers);
    for (int p = 1; p <= spec.layers; ++p) {
        AnsatzSpec depth_spec = spec;
        depth_spec.layers = p;
        result.refined.push_back(
            sqaoa_refine(depth_spec, ctx, result.qaoa[p - 1], cfg, sink));
    }
    return result;
}

}  // namespace sqaoa
