#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sqaoa/ansatz.hpp"
#include "sqaoa/optimizer.hpp"
#include "sqaoa/problems.hpp"

namespace sqaoa {

using json = nlohmann::json;

struct ExperimentConfig {
    ProblemKind kind = ProblemKind::SK;
    int n = 6;
    int cohort = 20;
    std::uint64_t seed_base = 1;
    int p_max = 5;
    std::vector<AnsatzSpec> ansatzes;
    OptimizerConfig optimizer;
    std::string output_dir = "out";
    int threads = 0;  // 0 = hardware concurrency

    void validate() const {
        if (cohort < 1) throw std::invalid_argument("cohort size must be >= 1");
        if (p_max < 1) throw std::invalid_argument("depth range is empty");
        if (n < 2 || n > kMaxQubits) {
            throw std::invalid_argument("vertex count out of range");
        }
        if (ansatzes.empty()) {
            throw std::invalid_argument("no ansatz specified");
        }
        for (const AnsatzSpec& a : ansatzes) a.validate();
        optimizer.validate();
    }
};

// One (instance, ansatz family, depth) outcome. Carries the best parameters
// so every reported metric can be recomputed from the instance file.
struct ExperimentRecord {
    int instance_index = 0;
    std::uint64_t instance_seed = 0;
    std::string family;
    int depth = 1;
    double energy = 0.0;
    double e_opt = 0.0;
    double fractional_error = 0.0;
    double fidelity = 0.0;
    std::int64_t f_q = 0;
    std::int64_t f_g = 0;
    std::int64_t f_o = 0;
    double wall_time_ms = 0.0;
    bool inner_converged = true;
    std::uint64_t config_hash = 0;
    std::vector<double> params;
};

struct AggregateStats {
    std::string family;
    int depth = 1;
    int count = 0;
    double r_mean = 0.0;
    double r_std = 0.0;
    double fidelity_mean = 0.0;
    double fidelity_std = 0.0;
};

// r = 1 - E/E_opt, the normalized optimality gap.
inline double fractional_error(double energy, double e_opt) {
    if (e_opt == 0.0) {
        throw std::domain_error("fractional error undefined at e_opt = 0");
    }
    return 1.0 - energy / e_opt;
}

struct RatioMetrics {
    double r_p = 0.0;   // fidelity_S / fidelity_Q
    double r_f = 0.0;   // (f_Q + f_G + f_O)_S / (f_Q)_Q
    double r_fp = 0.0;  // r_f / r_p
    bool valid = true;  // false when fidelity_Q = 0
    bool fidelity_regressed = false;  // better energy, lower fidelity
};

inline RatioMetrics ratio_metrics(const ExperimentRecord& qaoa,
                                  const ExperimentRecord& sqaoa) {
    if (qaoa.instance_seed != sqaoa.instance_seed ||
        qaoa.depth != sqaoa.depth) {
        throw std::invalid_argument(
            "ratio metrics need records of one instance and depth");
    }
    RatioMetrics m;
    m.r_f = double(sqaoa.f_q + sqaoa.f_g + sqaoa.f_o) / double(qaoa.f_q);
    m.fidelity_regressed =
        sqaoa.energy < qaoa.energy && sqaoa.fidelity < qaoa.fidelity;
    if (qaoa.fidelity <= 0.0) {
        m.valid = false;
        return m;
    }
    m.r_p = sqaoa.fidelity / qaoa.fidelity;
    m.r_fp = m.r_f / m.r_p;
    return m;
}

// Arithmetic mean and population standard deviation per (family, depth) cell.
inline std::vector<AggregateStats> aggregate(
    std::span<const ExperimentRecord> records) {
    std::map<std::pair<std::string, int>, std::vector<const ExperimentRecord*>>
        cells;
    for (const ExperimentRecord& r : records) {
        cells[{r.family, r.depth}].push_back(&r);
    }
    std::vector<AggregateStats> out;
    out.reserve(cells.size());
    for (const auto& [key, cell] : cells) {
        AggregateStats s;
        s.family = key.first;
        s.depth = key.second;
        s.count = static_cast<int>(cell.size());
        double r_sum = 0.0, f_sum = 0.0;
        for (const ExperimentRecord* r : cell) {
            r_sum += r->fractional_error;
            f_sum += r->fidelity;
        }
        s.r_mean = r_sum / s.count;
        s.fidelity_mean = f_sum / s.count;
        double r_var = 0.0, f_var = 0.0;
        for (const ExperimentRecord* r : cell) {
            r_var += (r->fractional_error - s.r_mean) *
                     (r->fractional_error - s.r_mean);
            f_var += (r->fidelity - s.fidelity_mean) *
                     (r->fidelity - s.fidelity_mean);
        }
        s.r_std = std::sqrt(r_var / s.count);
        s.fidelity_std = std::sqrt(f_var / s.count);
        out.push_back(std::move(s));
    }
    return out;
}

// --- config (de)serialization ------------------------------------------------

inline json to_json(const AnsatzSpec& spec) {
    json j;
    j["family"] = family_name(spec.family);
    j["p"] = spec.layers;
    json mixers = json::array();
    for (MixerKind m : spec.mixers) mixers.push_back(mixer_name(m));
    j["mixers"] = mixers;
    j["gathered"] = spec.gathered;
    return j;
}

inline AnsatzSpec ansatz_from_json(const json& j) {
    AnsatzSpec spec;
    spec.family = family_from_name(j.at("family").get<std::string>());
    spec.layers = j.value("p", 1);
    spec.mixers.clear();
    if (j.contains("mixers")) {
        for (const auto& m : j.at("mixers")) {
            spec.mixers.push_back(mixer_from_name(m.get<std::string>()));
        }
    } else if (spec.family == AnsatzFamily::SQaoa) {
        spec.mixers = {MixerKind::YY};
    }
    spec.gathered = j.value("gathered", true);
    spec.validate();
    return spec;
}

inline json to_json(const ExperimentConfig& cfg) {
    json j;
    j["problem"] = {{"kind", kind_name(cfg.kind)},
                    {"n", cfg.n},
                    {"cohort", cfg.cohort},
                    {"seed_base", cfg.seed_base}};
    j["p_max"] = cfg.p_max;
    json specs = json::array();
    for (const AnsatzSpec& a : cfg.ansatzes) {
        json s = to_json(a);
        s.erase("p");  // depth comes from p_max
        specs.push_back(s);
    }
    j["ansatzes"] = specs;
    j["optimizer"] = {
        {"fd_epsilon", cfg.optimizer.fd_epsilon},
        {"gradient_threshold", cfg.optimizer.gradient_threshold},
        {"energy_decrease_tol", cfg.optimizer.energy_decrease_tol},
        {"restarts", cfg.optimizer.restarts},
        {"max_outer_iterations", cfg.optimizer.max_outer_iterations},
        {"refine_max_evals", cfg.optimizer.refine_max_evals},
        {"refine_method", cfg.optimizer.refine_method},
        {"seed", cfg.optimizer.seed},
        {"inner",
         {{"method", cfg.optimizer.inner.method},
          {"max_evals", cfg.optimizer.inner.max_evals},
          {"tolerance", cfg.optimizer.inner.tolerance},
          {"initial_step", cfg.optimizer.inner.initial_step}}}};
    j["output_dir"] = cfg.output_dir;
    j["threads"] = cfg.threads;
    return j;
}

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig cfg;
    const json& prob = j.at("problem");
    cfg.kind = kind_from_name(prob.at("kind").get<std::string>());
    cfg.n = prob.at("n").get<int>();
    cfg.cohort = prob.value("cohort", 20);
    cfg.seed_base = prob.value("seed_base", std::uint64_t(1));
    cfg.p_max = j.value("p_max", 5);
    cfg.ansatzes.clear();
    for (const auto& s : j.at("ansatzes")) {
        AnsatzSpec spec = ansatz_from_json(s);
        spec.layers = cfg.p_max;
        cfg.ansatzes.push_back(std::move(spec));
    }
    if (j.contains("optimizer")) {
        const json& o = j.at("optimizer");
        cfg.optimizer.fd_epsilon = o.value("fd_epsilon", 1e-3);
        cfg.optimizer.gradient_threshold = o.value("gradient_threshold", 1e-3);
        cfg.optimizer.energy_decrease_tol = o.value("energy_decrease_tol", 1e-6);
        cfg.optimizer.restarts = o.value("restarts", 10);
        cfg.optimizer.max_outer_iterations = o.value("max_outer_iterations", 40);
        cfg.optimizer.refine_max_evals = o.value("refine_max_evals", 0);
        cfg.optimizer.refine_method = o.value("refine_method", std::string());
        cfg.optimizer.seed = o.value("seed", std::uint64_t(0));
        if (o.contains("inner")) {
            const json& i = o.at("inner");
            cfg.optimizer.inner.method = i.value("method", "nelder-mead");
            cfg.optimizer.inner.max_evals = i.value("max_evals", 4000);
            cfg.optimizer.inner.tolerance = i.value("tolerance", 1e-8);
            cfg.optimizer.inner.initial_step = i.value("initial_step", 0.1);
        }
    }
    cfg.output_dir = j.value("output_dir", std::string("out"));
    cfg.threads = j.value("threads", 0);
    cfg.validate();
    return cfg;
}

// FNV-1a over the canonical config dump; stored in every record so figures
// trace back to the exact run configuration.
inline std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string dump = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// --- record (de)serialization --------------------------------------------------

inline json to_json(const ExperimentRecord& r) {
    json j;
    j["instance_index"] = r.instance_index;
    j["instance_seed"] = r.instance_seed;
    j["family"] = r.family;
    j["depth"] = r.depth;
    j["energy"] = r.energy;
    j["e_opt"] = r.e_opt;
    j["fractional_error"] = r.fractional_error;
    j["fidelity"] = r.fidelity;
    j["f_q"] = r.f_q;
    j["f_g"] = r.f_g;
    j["f_o"] = r.f_o;
    j["wall_time_ms"] = r.wall_time_ms;
    j["inner_converged"] = r.inner_converged;
    j["config_hash"] = r.config_hash;
    j["params"] = r.params;
    return j;
}

inline ExperimentRecord record_from_json(const json& j) {
    ExperimentRecord r;
    r.instance_index = j.at("instance_index").get<int>();
    r.instance_seed = j.at("instance_seed").get<std::uint64_t>();
    r.family = j.at("family").get<std::string>();
    r.depth = j.at("depth").get<int>();
    r.energy = j.at("energy").get<double>();
    r.e_opt = j.at("e_opt").get<double>();
    r.fractional_error = j.at("fractional_error").get<double>();
    r.fidelity = j.at("fidelity").get<double>();
    r.f_q = j.at("f_q").get<std::int64_t>();
    r.f_g = j.at("f_g").get<std::int64_t>();
    r.f_o = j.at("f_o").get<std::int64_t>();
    r.wall_time_ms = j.at("wall_time_ms").get<double>();
    r.inner_converged = j.at("inner_converged").get<bool>();
    r.config_hash = j.at("config_hash").get<std::uint64_t>();
    r.params = j.at("params").get<std::vector<double>>();
    return r;
}

inline void write_records_jsonl(const std::string& path,
                                std::span<const ExperimentRecord> records) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    for (const ExperimentRecord& r : records) {
        os << to_json(r).dump() << "\n";
    }
}

inline std::vector<ExperimentRecord> read_records_jsonl(
    const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open records file: " + path);
    std::vector<ExperimentRecord> records;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        records.push_back(record_from_json(json::parse(line)));
    }
    return records;
}

// --- runner -----------------------------------------------------------------

// Dispatches [0, count) to a small worker pool; each index is processed by
// exactly one worker.
inline void parallel_for(int count, int threads,
                         const std::function<void(int)>& body) {
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) threads = 1;
    }
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (int k = 0; k < count; ++k) body(k);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int k = next.fetch_add(1); k < count; k = next.fetch_add(1)) {
                body(k);
            }
        });
    }
    for (std::thread& t : pool) t.join();
}

struct ExperimentOutput {
    std::vector<ExperimentRecord> records;
    std::vector<std::string> failures;  // one message per failed instance
};

// Runs every configured ansatz over the instance cohort. The QAOA chain of an
// instance is optimized once and shared by all released families, matching
// the procedure (every family starts from the same step-1 optimum). Workers
// own their statevectors and counters; records land in per-instance slots, so
// the output order is deterministic regardless of scheduling.
inline ExperimentOutput run_experiment(const ExperimentConfig& cfg,
                                       const TraceSink& sink = nullptr) {
    cfg.validate();
    const std::uint64_t hash = config_hash(cfg);

    bool want_qaoa_records = false;
    for (const AnsatzSpec& a : cfg.ansatzes) {
        if (a.family == AnsatzFamily::Qaoa) want_qaoa_records = true;
    }

    std::vector<std::vector<ExperimentRecord>> per_instance(cfg.cohort);
    std::vector<std::string> failures(cfg.cohort);

    parallel_for(cfg.cohort, cfg.threads, [&](int idx) {
        const std::uint64_t seed = cfg.seed_base + std::uint64_t(idx);
        try {
            const ProblemInstance inst = generate(cfg.kind, cfg.n, seed);
            PipelineContext ctx(inst);
            auto t0 = std::chrono::steady_clock::now();
            const std::vector<OptimizationResult> chain =
                optimize_qaoa_interp(ctx, cfg.p_max, cfg.optimizer, sink);
            auto t1 = std::chrono::steady_clock::now();
            const double chain_ms =
                std::chrono::duration<double, std::milli>(t1 - t0).count();

            auto make_record = [&](const std::string& family, int depth,
                                   const OptimizationResult& res,
                                   double wall_ms) {
                ExperimentRecord r;
                r.instance_index = idx;
                r.instance_seed = seed;
                r.family = family;
                r.depth = depth;
                r.energy = res.energy;
                r.e_opt = ctx.exact.e_opt;
                r.fractional_error = fractional_error(res.energy, ctx.exact.e_opt);
                r.fidelity = res.fidelity;
                r.f_q = res.counter.f_q;
                r.f_g = res.counter.f_g;
                r.f_o = res.counter.f_o;
                r.wall_time_ms = wall_ms;
                r.inner_converged = res.inner_converged;
                r.config_hash = hash;
                r.params = res.params;
                per_instance[idx].push_back(std::move(r));
            };

            if (want_qaoa_records) {
                for (int p = 1; p <= cfg.p_max; ++p) {
                    make_record("QAOA", p, chain[p - 1], chain_ms);
                }
            }
            for (const AnsatzSpec& spec : cfg.ansatzes) {
                if (spec.family == AnsatzFamily::Qaoa) continue;
                for (int p = 1; p <= cfg.p_max; ++p) {
                    AnsatzSpec depth_spec = spec;
                    depth_spec.layers = p;
                    auto r0 = std::chrono::steady_clock::now();
                    const OptimizationResult res = sqaoa_refine(
                        depth_spec, ctx, chain[p - 1], cfg.optimizer, sink);
                    auto r1 = std::chrono::steady_clock::now();
                    make_record(
                        spec.label(), p, res,
                        std::chrono::duration<double, std::milli>(r1 - r0)
                            .count());
                }
            }
        } catch (const std::exception& e) {
            failures[idx] = e.what();
        }
    });

    ExperimentOutput out;
    for (int idx = 0; idx < cfg.cohort; ++idx) {
        if (!failures[idx].empty()) {
            out.failures.push_back("instance " + std::to_string(idx) + ": " +
                                   failures[idx]);
        }
        for (ExperimentRecord& r : per_instance[idx]) {
            out.records.push_back(std::move(r));
        }
    }
    return out;
}

// --- tabular exports ----------------------------------------------------------

inline void write_aggregates_csv(const std::string& path,
                                 std::span<const AggregateStats> stats) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "family,depth,count,r_mean,r_std,fidelity_mean,fidelity_std\n";
    os << std::setprecision(17);
    for (const AggregateStats& s : stats) {
        os << s.family << "," << s.depth << "," << s.count << "," << s.r_mean
           << "," << s.r_std << "," << s.fidelity_mean << ","
           << s.fidelity_std << "\n";
    }
}

// One R_fp point per (instance, depth) pairing the QAOA record with the
// matching record of `family`. Invalid points (zero QAOA fidelity) and
// fidelity regressions are kept and flagged rather than filtered.
inline void write_ratio_csv(const std::string& path,
                            std::span<const ExperimentRecord> records,
                            const std::string& family) {
    std::map<std::pair<std::uint64_t, int>, const ExperimentRecord*> qaoa;
    for (const ExperimentRecord& r : records) {
        if (r.family == "QAOA") qaoa[{r.instance_seed, r.depth}] = &r;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "instance_seed,depth,r_p,r_f,r_fp,valid,fidelity_regressed\n";
    os << std::setprecision(17);
    for (const ExperimentRecord& r : records) {
        if (r.family != family) continue;
        auto it = qaoa.find({r.instance_seed, r.depth});
        if (it == qaoa.end()) continue;
        const RatioMetrics m = ratio_metrics(*it->second, r);
        os << r.instance_seed << "," << r.depth << "," << m.r_p << "," << m.r_f
           << "," << m.r_fp << "," << m.valid << "," << m.fidelity_regressed
           << "\n";
    }
}

}  // namespace sqaoa
