// Command-line front end: instance cohort generation, experiment runs,
// symbolic counterdiabatic checks, and aggregate/plot-table reports.
//
// Exit codes: 0 success, 1 failed verification, 2 config error, 3 partial
// instance failures.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "sqaoa/cd_checks.hpp"
#include "sqaoa/experiments.hpp"
#include "sqaoa/problems.hpp"

namespace fs = std::filesystem;
using namespace sqaoa;

namespace {

int cmd_gen(const std::string& kind_str, int n, int count,
            std::uint64_t seed_base, const std::string& out_dir) {
    const ProblemKind kind = kind_from_name(kind_str);
    fs::create_directories(out_dir);
    for (int idx = 0; idx < count; ++idx) {
        const ProblemInstance inst = generate(kind, n, seed_base + idx);
        const fs::path path = fs::path(out_dir) / (inst.id() + ".graph");
        write_instance_file(path.string(), inst);
        std::cout << path.string() << "\n";
    }
    return 0;
}

int cmd_verify_cd(const std::string& graph_path) {
    const ProblemInstance inst = read_instance_file(graph_path);
    const CdReport rep = verify_cd_identities(inst);
    std::cout << rep.text;
    if (rep.ok) {
        std::cout << "all counterdiabatic identities hold\n";
        return 0;
    }
    for (const std::string& f : rep.failures) {
        std::cerr << "FAILED: " << f << "\n";
    }
    return 1;
}

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.kind = ProblemKind::SK;
    cfg.n = 6;
    cfg.cohort = 20;
    cfg.seed_base = 1;
    cfg.p_max = 5;
    AnsatzSpec qaoa;
    qaoa.family = AnsatzFamily::Qaoa;
    qaoa.mixers.clear();
    AnsatzSpec zz;
    zz.family = AnsatzFamily::ZzFree;
    zz.mixers.clear();
    AnsatzSpec yy;  // gathered YY, the default released ansatz
    cfg.ansatzes = {qaoa, zz, yy};
    return cfg;
}

int cmd_run(const std::string& config_path, bool print_config,
            const std::string& trace_path) {
    ExperimentConfig cfg;
    if (config_path.empty()) {
        cfg = default_config();
    } else {
        std::ifstream is(config_path);
        if (!is) {
            std::cerr << "cannot open config: " << config_path << "\n";
            return 2;
        }
        try {
            cfg = config_from_json(json::parse(is));
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
    }
    if (print_config) {
        std::cout << to_json(cfg).dump(2) << "\n";
        return 0;
    }

    fs::create_directories(cfg.output_dir);
    fs::create_directories(fs::path(cfg.output_dir) / "instances");
    for (int idx = 0; idx < cfg.cohort; ++idx) {
        const ProblemInstance inst =
            generate(cfg.kind, cfg.n, cfg.seed_base + idx);
        write_instance_file(
            (fs::path(cfg.output_dir) / "instances" / (inst.id() + ".graph"))
                .string(),
            inst);
    }
    {
        std::ofstream os(fs::path(cfg.output_dir) / "config.json");
        os << to_json(cfg).dump(2) << "\n";
    }

    std::ofstream trace_os;
    TraceSink sink = nullptr;
    std::mutex trace_mutex;
    if (!trace_path.empty()) {
        trace_os.open(trace_path);
        sink = [&](const TraceRecord& t) {
            std::lock_guard<std::mutex> lock(trace_mutex);
            json j = {{"depth", t.depth},       {"phase", t.phase},
                      {"energy", t.energy},     {"f_q", t.counter.f_q},
                      {"f_g", t.counter.f_g},   {"f_o", t.counter.f_o}};
            trace_os << j.dump() << "\n";
        };
    }

    const ExperimentOutput out = run_experiment(cfg, sink);
    write_records_jsonl(
        (fs::path(cfg.output_dir) / "records.jsonl").string(), out.records);
    const auto stats = aggregate(out.records);
    write_aggregates_csv(
        (fs::path(cfg.output_dir) / "aggregates.csv").string(), stats);

    // one R_fp table per released family present in the run
    std::set<std::string> families;
    for (const ExperimentRecord& r : out.records) {
        if (r.family != "QAOA") families.insert(r.family);
    }
    bool have_qaoa = false;
    for (const ExperimentRecord& r : out.records) {
        if (r.family == "QAOA") have_qaoa = true;
    }
    if (have_qaoa) {
        for (const std::string& fam : families) {
            write_ratio_csv(
                (fs::path(cfg.output_dir) / ("rfp_" + fam + ".csv")).string(),
                out.records, fam);
        }
    }

    std::cout << "records: " << out.records.size() << "\n";
    for (const std::string& f : out.failures) {
        std::cerr << "instance failure: " << f << "\n";
    }
    return out.failures.empty() ? 0 : 3;
}

int cmd_report(const std::string& records_path, const std::string& out_dir) {
    const std::vector<ExperimentRecord> records =
        read_records_jsonl(records_path);
    if (records.empty()) {
        std::cerr << "no records in " << records_path << "\n";
        return 2;
    }
    fs::create_directories(out_dir);
    write_aggregates_csv((fs::path(out_dir) / "aggregates.csv").string(),
                         aggregate(records));
    std::set<std::string> families;
    for (const ExperimentRecord& r : records) {
        if (r.family != "QAOA") families.insert(r.family);
    }
    for (const std::string& fam : families) {
        write_ratio_csv((fs::path(out_dir) / ("rfp_" + fam + ".csv")).string(),
                        records, fam);
    }
    std::cout << "wrote tables to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QAOA / S-QAOA statevector experiments"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "write a cohort of seeded instances");
    std::string gen_kind = "sk";
    int gen_n = 6, gen_count = 20;
    std::uint64_t gen_seed = 1;
    std::string gen_out = "instances";
    gen->add_option("--kind", gen_kind, "u3r | w3r | sk")->required();
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--count", gen_count, "cohort size (default 20)");
    gen->add_option("--seed-base", gen_seed, "first seed; instance k uses seed-base + k");
    gen->add_option("--out", gen_out, "output directory");

    auto* run = app.add_subcommand("run", "run an experiment config");
    std::string run_config, run_trace;
    bool run_print = false;
    run->add_option("--config", run_config, "config JSON path (omit for defaults)");
    run->add_flag("--print-config", run_print, "print the resolved config and exit");
    run->add_option("--trace", run_trace, "stream per-iteration trace records to this file");

    auto* verify = app.add_subcommand(
        "verify-cd", "check the counterdiabatic identities on a graph file");
    std::string verify_graph;
    verify->add_option("--graph", verify_graph, "instance file")->required();

    auto* report = app.add_subcommand("report", "aggregate a records file");
    std::string report_records, report_out = "report";
    report->add_option("--records", report_records, "records.jsonl path")->required();
    report->add_option("--out", report_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen(gen_kind, gen_n, gen_count, gen_seed, gen_out);
        }
        if (run->parsed()) return cmd_run(run_config, run_print, run_trace);
        if (verify->parsed()) return cmd_verify_cd(verify_graph);
        if (report->parsed()) return cmd_report(report_records, report_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
