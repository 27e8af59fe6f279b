// prsplit: sparse-feasibility benchmark and single-instance solver.

#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prsplit/bench.hpp"
#include "prsplit/problems.hpp"
#include "prsplit/splitting.hpp"

namespace {

using namespace prsplit;

struct BenchOptions {
    std::string pairs;
    std::string preset = "desk";
    std::optional<std::size_t> trials;
    std::string methods = "dr,pr";
    std::uint64_t seed = 42;
    double tol = 1e-8;
    std::size_t max_iter = 50000;
    std::optional<double> pr_gamma0, pr_gamma1, dr_gamma0, dr_gamma1;
    bool no_heuristic = false;
    std::string out;
    std::string format = "csv";
};

struct SolveOptions {
    std::size_t m = 100;
    std::size_t n = 1000;
    std::uint64_t seed = 42;
    std::string instance;
    std::string save_instance;
    std::string method = "pr";
    double tol = 1e-8;
    std::size_t max_iter = 50000;
    std::optional<double> gamma0, gamma1;
    bool no_heuristic = false;
    std::string trace;
};

std::vector<Method> parse_methods(const std::string& text) {
    std::vector<Method> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = text.find(',', start);
        const std::string item = text.substr(start, pos == std::string::npos ? pos : pos - start);
        const auto m = parse_method(item);
        if (!m) throw std::invalid_argument("unknown method '" + item + "' (expected pr or dr)");
        out.push_back(*m);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

int run_bench_command(const BenchOptions& o) {
    BenchConfig cfg;
    if (o.preset == "desk") {
        cfg = BenchConfig::desk_preset();
    } else if (o.preset == "full") {
        cfg = BenchConfig::full_preset();
    } else {
        throw std::invalid_argument("unknown preset '" + o.preset + "'");
    }
    if (!o.pairs.empty()) cfg.pairs = parse_pairs(o.pairs);
    if (o.trials) cfg.trials = *o.trials;
    cfg.methods = parse_methods(o.methods);
    cfg.base_seed = o.seed;
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    if (o.pr_gamma0) cfg.pr_schedule.gamma0 = *o.pr_gamma0;
    if (o.pr_gamma1) cfg.pr_schedule.gamma_floor = *o.pr_gamma1;
    if (o.dr_gamma0) cfg.dr_schedule.gamma0 = *o.dr_gamma0;
    if (o.dr_gamma1) cfg.dr_schedule.gamma_floor = *o.dr_gamma1;
    cfg.heuristic = !o.no_heuristic;
    const auto format = o.format == "markdown" ? TableFormat::markdown : TableFormat::csv;
    cfg.validate();

    const auto rows = run_bench(cfg);
    std::cout << format_markdown(rows);
    if (!o.out.empty()) emit_table(rows, format, o.out);
    return 0;
}

int run_solve_command(const SolveOptions& o) {
    const auto method = parse_method(o.method);
    if (!method) throw std::invalid_argument("unknown method '" + o.method + "'");

    FeasibilityInstance inst;
    if (!o.instance.empty()) {
        std::ifstream in(o.instance);
        if (!in) throw std::invalid_argument("cannot open instance file " + o.instance);
        inst = read_instance(in);
    } else {
        inst = gen_feasibility(o.m, o.n, o.seed);
    }
    if (!o.save_instance.empty()) {
        std::ofstream out(o.save_instance);
        if (!out) throw std::runtime_error("cannot write " + o.save_instance);
        write_instance(out, inst);
    }

    BenchConfig bench;
    bench.tol = o.tol;
    bench.max_iter = o.max_iter;
    bench.heuristic = !o.no_heuristic;
    StepSchedule& schedule = *method == Method::pr ? bench.pr_schedule : bench.dr_schedule;
    if (o.gamma0) schedule.gamma0 = *o.gamma0;
    if (o.gamma1) schedule.gamma_floor = *o.gamma1;
    SolverConfig cfg = solver_config_for(bench, *method);
    cfg.record_trace = !o.trace.empty();
    cfg.validate();

    const SplitProblem p =
        *method == Method::pr ? build_feasibility_pr(inst) : build_feasibility_dr(inst);
    std::vector<double> fvals;
    StepObserver observer;
    if (cfg.record_trace)
        observer = [&](const IterateState& s, double) { fvals.push_back(evaluate_fval(s.z, inst)); };
    const SolverReport report = run(p, cfg, Vector::Zero(static_cast<Eigen::Index>(inst.n())), observer);

    if (!o.trace.empty()) {
        std::FILE* f = std::fopen(o.trace.c_str(), "w");
        if (!f) throw std::runtime_error("cannot write " + o.trace);
        std::fprintf(f, "t,gamma,merit,dz,fval\n");
        for (std::size_t k = 0; k < report.trace.size(); ++k) {
            const auto& e = report.trace[k];
            std::fprintf(f, "%zu,%.17g,%.17g,%.17g,%.17g\n", k + 1, e.gamma, e.merit, e.gap, fvals[k]);
        }
        std::fclose(f);
    }

    const double fval = report.reason == Termination::diverged
                            ? std::numeric_limits<double>::infinity()
                            : evaluate_fval(report.state.z, inst);
    std::printf("method      %s\n", std::string(to_string(*method)).c_str());
    std::printf("instance    m=%zu n=%zu r=%zu seed=%llu\n", inst.m(), inst.n(), inst.d.r,
                static_cast<unsigned long long>(inst.seed));
    std::printf("termination %s after %zu iterations\n", std::string(to_string(report.reason)).c_str(),
                report.iterations);
    std::printf("final gamma %.6g\n", report.final_gamma);
    std::printf("fval        %.3e (%s)\n", fval,
                std::isfinite(fval) ? std::string(to_string(classify(fval))).c_str() : "failure");
    if (report.residual) std::printf("residual    %.3e\n", report.residual->practical);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Peaceman-Rachford / Douglas-Rachford splitting for sparse feasibility"};
    app.require_subcommand(1);

    BenchOptions bo;
    auto* bench = app.add_subcommand("bench", "Run the random-instance comparison and tabulate it");
    bench->add_option("--pairs", bo.pairs, "Comma-separated MxN shapes, e.g. 100x1000,150x500");
    bench->add_option("--preset", bo.preset, "Shape preset when --pairs is absent")
        ->check(CLI::IsMember({"desk", "full"}));
    bench->add_option("--trials", bo.trials, "Instances per shape");
    bench->add_option("--methods", bo.methods, "Comma-separated subset of pr,dr");
    bench->add_option("--seed", bo.seed, "Base seed");
    bench->add_option("--tol", bo.tol, "Relative-change termination tolerance");
    bench->add_option("--max-iter", bo.max_iter, "Iteration cap per run");
    bench->add_option("--pr-gamma0", bo.pr_gamma0, "Initial PR step size");
    bench->add_option("--pr-gamma1", bo.pr_gamma1, "PR heuristic floor");
    bench->add_option("--dr-gamma0", bo.dr_gamma0, "Initial DR step size");
    bench->add_option("--dr-gamma1", bo.dr_gamma1, "DR heuristic floor");
    bench->add_flag("--no-heuristic", bo.no_heuristic, "Keep the step size fixed at gamma0");
    bench->add_option("--out", bo.out, "Write the table to this file");
    bench->add_option("--format", bo.format, "Output file format")
        ->check(CLI::IsMember({"csv", "markdown"}));

    SolveOptions so;
    auto* solve = app.add_subcommand("solve", "Solve a single sparse-feasibility instance");
    solve->add_option("--m", so.m, "Rows of A");
    solve->add_option("--n", so.n, "Columns of A");
    solve->add_option("--seed", so.seed, "Instance seed");
    solve->add_option("--instance", so.instance, "Load the instance from a dump file")
        ->check(CLI::ExistingFile);
    solve->add_option("--save-instance", so.save_instance, "Dump the instance to this file");
    solve->add_option("--method", so.method, "pr or dr")->check(CLI::IsMember({"pr", "dr", "PR", "DR"}));
    solve->add_option("--tol", so.tol, "Relative-change termination tolerance");
    solve->add_option("--max-iter", so.max_iter, "Iteration cap");
    solve->add_option("--gamma0", so.gamma0, "Initial step size");
    solve->add_option("--gamma1", so.gamma1, "Heuristic floor");
    solve->add_flag("--no-heuristic", so.no_heuristic, "Keep the step size fixed at gamma0");
    solve->add_option("--trace", so.trace, "Write per-iteration t,gamma,merit,dz,fval as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*bench) return run_bench_command(bo);
        if (*solve) return run_solve_command(so);
    } catch (const std::exception& e) {
        std::cerr << "prsplit: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
