#include "prsplit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace prsplit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string printf_string(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double to_double(std::string_view s) {
    const std::string copy(s);
    std::size_t used = 0;
    const double v = std::stod(copy, &used);
    if (used != copy.size()) throw std::invalid_argument("bad number '" + copy + "'");
    return v;
}

std::size_t to_count(std::string_view s) {
    const std::string copy(s);
    if (copy.empty() || copy.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("bad count '" + copy + "'");
    return static_cast<std::size_t>(std::stoull(copy));
}

}  // namespace

void BenchConfig::validate() const {
    if (pairs.empty()) throw std::invalid_argument("bench: no (m, n) pairs");
    if (trials == 0) throw std::invalid_argument("bench: trials must be at least 1");
    if (methods.empty()) throw std::invalid_argument("bench: no methods");
    for (const auto& [m, n] : pairs)
        if (m < 5 || n < m) throw std::invalid_argument("bench: need m >= 5 and n >= m");
    if (!(tol > 0.0)) throw std::invalid_argument("bench: tol must be positive");
    for (const auto& s : {pr_schedule, dr_schedule})
        if (!(s.gamma0 > 0.0) || !(s.gamma_floor > 0.0))
            throw std::invalid_argument("bench: step sizes must be positive");
    if (!(pr_schedule.gamma0 < 0.2))
        throw std::invalid_argument("bench: PR gamma0 must stay below 1/5");
}

BenchConfig BenchConfig::desk_preset() {
    BenchConfig cfg;
    for (const std::size_t m : {50, 100, 150})
        for (const std::size_t n : {500, 1000}) cfg.pairs.emplace_back(m, n);
    cfg.trials = 20;
    return cfg;
}

BenchConfig BenchConfig::full_preset() {
    BenchConfig cfg;
    for (const std::size_t m : {100, 200, 300, 400, 500})
        for (const std::size_t n : {4000, 5000, 6000}) cfg.pairs.emplace_back(m, n);
    cfg.trials = 50;
    return cfg;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t m, std::size_t n, std::size_t trial) {
    std::uint64_t h = splitmix64(static_cast<std::uint64_t>(m));
    h = splitmix64(h ^ static_cast<std::uint64_t>(n));
    h = splitmix64(h ^ static_cast<std::uint64_t>(trial));
    return base_seed ^ h;
}

SolverConfig solver_config_for(const BenchConfig& cfg, Method method) {
    const StepSchedule& s = method == Method::pr ? cfg.pr_schedule : cfg.dr_schedule;
    SolverConfig sc;
    sc.method = method;
    sc.gamma0 = s.gamma0;
    sc.tol = cfg.tol;
    sc.max_iter = cfg.max_iter;
    if (cfg.heuristic) sc.heuristic = HeuristicConfig{s.gamma_floor};
    return sc;
}

TrialResult run_trial(const FeasibilityInstance& inst, Method method, const BenchConfig& cfg) {
    const SplitProblem p =
        method == Method::pr ? build_feasibility_pr(inst) : build_feasibility_dr(inst);
    const auto start = std::chrono::steady_clock::now();
    const SolverReport report =
        run(p, solver_config_for(cfg, method), Vector::Zero(static_cast<Eigen::Index>(inst.n())));
    const auto stop = std::chrono::steady_clock::now();

    TrialResult out;
    out.iterations = report.iterations;
    out.reason = report.reason;
    out.seconds = std::chrono::duration<double>(stop - start).count();
    if (report.reason == Termination::diverged) {
        out.fval = std::numeric_limits<double>::infinity();
        out.outcome = Outcome::failure;
    } else {
        out.fval = evaluate_fval(report.state.z, inst);
        out.outcome = classify(out.fval);
    }
    return out;
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
    cfg.validate();
    std::vector<BenchRow> rows;
    for (const auto& [m, n] : cfg.pairs) {
        std::vector<BenchRow> group(cfg.methods.size());
        for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
            group[k].m = m;
            group[k].n = n;
            group[k].method = cfg.methods[k];
            group[k].fval_max = -std::numeric_limits<double>::infinity();
            group[k].fval_min = std::numeric_limits<double>::infinity();
        }
        for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
            const FeasibilityInstance inst = gen_feasibility(m, n, trial_seed(cfg.base_seed, m, n, trial));
            for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
                const TrialResult res = run_trial(inst, cfg.methods[k], cfg);
                BenchRow& row = group[k];
                row.mean_iterations += static_cast<double>(res.iterations);
                row.mean_seconds += res.seconds;
                row.fval_max = std::max(row.fval_max, res.fval);
                row.fval_min = std::min(row.fval_min, res.fval);
                switch (res.outcome) {
                    case Outcome::success: ++row.succ; break;
                    case Outcome::failure: ++row.fail; break;
                    case Outcome::undecided: ++row.undecided; break;
                }
            }
        }
        for (auto& row : group) {
            row.mean_iterations /= static_cast<double>(cfg.trials);
            row.mean_seconds /= static_cast<double>(cfg.trials);
            rows.push_back(row);
        }
    }
    return rows;
}

std::string format_fval(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return printf_string("%.0e", v);
}

std::string format_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "m,n,method,iter,fval_max,fval_min,succ,fail,undecided,seconds\n";
    for (const auto& r : rows) {
        os << r.m << ',' << r.n << ',' << to_string(r.method) << ','
           << printf_string("%.1f", r.mean_iterations) << ',' << format_fval(r.fval_max) << ','
           << format_fval(r.fval_min) << ',' << r.succ << ',' << r.fail << ',' << r.undecided << ','
           << printf_string("%.4f", r.mean_seconds) << '\n';
    }
    return os.str();
}

std::string format_markdown(const std::vector<BenchRow>& rows) {
    // Group rows by shape, keeping first-seen order of shapes and methods.
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    std::vector<Method> methods;
    std::map<std::tuple<std::size_t, std::size_t, Method>, const BenchRow*> index;
    for (const auto& r : rows) {
        if (std::find(shapes.begin(), shapes.end(), std::pair{r.m, r.n}) == shapes.end())
            shapes.emplace_back(r.m, r.n);
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
            methods.push_back(r.method);
        index[{r.m, r.n, r.method}] = &r;
    }
    std::ostringstream os;
    os << "| m | n |";
    for (const auto method : methods) {
        const auto tag = to_string(method);
        os << ' ' << tag << " iter | " << tag << " fval_max | " << tag << " fval_min | " << tag
           << " succ | " << tag << " fail | " << tag << " undecided | " << tag << " seconds |";
    }
    os << "\n|---:|---:|";
    for (std::size_t k = 0; k < methods.size(); ++k) os << "---:|---:|---:|---:|---:|---:|---:|";
    os << '\n';
    for (const auto& [m, n] : shapes) {
        os << "| " << m << " | " << n << " |";
        for (const auto method : methods) {
            const auto it = index.find({m, n, method});
            if (it == index.end()) {
                os << " | | | | | | |";
                continue;
            }
            const BenchRow& r = *it->second;
            os << ' ' << printf_string("%.0f", r.mean_iterations) << " | " << format_fval(r.fval_max)
               << " | " << format_fval(r.fval_min) << " | " << r.succ << " | " << r.fail << " | "
               << r.undecided << " | " << printf_string("%.3f", r.mean_seconds) << " |";
        }
        os << '\n';
    }
    return os.str();
}

std::vector<BenchRow> parse_csv(std::string_view text) {
    std::vector<BenchRow> rows;
    bool header = true;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (header) {
            if (line != "m,n,method,iter,fval_max,fval_min,succ,fail,undecided,seconds")
                throw std::invalid_argument("parse_csv: unexpected header");
            header = false;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 10) throw std::invalid_argument("parse_csv: expected 10 fields");
        BenchRow r;
        r.m = to_count(f[0]);
        r.n = to_count(f[1]);
        const auto method = parse_method(f[2]);
        if (!method) throw std::invalid_argument("parse_csv: unknown method");
        r.method = *method;
        r.mean_iterations = to_double(f[3]);
        r.fval_max = to_double(f[4]);
        r.fval_min = to_double(f[5]);
        r.succ = to_count(f[6]);
        r.fail = to_count(f[7]);
        r.undecided = to_count(f[8]);
        r.mean_seconds = to_double(f[9]);
        rows.push_back(r);
    }
    return rows;
}

void emit_table(const std::vector<BenchRow>& rows, TableFormat format,
                const std::filesystem::path& path) {
    if (rows.empty()) throw std::invalid_argument("emit_table: no rows");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_table: cannot write " + path.string());
    out << (format == TableFormat::csv ? format_csv(rows) : format_markdown(rows));
    if (!out) throw std::runtime_error("emit_table: write failed for " + path.string());
}

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(std::string_view text) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto item : split(text, ',')) {
        const auto parts = split(item, 'x');
        if (parts.size() != 2) throw std::invalid_argument("bad pair '" + std::string(item) + "', expected MxN");
        out.emplace_back(to_count(parts[0]), to_count(parts[1]));
    }
    return out;
}

}  // namespace prsplit
