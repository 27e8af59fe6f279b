#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prsplit/problems.hpp"
#include "prsplit/splitting.hpp"

namespace prsplit {

/// Initial γ and heuristic floor γ₁ for one method.
struct StepSchedule {
    double gamma0;
    double gamma_floor;
};

/// Starts at 0.95/5 and decays toward 1/12.
inline constexpr StepSchedule kPrSchedule{0.95 / 5.0, 1.0 / 12.0};
/// DR baseline: γ₀ = √(3/2) - 1 is the DR step-size threshold for a convex f
/// with L = 1. Start at 150·γ₀ and decay toward γ₀ with the same rule as PR.
inline constexpr double kDrGammaFloor = 0.224744871391589;
inline constexpr StepSchedule kDrSchedule{150.0 * kDrGammaFloor, kDrGammaFloor};

enum class TableFormat { csv, markdown };

struct BenchConfig {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t trials = 50;
    std::uint64_t base_seed = 42;
    std::vector<Method> methods{Method::dr, Method::pr};
    double tol = 1e-8;
    std::size_t max_iter = 50000;
    StepSchedule pr_schedule = kPrSchedule;
    StepSchedule dr_schedule = kDrSchedule;
    bool heuristic = true;

    void validate() const;

    /// m ∈ {50, 100, 150}, n ∈ {500, 1000}, 20 trials.
    static BenchConfig desk_preset();
    /// m ∈ {100, ..., 500}, n ∈ {4000, 5000, 6000}, 50 trials.
    static BenchConfig full_preset();
};

struct BenchRow {
    std::size_t m = 0;
    std::size_t n = 0;
    Method method = Method::pr;
    double mean_iterations = 0.0;
    double fval_max = 0.0;
    double fval_min = 0.0;
    std::size_t succ = 0;
    std::size_t fail = 0;
    std::size_t undecided = 0;
    double mean_seconds = 0.0;

    std::size_t trials() const { return succ + fail + undecided; }
};

struct TrialResult {
    std::size_t iterations = 0;
    double fval = 0.0;
    Outcome outcome = Outcome::failure;
    Termination reason = Termination::max_iter;
    double seconds = 0.0;
};

/// Seed of trial `trial` for shape (m, n); independent of every other trial.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t m, std::size_t n, std::size_t trial);

SolverConfig solver_config_for(const BenchConfig& cfg, Method method);

/// Solves one instance from the origin. Divergence is reported as a failure.
TrialResult run_trial(const FeasibilityInstance& inst, Method method, const BenchConfig& cfg);

/// Rows ordered by pair, then by method as listed in cfg.methods.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);

/// Columns m,n,method,iter,fval_max,fval_min,succ,fail,undecided,seconds.
std::string format_csv(const std::vector<BenchRow>& rows);
/// One line per (m, n) with the methods side by side, like the published table.
std::string format_markdown(const std::vector<BenchRow>& rows);
std::vector<BenchRow> parse_csv(std::string_view text);

/// fval in the one-significant-digit scientific style, e.g. "3e-02".
std::string format_fval(double v);

/// Throws std::runtime_error when the path cannot be written.
void emit_table(const std::vector<BenchRow>& rows, TableFormat format,
                const std::filesystem::path& path);

/// Parses "100x1000,150x500".
std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(std::string_view text);

}  // namespace prsplit
