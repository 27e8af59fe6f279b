#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "prsplit/functions.hpp"
#include "prsplit/linalg.hpp"

namespace prsplit {

/// min f + g with f smooth and strongly convex (σ may be 0 for the DR baseline).
struct SplitProblem {
    SmoothOracle f;
    ProxOracle g;
    std::size_t dimension = 0;

    /// Throws std::invalid_argument unless 0 ≤ σ ≤ L, L > 0 and every oracle is set.
    void validate() const;
};

enum class Method { pr, dr };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

/// Step-size schedule: γ ← max(γ/2, 0.9999·γ₁) whenever γ > γ₁ and the
/// y-sequence moves by more than 1000/t or grows beyond 1e10.
struct HeuristicConfig {
    double gamma_floor = 1.0 / 12.0;
};

struct SolverConfig {
    Method method = Method::pr;
    /// Initial step size. Defaults to 0.99·gamma_threshold(σ, L).
    std::optional<double> gamma0;
    double tol = 1e-8;
    std::size_t max_iter = 50000;
    std::optional<HeuristicConfig> heuristic;
    bool record_trace = false;

    void validate() const;
};

/// One (y, z, x) triple of the splitting iteration. `x_prev` holds the x the
/// triple was computed from and is empty before the first step.
struct IterateState {
    Vector y;
    Vector z;
    Vector x;
    Vector x_prev;
    std::size_t t = 0;

    static IterateState initial(const Vector& x0);
};

enum class Termination { converged, max_iter, diverged };

std::string_view to_string(Termination t);

struct TraceEntry {
    double gamma;
    /// P_γ for PR, D_γ for DR, evaluated with the γ of that step.
    double merit;
    double gap;  ///< ‖zᵗ - yᵗ‖
    double relative_change;
};

struct Residuals {
    /// ‖∇f(y) + v + (z-y)/γ‖ with v the subgradient of g implied by the
    /// z-update; zero up to rounding after any step.
    double identity;
    /// ‖∇f(z) + v + (z-y)/γ‖, the stationarity residual of the merged point z.
    double practical;
};

struct SolverReport {
    IterateState state;
    std::size_t iterations = 0;
    Termination reason = Termination::max_iter;
    std::vector<TraceEntry> trace;
    /// Empty when no step was taken.
    std::optional<Residuals> residual;
    double final_gamma = 0.0;
    /// (iteration, new γ) each time the step size changed, starting with (0, γ₀).
    std::vector<std::pair<std::size_t, double>> gamma_history;
};

/// Upper end of the admissible step-size interval, (3σ - 2L)/L². Throws
/// std::domain_error when 3σ ≤ 2L.
double gamma_threshold(double sigma, double lipschitz);

IterateState pr_step(const IterateState& s, const SplitProblem& p, double gamma);
IterateState dr_step(const IterateState& s, const SplitProblem& p, double gamma);

/// The three algebraically equal expressions for P_γ: the defining form and
/// the two rewritten forms obtained from the polarization identities.
std::array<double, 3> merit_pr_forms(const Vector& y, const Vector& z, const Vector& x,
                                     const SplitProblem& p, double gamma);

/// P_γ(y,z,x) = f(y) + g(z) - (3/2γ)‖y-z‖² + (1/γ)⟨x-y, z-y⟩.
/// Cross-checks the three forms to 1e-9 relative and throws std::logic_error
/// on disagreement, std::domain_error when g(z) is infinite.
double merit_pr(const Vector& y, const Vector& z, const Vector& x, const SplitProblem& p,
                double gamma);

/// D_γ(y,z,x) = f(y) + g(z) - (1/2γ)‖y-z‖² + (1/γ)⟨x-y, z-y⟩.
double merit_dr(const Vector& y, const Vector& z, const Vector& x, const SplitProblem& p,
                double gamma);

/// Throws std::logic_error when `s` was not produced by a step.
Residuals stationarity_residual(const IterateState& s, const SplitProblem& p, double gamma);

double heuristic_update(double gamma, std::size_t t, const Vector& y_t, const Vector& y_prev,
                        double gamma_floor);

/// max{‖Δx‖, ‖Δy‖, ‖Δz‖} / max{‖x_prev‖, ‖y_prev‖, ‖z_prev‖, 1}.
double relative_change(const IterateState& prev, const IterateState& next);

/// Called after every step with the new state and the γ used to produce it.
using StepObserver = std::function<void(const IterateState&, double gamma)>;

SolverReport run(const SplitProblem& p, const SolverConfig& cfg, const Vector& x0,
                 const StepObserver& observer = {});

struct GapBound {
    double lhs;
    double rhs;
};

/// Objective gap of the ergodic average z̄ᴺ = (1/N)Σ_{t=1..N} zᵗ against the
/// bound (1/(40γN·L_F))(1/γ - 5L_F)‖x⁰ - x̄‖² that holds when G is convex.
/// `z_trace[0]` is z¹; `z_ref` and `x_ref` approximate the limit point.
GapBound ergodic_gap_bound(std::span<const Vector> z_trace, const Vector& x0, const Vector& x_ref,
                           const Vector& z_ref, const ScalarFn& objective, double gamma,
                           double lipschitz_f, std::size_t n);

/// min_{0≤t≤N} ‖x^{t+1} - xᵗ‖ · √N. `x_trace[0]` is x⁰, so N + 2 entries are needed.
double scaled_min_step(std::span<const Vector> x_trace, std::size_t n);

/// Smallest r with ‖x^{t+1} - x̄‖² ≤ r‖xᵗ - x̄‖² on every consecutive pair of
/// `x_tail`.
double contraction_factor(std::span<const Vector> x_tail, const Vector& x_ref);

}  // namespace prsplit
