#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

#include "prsplit/functions.hpp"
#include "prsplit/splitting.hpp"

namespace prsplit {

/// Sparse solution of an underdetermined Gaussian system: find x in
/// C ∩ D with C = {Ax = b} and D = {‖x‖₀ ≤ r, ‖x‖∞ ≤ bound}.
struct FeasibilityInstance {
    std::shared_ptr<const AffineSet> c;
    SparseBoxSet d;
    std::uint64_t seed = 0;
    Vector planted;

    std::size_t m() const { return c->rows(); }
    std::size_t n() const { return c->cols(); }
};

/// min_{u ∈ D} ½‖Au - b‖² with D sparse-box or a convex box.
struct LsInstance {
    std::shared_ptr<const DenseMatrix> a;
    Vector b;
    std::variant<SparseBoxSet, BoxSet> constraint;
};

inline std::size_t sparsity_for(std::size_t m) { return (m + 4) / 5; }

/// A (m×n), x̂ (r) and the support of x̃ are drawn in that order from one
/// Rng(seed); support positions come from a partial Fisher-Yates shuffle.
FeasibilityInstance gen_feasibility(std::size_t m, std::size_t n, std::uint64_t seed);

/// f = ½d_C² + (5/2)‖·‖² (σ = 5, L = 6), g = δ_D - (5/2)‖·‖². Valid γ ∈ (0, 1/12);
/// binding g's prox at γ ≥ 1/5 throws shift_error.
SplitProblem build_feasibility_pr(const FeasibilityInstance& inst);

/// Unshifted f = ½d_C² (σ = 0, L = 1), g = δ_D; the DR baseline.
SplitProblem build_feasibility_dr(const FeasibilityInstance& inst);

/// f = ½‖Ay-b‖² + (5λ/2)‖y‖², g = δ_D - (5λ/2)‖·‖², with λ an upper estimate of
/// λ_max(AᵀA). σ = 5λ, L = 6λ, valid γ ∈ (0, 1/(12λ)).
SplitProblem build_constrained_ls(const LsInstance& inst);
SplitProblem build_constrained_ls(const LsInstance& inst, double lambda_max);

/// ½ d_C(z)².
double evaluate_fval(const Vector& z, const FeasibilityInstance& inst);

enum class Outcome { success, failure, undecided };

std::string_view to_string(Outcome o);

/// success below 1e-12, failure above 1e-6, undecided in between.
Outcome classify(double fval);

/// Plain-text instance dump:
///
///   prsplit-feasibility 1
///   <m> <n> <r> <bound> <seed>
///   <m lines of n values: A, row-major>
///   <one line of m values: b>
///   <one line: count k, then k pairs "index value" for the support of x̃>
///
/// Values are written with 17 significant digits so a reload is exact.
void write_instance(std::ostream& os, const FeasibilityInstance& inst);
FeasibilityInstance read_instance(std::istream& is);

}  // namespace prsplit
