#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>

#include "prsplit/linalg.hpp"

namespace prsplit {

/// A proximal map with its step size already fixed.
using VectorMap = std::function<Vector(const Vector&)>;
using ScalarFn = std::function<double(const Vector&)>;

/// Smooth, strongly convex f together with its moduli and proximal map.
///
/// `bind_prox(γ)` returns prox_{γf}; anything expensive that depends on γ
/// (a factorization, say) is built once there and captured by the returned
/// map. Callers rebind whenever γ changes.
struct SmoothOracle {
    ScalarFn value;
    std::function<Vector(const Vector&)> gradient;
    std::function<VectorMap(double)> bind_prox;
    double sigma = 0.0;
    double lipschitz = 1.0;

    Vector prox(double gamma, const Vector& w) const { return bind_prox(gamma)(w); }
};

/// Proper closed g, possibly nonconvex and extended-valued. The proximal map
/// returns one deterministic element of prox_{γg}.
struct ProxOracle {
    ScalarFn value;
    std::function<VectorMap(double)> bind_prox;

    Vector prox(double gamma, const Vector& w) const { return bind_prox(gamma)(w); }
};

class shift_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// C = {x : Ax = b} with A of full row rank. Holds a factorization of AAᵀ.
class AffineSet {
public:
    AffineSet(DenseMatrix a, Vector b);

    const DenseMatrix& a() const noexcept { return a_; }
    const Vector& b() const noexcept { return b_; }
    std::size_t rows() const noexcept { return static_cast<std::size_t>(a_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(a_.cols()); }
    const SpdFactorization& gram() const noexcept { return gram_; }

private:
    DenseMatrix a_;
    Vector b_;
    SpdFactorization gram_;
};

/// D = {x : ‖x‖₀ ≤ r, ‖x‖∞ ≤ bound}.
struct SparseBoxSet {
    std::size_t r = 1;
    double bound = 1e6;
};

/// Convex box [lower, upper]ⁿ.
struct BoxSet {
    double lower = -1.0;
    double upper = 1.0;
};

Vector project_affine(const AffineSet& c, const Vector& w);

/// Keeps the r largest-magnitude entries (lowest index wins ties), zeroes
/// the rest and clips the survivors to [-bound, bound]. Since the gain from
/// keeping an entry, w² - (|w| - bound)₊², is nondecreasing in |w|, this is an
/// exact nearest point of D, clipping included.
Vector project_sparse_box(const SparseBoxSet& d, const Vector& w);

Vector project_box(const BoxSet& box, const Vector& w);

/// ½ d_C(y)².
double half_sq_dist(const AffineSet& c, const Vector& y);

/// Minimizer of ½‖Ay-b‖² + (5λmax/2)‖y‖² + ‖y-w‖²/(2γ). Builds a fresh
/// factorization; use ShiftedQuadraticSolver to reuse it across calls.
Vector prox_shifted_quadratic(const DenseMatrix& a, const Vector& b, double lambda_max,
                              double gamma, const Vector& w);

/// Factorization of (1 + 5γλmax)I + γAᵀA for one (A, γ) pair. When A has
/// fewer than n/2 rows the solve goes through the m×m Woodbury system
/// (1 + 5γλmax)I + γAAᵀ instead of the n×n matrix.
class ShiftedQuadraticSolver {
public:
    ShiftedQuadraticSolver(std::shared_ptr<const DenseMatrix> a, Vector b, double lambda_max,
                           double gamma);

    Vector operator()(const Vector& w) const;
    bool uses_woodbury() const noexcept { return woodbury_; }

private:
    std::shared_ptr<const DenseMatrix> a_;
    Vector atb_;
    double gamma_;
    double diag_;
    bool woodbury_;
    std::optional<SpdFactorization> factor_;
};

/// (γ·P_C(w/(1+5γ)) + w)/(6γ+1): the minimizer of
/// ½d_C(y)² + (5/2)‖y‖² + ‖y-w‖²/(2γ).
Vector prox_shifted_halfsqdist(const AffineSet& c, double gamma, const Vector& w);

/// (w + γ·P_C(w))/(1+γ): the minimizer of ½d_C(y)² + ‖y-w‖²/(2γ).
Vector prox_halfsqdist(const AffineSet& c, double gamma, const Vector& w);

/// Oracles for F = ½d_C² (σ = 0, L = 1).
SmoothOracle half_sq_dist_oracle(std::shared_ptr<const AffineSet> c);
/// Oracles for G = δ_D and G = δ_box.
ProxOracle sparse_box_indicator(SparseBoxSet d);
ProxOracle box_indicator(BoxSet box);
ProxOracle zero_function();

/// Rewrites F + G as f + g with f = F + (α/2)‖·‖² and g = G - (α/2)‖·‖².
///
/// Both proximal maps are composed from the originals:
///   prox_{γf}(w) = prox_{γ'F}(w/(1+αγ)),  γ' = γ/(1+αγ)
///   prox_{γg}(w) = prox_{γ'G}(w/(1-αγ)),  γ' = γ/(1-αγ)
/// The second requires αγ < 1; binding g's prox otherwise throws shift_error.
/// Requires α > 2·L_F so that the result satisfies 3σ > 2L.
std::pair<SmoothOracle, ProxOracle> shift_split(const SmoothOracle& f, const ProxOracle& g,
                                                double alpha);

}  // namespace prsplit
