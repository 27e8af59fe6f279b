#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>

#include <Eigen/Core>

namespace prsplit {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Slack applied to power-iteration estimates before they are used as a
// Lipschitz modulus. An underestimate would void the step-size threshold.
inline constexpr double kLambdaMaxInflation = 1.0 + 1e-6;

class not_positive_definite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double last_estimate)
        : std::runtime_error(what), last_estimate_(last_estimate) {}

    double last_estimate() const noexcept { return last_estimate_; }

private:
    double last_estimate_;
};

/// Seeded source of uniform and Gaussian variates.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Uniforms take the top 53 bits; Gaussians use the trigonometric
/// Box-Muller transform, consuming two uniforms per pair and caching the
/// second value. Results are therefore identical across standard libraries
/// up to the last-ulp behaviour of std::log/std::cos/std::sin.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1].
    double uniform();
    double gaussian();
    /// Uniform integer in [0, bound).
    std::size_t index(std::size_t bound);

    Vector gaussian_vector(std::size_t n);
    DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols);

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Largest eigenvalue of AᵀA by power iteration from a fixed seeded start.
/// Stops once successive Rayleigh quotients differ by at most tol·λ; throws
/// convergence_error (carrying the last estimate) after max_iter sweeps.
double spectral_norm_sq(const DenseMatrix& a, double tol = 1e-12, std::size_t max_iter = 10000);

/// spectral_norm_sq inflated by kLambdaMaxInflation; safe to use as L.
double lambda_max_upper(const DenseMatrix& a);

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
class SpdFactorization {
public:
    /// Throws not_positive_definite when a pivot drops to 1e-12·trace/dim or
    /// below, std::invalid_argument when the matrix is not square.
    explicit SpdFactorization(const DenseMatrix& m);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(lower_.rows()); }
    const DenseMatrix& lower() const noexcept { return lower_; }

    Vector solve(const Vector& rhs) const;

private:
    DenseMatrix lower_;
};

inline SpdFactorization spd_factor(const DenseMatrix& m) { return SpdFactorization(m); }
inline Vector solve(const SpdFactorization& f, const Vector& rhs) { return f.solve(rhs); }

}  // namespace prsplit
