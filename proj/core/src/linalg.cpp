#include "prsplit/linalg.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace prsplit {

double Rng::uniform() {
    // 53 random mantissa bits, shifted off zero so log() stays finite.
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

std::size_t Rng::index(std::size_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::index: empty range");
    // Rejection sampling keeps the draw unbiased and platform independent.
    const std::uint64_t range = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
                                - std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return static_cast<std::size_t>(v % range);
}

Vector Rng::gaussian_vector(std::size_t n) {
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gaussian();
    return v;
}

DenseMatrix Rng::gaussian_matrix(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("gaussian_matrix: empty shape");
    DenseMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = gaussian();
    return a;
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    return rng.gaussian_matrix(rows, cols);
}

double spectral_norm_sq(const DenseMatrix& a, double tol, std::size_t max_iter) {
    if (a.size() == 0 || a.isZero(0.0)) throw std::invalid_argument("spectral_norm_sq: zero matrix");
    if (!(tol > 0.0)) throw std::invalid_argument("spectral_norm_sq: tol must be positive");

    Rng rng(0x9e3779b97f4a7c15ULL);
    Vector v = rng.gaussian_vector(static_cast<std::size_t>(a.cols()));
    v.normalize();

    double estimate = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        const Vector av = a * v;
        const Vector w = a.transpose() * av;
        const double next = av.squaredNorm();  // Rayleigh quotient, ‖v‖ = 1
        const double wn = w.norm();
        if (wn == 0.0) {
            // Start vector landed in the null space; restart from a fresh draw.
            v = rng.gaussian_vector(static_cast<std::size_t>(a.cols()));
            v.normalize();
            continue;
        }
        v = w / wn;
        if (it > 0 && std::abs(next - estimate) <= tol * next) return next;
        estimate = next;
    }
    throw convergence_error("spectral_norm_sq: power iteration did not converge in "
                                + std::to_string(max_iter) + " iterations",
                            estimate);
}

double lambda_max_upper(const DenseMatrix& a) {
    return spectral_norm_sq(a, 1e-12, 100000) * kLambdaMaxInflation;
}

SpdFactorization::SpdFactorization(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("spd_factor: matrix is not square");
    const Eigen::Index n = m.rows();
    if (n == 0) throw std::invalid_argument("spd_factor: empty matrix");
    const double floor = 1e-12 * m.trace() / static_cast<double>(n);

    lower_ = DenseMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double pivot = m(j, j) - lower_.row(j).head(j).squaredNorm();
        if (!(pivot > floor) || !(pivot > 0.0))
            throw not_positive_definite("spd_factor: matrix is not positive definite (pivot "
                                        + std::to_string(pivot) + " at column "
                                        + std::to_string(j) + ")");
        const double diag = std::sqrt(pivot);
        lower_(j, j) = diag;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            lower_(i, j) = (m(i, j) - lower_.row(i).head(j).dot(lower_.row(j).head(j))) / diag;
        }
    }
}

Vector SpdFactorization::solve(const Vector& rhs) const {
    const Eigen::Index n = lower_.rows();
    if (rhs.size() != n) throw std::invalid_argument("solve: dimension mismatch");
    Vector y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y[i] = (rhs[i] - lower_.row(i).head(i).dot(y.head(i))) / lower_(i, i);
    }
    Vector x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        const Eigen::Index tail = n - i - 1;
        x[i] = (y[i] - lower_.col(i).tail(tail).dot(x.tail(tail))) / lower_(i, i);
    }
    return x;
}

}  // namespace prsplit
