#include <doctest.h>

#include <cmath>

#include "prsplit/functions.hpp"
#include "support/oracles.hpp"

using namespace prsplit;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (const double x : v) out[i++] = x;
    return out;
}

AffineSet random_affine(std::size_t m, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    DenseMatrix a = rng.gaussian_matrix(m, n);
    Vector b = rng.gaussian_vector(m);
    return AffineSet(std::move(a), std::move(b));
}

AffineSet first_coordinate_equals(double value, std::size_t n) {
    DenseMatrix a = DenseMatrix::Zero(1, static_cast<Eigen::Index>(n));
    a(0, 0) = 1.0;
    return AffineSet(a, vec({value}));
}

}  // namespace

TEST_CASE("project_affine closed-form cases") {
    const AffineSet line = first_coordinate_equals(1.0, 2);
    CHECK(project_affine(line, vec({0.0, 0.0})).isApprox(vec({1.0, 0.0})));
    const Vector on = vec({1.0, 3.5});
    CHECK((project_affine(line, on) - on).norm() < 1e-15);
    CHECK_THROWS_AS(project_affine(line, vec({1.0})), std::invalid_argument);
}

TEST_CASE("project_affine matches the KKT oracle and lands on C") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const AffineSet c = random_affine(3, 6, seed);
        const Vector w = Rng(seed + 100).gaussian_vector(6);
        const Vector p = project_affine(c, w);
        CHECK((p - testing::kkt_projection(c.a(), c.b(), w)).norm() <= 1e-8);
        CHECK((c.a() * p - c.b()).norm() <= 1e-9 * (1.0 + c.b().norm()));
        // w - p lies in range(Aᵀ).
        const Vector coeff = c.gram().solve(c.a() * (w - p));
        CHECK((c.a().transpose() * coeff - (w - p)).norm() <= 1e-10 * (1.0 + w.norm()));
    }
}

TEST_CASE("project_affine is idempotent and nonexpansive") {
    const AffineSet c = random_affine(4, 9, 7);
    Rng rng(8);
    for (int k = 0; k < 20; ++k) {
        const Vector u = 5.0 * rng.gaussian_vector(9);
        const Vector v = 5.0 * rng.gaussian_vector(9);
        const Vector pu = project_affine(c, u);
        CHECK((project_affine(c, pu) - pu).norm() <= 1e-10);
        CHECK((pu - project_affine(c, v)).norm() <= (u - v).norm() + 1e-12);
    }
}

TEST_CASE("AffineSet surfaces a rank-deficient A") {
    DenseMatrix a(2, 3);
    a << 1, 2, 3, 2, 4, 6;
    CHECK_THROWS_AS(AffineSet(a, vec({1.0, 2.0})), not_positive_definite);
    CHECK_THROWS_AS(AffineSet(a, vec({1.0})), std::invalid_argument);
}

TEST_CASE("project_sparse_box picks the largest magnitudes") {
    const SparseBoxSet d{2, 1e6};
    CHECK(project_sparse_box(d, vec({3.0, -1.0, 2.0})) == vec({3.0, 0.0, 2.0}));
    CHECK(project_sparse_box({1, 1e6}, vec({5.0, 5.0})) == vec({5.0, 0.0}));
    CHECK(project_sparse_box({1, 1e6}, vec({-1.0, 4.0, -4.0})) == vec({0.0, 4.0, 0.0}));
    CHECK(project_sparse_box({1, 2.0}, vec({-7.0, 1.0})) == vec({-2.0, 0.0}));
    CHECK(project_sparse_box({5, 1e6}, vec({1.0, -2.0})) == vec({1.0, -2.0}));
    CHECK_THROWS_AS(project_sparse_box({0, 1.0}, vec({1.0})), std::invalid_argument);
    CHECK_THROWS_AS(project_sparse_box({1, 0.0}, vec({1.0})), std::invalid_argument);
}

TEST_CASE("project_sparse_box equals exhaustive support enumeration") {
    Rng rng(31);
    for (int k = 0; k < 50; ++k) {
        const Vector w = 3.0 * rng.gaussian_vector(8);
        // Includes bounds that clip, where support choice and clipping interact.
        for (const double bound : {1e6, 1.0, 0.25}) {
            const SparseBoxSet d{3, bound};
            const Vector p = project_sparse_box(d, w);
            CHECK((p - w).squaredNorm()
                  == doctest::Approx(testing::brute_force_sparse_box(w, 3, bound)).epsilon(1e-12));
            CHECK((project_sparse_box(d, p) - p).norm() <= 1e-10);
            CHECK(sparse_box_indicator(d).value(p) == 0.0);
        }
    }
}

TEST_CASE("project_box clamps") {
    CHECK(project_box({-1.0, 2.0}, vec({-3.0, 0.5, 9.0})) == vec({-1.0, 0.5, 2.0}));
}

TEST_CASE("prox_shifted_quadratic with A = I") {
    const DenseMatrix a = DenseMatrix::Identity(3, 3);
    const Vector w = vec({1.0, -2.0, 0.5});
    const double gamma = 0.3;
    // minimizer of ½‖y‖² + (5/2)‖y‖² + ‖y-w‖²/(2γ): y = w/(6γ+1)
    CHECK(prox_shifted_quadratic(a, Vector::Zero(3), 1.0, gamma, w).isApprox(w / (6 * gamma + 1)));
    CHECK(prox_shifted_quadratic(a, Vector::Zero(3), 1.0, gamma, Vector::Zero(3)).norm() == 0.0);
}

TEST_CASE("prox_shifted_quadratic satisfies its first-order condition") {
    for (const auto [m, n] : {std::pair{4, 6}, std::pair{2, 9}, std::pair{9, 4}}) {
        Rng rng(static_cast<std::uint64_t>(m * 100 + n));
        const DenseMatrix a = rng.gaussian_matrix(m, n);
        const Vector b = rng.gaussian_vector(m);
        const Vector w = rng.gaussian_vector(n);
        const double lam = lambda_max_upper(a);
        const double gamma = 0.5 / (12.0 * lam);
        const Vector y = prox_shifted_quadratic(a, b, lam, gamma, w);
        const Vector grad = a.transpose() * (a * y - b) + 5.0 * lam * y + (y - w) / gamma;
        CHECK(grad.norm() <= 1e-8);
    }
}

TEST_CASE("ShiftedQuadraticSolver Woodbury and direct paths agree") {
    Rng rng(77);
    const auto a = std::make_shared<const DenseMatrix>(rng.gaussian_matrix(5, 20));
    const Vector b = rng.gaussian_vector(5);
    const Vector w = rng.gaussian_vector(20);
    const double lam = lambda_max_upper(*a);
    const ShiftedQuadraticSolver woodbury(a, b, lam, 0.01);
    REQUIRE(woodbury.uses_woodbury());
    Eigen::MatrixXd m = 0.01 * (a->transpose() * (*a));
    m.diagonal().array() += 1.0 + 5.0 * 0.01 * lam;
    const Eigen::VectorXd direct = m.ldlt().solve(w + 0.01 * a->transpose() * b);
    CHECK((woodbury(w) - direct).norm() <= 1e-10 * direct.norm());
    CHECK_THROWS_AS(ShiftedQuadraticSolver(a, b, lam, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(woodbury(Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("prox_shifted_halfsqdist closed-form cases") {
    DenseMatrix a(1, 2);
    a << 1.0, -1.0;
    const AffineSet through_origin(a, vec({0.0}));
    CHECK(prox_shifted_halfsqdist(through_origin, 0.05, Vector::Zero(2)).norm() == 0.0);

    const AffineSet line = first_coordinate_equals(1.0, 2);
    const Vector y = prox_shifted_halfsqdist(line, 1.0 / 24.0, Vector::Zero(2));
    CHECK(y[0] == doctest::Approx(1.0 / 30.0).epsilon(1e-14));
    CHECK(y[1] == 0.0);
}

TEST_CASE("prox_shifted_halfsqdist is a local minimizer of its subproblem") {
    const AffineSet c = random_affine(3, 7, 5);
    Rng rng(6);
    const double gamma = 0.07;
    const Vector w = rng.gaussian_vector(7);
    const auto objective = [&](const Vector& y) {
        return half_sq_dist(c, y) + 2.5 * y.squaredNorm() + (y - w).squaredNorm() / (2 * gamma);
    };
    const Vector y = prox_shifted_halfsqdist(c, gamma, w);
    for (int k = 0; k < 20; ++k) CHECK(objective(y) <= objective(y + 1e-3 * rng.gaussian_vector(7)));
    const Vector grad = (y - project_affine(c, y)) + 5.0 * y + (y - w) / gamma;
    CHECK(grad.norm() <= 1e-8);
}

TEST_CASE("prox_halfsqdist cases") {
    const AffineSet c = random_affine(2, 5, 9);
    const Vector in_c = project_affine(c, Rng(1).gaussian_vector(5));
    CHECK((prox_halfsqdist(c, 0.7, in_c) - in_c).norm() <= 1e-12);

    DenseMatrix one(1, 1);
    one(0, 0) = 1.0;
    const AffineSet zero(one, vec({0.0}));
    CHECK(prox_halfsqdist(zero, 1.0, vec({2.0}))[0] == doctest::Approx(1.0));

    const Vector w = Rng(2).gaussian_vector(5);
    const Vector y = prox_halfsqdist(c, 0.3, w);
    CHECK(((y - project_affine(c, y)) + (y - w) / 0.3).norm() <= 1e-8);
    CHECK_THROWS_AS(prox_halfsqdist(c, -1.0, w), std::invalid_argument);
}

TEST_CASE("shift_split moduli and proximal maps") {
    auto c = std::make_shared<const AffineSet>(random_affine(3, 8, 12));
    const SmoothOracle big_f = half_sq_dist_oracle(c);
    const SparseBoxSet d{2, 1e6};
    const auto [f, g] = shift_split(big_f, sparse_box_indicator(d), 5.0);
    CHECK(f.sigma == 5.0);
    CHECK(f.lipschitz == 6.0);

    Rng rng(13);
    const double gamma = 0.06;
    for (int k = 0; k < 10; ++k) {
        const Vector w = rng.gaussian_vector(8);
        CHECK(g.prox(gamma, w) == project_sparse_box(d, w / (1.0 - 5.0 * gamma)));
        CHECK((f.prox(gamma, w) - prox_shifted_halfsqdist(*c, gamma, w)).norm() <= 1e-12);
        const Vector y = f.prox(gamma, w);
        CHECK((f.gradient(y) + (y - w) / gamma).norm() <= 1e-8);
    }
    CHECK_THROWS_AS(g.bind_prox(0.2), shift_error);
    CHECK_THROWS_AS(g.bind_prox(0.5), shift_error);
    CHECK_THROWS_AS(shift_split(big_f, zero_function(), 2.0), std::invalid_argument);
}

TEST_CASE("shift_split leaves f + g unchanged") {
    Rng rng(21);
    const auto quad = testing::random_quadratic(6, 0.0, 2.0, rng);
    SmoothOracle big_f = testing::quadratic_oracle(quad);
    big_f.sigma = 0.0;
    const auto [f, g] = shift_split(big_f, zero_function(), 5.0 * quad.lipschitz);
    for (int k = 0; k < 10; ++k) {
        const Vector w = 4.0 * rng.gaussian_vector(6);
        const double original = big_f.value(w);
        CHECK(f.value(w) + g.value(w) == doctest::Approx(original).epsilon(1e-12));
    }
    // Shifted g of G = 0 is -(α/2)‖·‖²; its prox is w/(1-αγ).
    const double alpha = 5.0 * quad.lipschitz;
    const double gamma = 0.5 / (12.0 * quad.lipschitz);
    const Vector w = rng.gaussian_vector(6);
    CHECK(g.prox(gamma, w).isApprox(w / (1.0 - alpha * gamma)));
}
