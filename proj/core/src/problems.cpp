#include "prsplit/problems.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <type_traits>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace prsplit {

namespace {

constexpr double kShift = 5.0;

ProxOracle shifted_sparse_box(SparseBoxSet d, double alpha) {
    ProxOracle g;
    g.value = [inner = sparse_box_indicator(d).value, alpha](const Vector& z) {
        return inner(z) - 0.5 * alpha * z.squaredNorm();
    };
    g.bind_prox = [d, alpha](double gamma) -> VectorMap {
        if (!(gamma > 0.0)) throw std::invalid_argument("prox: gamma must be positive");
        const double scale = 1.0 - alpha * gamma;
        if (!(scale > 0.0)) throw shift_error("shift destroys prox well-posedness (alpha·gamma >= 1)");
        return [d, scale](const Vector& w) { return project_sparse_box(d, w / scale); };
    };
    return g;
}

ProxOracle shifted_box(BoxSet box, double alpha) {
    ProxOracle g;
    g.value = [inner = box_indicator(box).value, alpha](const Vector& z) {
        return inner(z) - 0.5 * alpha * z.squaredNorm();
    };
    g.bind_prox = [box, alpha](double gamma) -> VectorMap {
        if (!(gamma > 0.0)) throw std::invalid_argument("prox: gamma must be positive");
        const double scale = 1.0 - alpha * gamma;
        if (!(scale > 0.0)) throw shift_error("shift destroys prox well-posedness (alpha·gamma >= 1)");
        return [box, scale](const Vector& w) { return project_box(box, w / scale); };
    };
    return g;
}

}  // namespace

FeasibilityInstance gen_feasibility(std::size_t m, std::size_t n, std::uint64_t seed) {
    if (m < 5 || n < m) throw std::invalid_argument("gen_feasibility: need m >= 5 and n >= m");
    Rng rng(seed);
    DenseMatrix a = rng.gaussian_matrix(m, n);
    const std::size_t r = sparsity_for(m);
    const Vector values = rng.gaussian_vector(r);

    std::vector<Eigen::Index> positions(n);
    std::iota(positions.begin(), positions.end(), Eigen::Index{0});
    for (std::size_t k = 0; k < r; ++k) {
        const std::size_t pick = k + rng.index(n - k);
        std::swap(positions[k], positions[pick]);
    }
    Vector planted = Vector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < r; ++k) planted[positions[k]] = values[static_cast<Eigen::Index>(k)];

    Vector b = a * planted;
    FeasibilityInstance inst;
    inst.c = std::make_shared<const AffineSet>(std::move(a), std::move(b));
    inst.d = SparseBoxSet{r, 1e6};
    inst.seed = seed;
    inst.planted = std::move(planted);
    return inst;
}

SplitProblem build_feasibility_pr(const FeasibilityInstance& inst) {
    const auto c = inst.c;
    SplitProblem p;
    p.f.value = [c](const Vector& y) { return half_sq_dist(*c, y) + 0.5 * kShift * y.squaredNorm(); };
    p.f.gradient = [c](const Vector& y) -> Vector { return y - project_affine(*c, y) + kShift * y; };
    p.f.bind_prox = [c](double gamma) -> VectorMap {
        if (!(gamma > 0.0)) throw std::invalid_argument("prox: gamma must be positive");
        return [c, gamma](const Vector& w) { return prox_shifted_halfsqdist(*c, gamma, w); };
    };
    p.f.sigma = kShift;
    p.f.lipschitz = 1.0 + kShift;
    p.g = shifted_sparse_box(inst.d, kShift);
    p.dimension = inst.n();
    return p;
}

SplitProblem build_feasibility_dr(const FeasibilityInstance& inst) {
    SplitProblem p;
    p.f = half_sq_dist_oracle(inst.c);
    p.g = sparse_box_indicator(inst.d);
    p.dimension = inst.n();
    return p;
}

SplitProblem build_constrained_ls(const LsInstance& inst) {
    return build_constrained_ls(inst, lambda_max_upper(*inst.a));
}

SplitProblem build_constrained_ls(const LsInstance& inst, double lambda_max) {
    if (inst.a->rows() != inst.b.size())
        throw std::invalid_argument("build_constrained_ls: A and b disagree");
    if (!(lambda_max > 0.0)) throw std::invalid_argument("build_constrained_ls: lambda_max must be positive");
    const auto a = inst.a;
    const Vector b = inst.b;
    const double alpha = kShift * lambda_max;

    SplitProblem p;
    p.f.value = [a, b, alpha](const Vector& y) {
        return 0.5 * ((*a) * y - b).squaredNorm() + 0.5 * alpha * y.squaredNorm();
    };
    p.f.gradient = [a, b, alpha](const Vector& y) -> Vector {
        return a->transpose() * ((*a) * y - b) + alpha * y;
    };
    p.f.bind_prox = [a, b, lambda_max](double gamma) -> VectorMap {
        auto solver = std::make_shared<const ShiftedQuadraticSolver>(a, b, lambda_max, gamma);
        return [solver](const Vector& w) { return (*solver)(w); };
    };
    p.f.sigma = alpha;
    p.f.lipschitz = lambda_max + alpha;
    p.g = std::visit(
        [alpha](const auto& set) {
            if constexpr (std::is_same_v<std::decay_t<decltype(set)>, SparseBoxSet>)
                return shifted_sparse_box(set, alpha);
            else
                return shifted_box(set, alpha);
        },
        inst.constraint);
    p.dimension = static_cast<std::size_t>(a->cols());
    return p;
}

double evaluate_fval(const Vector& z, const FeasibilityInstance& inst) {
    if (!z.allFinite()) return std::numeric_limits<double>::infinity();
    return half_sq_dist(*inst.c, z);
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::success: return "success";
        case Outcome::failure: return "failure";
        case Outcome::undecided: return "undecided";
    }
    return "unknown";
}

Outcome classify(double fval) {
    if (std::isnan(fval) || fval < 0.0) throw std::invalid_argument("classify: fval must be nonnegative");
    if (fval < 1e-12) return Outcome::success;
    if (fval > 1e-6) return Outcome::failure;
    return Outcome::undecided;
}

void write_instance(std::ostream& os, const FeasibilityInstance& inst) {
    const auto& a = inst.c->a();
    const auto& b = inst.c->b();
    const auto old_precision = os.precision(17);
    os << "prsplit-feasibility 1\n";
    os << inst.m() << ' ' << inst.n() << ' ' << inst.d.r << ' ' << inst.d.bound << ' ' << inst.seed
       << '\n';
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) os << (j ? " " : "") << a(i, j);
        os << '\n';
    }
    for (Eigen::Index i = 0; i < b.size(); ++i) os << (i ? " " : "") << b[i];
    os << '\n';
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < inst.planted.size(); ++i)
        if (inst.planted[i] != 0.0) support.push_back(i);
    os << support.size();
    for (const auto i : support) os << ' ' << i << ' ' << inst.planted[i];
    os << '\n';
    os.precision(old_precision);
}

FeasibilityInstance read_instance(std::istream& is) {
    const auto fail = [](const std::string& what) {
        return std::runtime_error("read_instance: " + what);
    };
    std::string tag;
    int version = 0;
    if (!(is >> tag >> version) || tag != "prsplit-feasibility" || version != 1)
        throw fail("bad header");
    std::size_t m = 0, n = 0, r = 0;
    double bound = 0.0;
    std::uint64_t seed = 0;
    if (!(is >> m >> n >> r >> bound >> seed) || m == 0 || n == 0 || r == 0)
        throw fail("bad dimensions line");
    DenseMatrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (!(is >> a(i, j))) throw fail("truncated matrix");
    Vector b(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < b.size(); ++i)
        if (!(is >> b[i])) throw fail("truncated right-hand side");
    std::size_t k = 0;
    if (!(is >> k) || k > n) throw fail("bad support count");
    Vector planted = Vector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t s = 0; s < k; ++s) {
        Eigen::Index i = 0;
        double v = 0.0;
        if (!(is >> i >> v) || i < 0 || i >= planted.size()) throw fail("bad support entry");
        planted[i] = v;
    }
    FeasibilityInstance inst;
    inst.c = std::make_shared<const AffineSet>(std::move(a), std::move(b));
    inst.d = SparseBoxSet{r, bound};
    inst.seed = seed;
    inst.planted = std::move(planted);
    return inst;
}

}  // namespace prsplit
