#include "prsplit/functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace prsplit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DenseMatrix gram_of(const DenseMatrix& a) {
    DenseMatrix g = a * a.transpose();
    return g;
}

}  // namespace

AffineSet::AffineSet(DenseMatrix a, Vector b)
    : a_(std::move(a)), b_(std::move(b)), gram_([this] {
          if (a_.rows() != b_.size()) throw std::invalid_argument("AffineSet: A and b disagree");
          return SpdFactorization(gram_of(a_));
      }()) {}

Vector project_affine(const AffineSet& c, const Vector& w) {
    if (static_cast<std::size_t>(w.size()) != c.cols())
        throw std::invalid_argument("project_affine: dimension mismatch");
    const Vector residual = c.a() * w - c.b();
    return w - c.a().transpose() * c.gram().solve(residual);
}

Vector project_sparse_box(const SparseBoxSet& d, const Vector& w) {
    const auto n = static_cast<std::size_t>(w.size());
    if (d.r == 0) throw std::invalid_argument("project_sparse_box: r must be at least 1");
    if (!(d.bound > 0.0)) throw std::invalid_argument("project_sparse_box: bound must be positive");

    Vector out = Vector::Zero(w.size());
    if (d.r >= n) {
        out = w.cwiseMax(-d.bound).cwiseMin(d.bound);
        return out;
    }
    std::vector<Eigen::Index> idx(n);
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    const auto larger = [&w](Eigen::Index i, Eigen::Index j) {
        const double ai = std::abs(w[i]);
        const double aj = std::abs(w[j]);
        return ai > aj || (ai == aj && i < j);
    };
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(d.r) - 1, idx.end(),
                     larger);
    for (std::size_t k = 0; k < d.r; ++k) {
        const Eigen::Index i = idx[k];
        out[i] = std::clamp(w[i], -d.bound, d.bound);
    }
    return out;
}

Vector project_box(const BoxSet& box, const Vector& w) {
    return w.cwiseMax(box.lower).cwiseMin(box.upper);
}

double half_sq_dist(const AffineSet& c, const Vector& y) {
    return 0.5 * (y - project_affine(c, y)).squaredNorm();
}

ShiftedQuadraticSolver::ShiftedQuadraticSolver(std::shared_ptr<const DenseMatrix> a, Vector b,
                                               double lambda_max, double gamma)
    : a_(std::move(a)), gamma_(gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("prox_shifted_quadratic: gamma must be positive");
    if (a_->rows() != b.size()) throw std::invalid_argument("prox_shifted_quadratic: A and b disagree");
    atb_ = a_->transpose() * b;
    diag_ = 1.0 + 5.0 * gamma * lambda_max;
    const Eigen::Index m = a_->rows();
    const Eigen::Index n = a_->cols();
    woodbury_ = 2 * m < n;
    if (woodbury_) {
        DenseMatrix s = gamma * ((*a_) * a_->transpose());
        s.diagonal().array() += diag_;
        factor_.emplace(s);
    } else {
        DenseMatrix s = gamma * (a_->transpose() * (*a_));
        s.diagonal().array() += diag_;
        factor_.emplace(s);
    }
}

Vector ShiftedQuadraticSolver::operator()(const Vector& w) const {
    if (w.size() != a_->cols()) throw std::invalid_argument("prox_shifted_quadratic: dimension mismatch");
    const Vector rhs = w + gamma_ * atb_;
    if (!woodbury_) return factor_->solve(rhs);
    // M⁻¹ = (I - γAᵀ(cI + γAAᵀ)⁻¹A)/c
    const Vector inner = factor_->solve((*a_) * rhs);
    return (rhs - gamma_ * (a_->transpose() * inner)) / diag_;
}

Vector prox_shifted_quadratic(const DenseMatrix& a, const Vector& b, double lambda_max,
                              double gamma, const Vector& w) {
    const ShiftedQuadraticSolver solver(std::make_shared<const DenseMatrix>(a), b, lambda_max,
                                        gamma);
    return solver(w);
}

Vector prox_shifted_halfsqdist(const AffineSet& c, double gamma, const Vector& w) {
    if (!(gamma > 0.0)) throw std::invalid_argument("prox_shifted_halfsqdist: gamma must be positive");
    const Vector u = project_affine(c, w / (1.0 + 5.0 * gamma));
    return (gamma * u + w) / (6.0 * gamma + 1.0);
}

Vector prox_halfsqdist(const AffineSet& c, double gamma, const Vector& w) {
    if (!(gamma > 0.0)) throw std::invalid_argument("prox_halfsqdist: gamma must be positive");
    return (w + gamma * project_affine(c, w)) / (1.0 + gamma);
}

SmoothOracle half_sq_dist_oracle(std::shared_ptr<const AffineSet> c) {
    SmoothOracle f;
    f.value = [c](const Vector& y) { return half_sq_dist(*c, y); };
    f.gradient = [c](const Vector& y) -> Vector { return y - project_affine(*c, y); };
    f.bind_prox = [c](double gamma) -> VectorMap {
        if (!(gamma > 0.0)) throw std::invalid_argument("prox_halfsqdist: gamma must be positive");
        return [c, gamma](const Vector& w) { return prox_halfsqdist(*c, gamma, w); };
    };
    f.sigma = 0.0;
    f.lipschitz = 1.0;
    return f;
}

ProxOracle sparse_box_indicator(SparseBoxSet d) {
    ProxOracle g;
    g.value = [d](const Vector& z) {
        std::size_t nnz = 0;
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            if (std::abs(z[i]) > d.bound) return kInf;
            if (z[i] != 0.0) ++nnz;
        }
        return nnz <= d.r ? 0.0 : kInf;
    };
    g.bind_prox = [d](double) -> VectorMap {
        return [d](const Vector& w) { return project_sparse_box(d, w); };
    };
    return g;
}

ProxOracle box_indicator(BoxSet box) {
    ProxOracle g;
    g.value = [box](const Vector& z) {
        const bool inside = (z.array() >= box.lower).all() && (z.array() <= box.upper).all();
        return inside ? 0.0 : kInf;
    };
    g.bind_prox = [box](double) -> VectorMap {
        return [box](const Vector& w) { return project_box(box, w); };
    };
    return g;
}

ProxOracle zero_function() {
    ProxOracle g;
    g.value = [](const Vector&) { return 0.0; };
    g.bind_prox = [](double) -> VectorMap { return [](const Vector& w) { return w; }; };
    return g;
}

std::pair<SmoothOracle, ProxOracle> shift_split(const SmoothOracle& f, const ProxOracle& g,
                                                double alpha) {
    if (!(alpha > 2.0 * f.lipschitz))
        throw std::invalid_argument("shift_split: alpha must exceed 2·L_F");

    SmoothOracle fs;
    fs.value = [inner = f.value, alpha](const Vector& y) {
        return inner(y) + 0.5 * alpha * y.squaredNorm();
    };
    fs.gradient = [inner = f.gradient, alpha](const Vector& y) -> Vector {
        return inner(y) + alpha * y;
    };
    fs.bind_prox = [inner = f.bind_prox, alpha](double gamma) -> VectorMap {
        if (!(gamma > 0.0)) throw std::invalid_argument("shift_split: gamma must be positive");
        const double scale = 1.0 + alpha * gamma;
        VectorMap base = inner(gamma / scale);
        return [base = std::move(base), scale](const Vector& w) { return base(w / scale); };
    };
    fs.sigma = f.sigma + alpha;
    fs.lipschitz = f.lipschitz + alpha;

    ProxOracle gs;
    gs.value = [inner = g.value, alpha](const Vector& z) {
        return inner(z) - 0.5 * alpha * z.squaredNorm();
    };
    gs.bind_prox = [inner = g.bind_prox, alpha](double gamma) -> VectorMap {
        if (!(gamma > 0.0)) throw std::invalid_argument("shift_split: gamma must be positive");
        const double scale = 1.0 - alpha * gamma;
        if (!(scale > 0.0)) throw shift_error("shift destroys prox well-posedness (alpha·gamma >= 1)");
        VectorMap base = inner(gamma / scale);
        return [base = std::move(base), scale](const Vector& w) { return base(w / scale); };
    };
    return {std::move(fs), std::move(gs)};
}

}  // namespace prsplit
