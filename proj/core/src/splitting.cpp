#include "prsplit/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace prsplit {

namespace {

constexpr double kDivergenceNorm = 1e12;

IterateState step_with(const IterateState& s, const VectorMap& f_prox, const VectorMap& g_prox,
                       Method method) {
    IterateState next;
    next.y = f_prox(s.x);
    next.z = g_prox(2.0 * next.y - s.x);
    const double reflection = method == Method::pr ? 2.0 : 1.0;
    next.x = s.x + reflection * (next.z - next.y);
    next.x_prev = s.x;
    next.t = s.t + 1;
    return next;
}

bool finite_and_bounded(const IterateState& s) {
    return s.y.allFinite() && s.z.allFinite() && s.x.allFinite() && s.y.norm() <= kDivergenceNorm;
}

double checked_value(const ScalarFn& fn, const Vector& v, const char* what) {
    const double value = fn(v);
    if (std::isinf(value) || std::isnan(value))
        throw std::domain_error(std::string("merit: ") + what + " is not finite");
    return value;
}

}  // namespace

void SplitProblem::validate() const {
    if (!f.value || !f.gradient || !f.bind_prox || !g.value || !g.bind_prox)
        throw std::invalid_argument("SplitProblem: missing oracle");
    if (!(f.lipschitz > 0.0)) throw std::invalid_argument("SplitProblem: L must be positive");
    if (!(f.sigma >= 0.0) || f.sigma > f.lipschitz)
        throw std::invalid_argument("SplitProblem: need 0 <= sigma <= L");
    if (dimension == 0) throw std::invalid_argument("SplitProblem: zero dimension");
}

std::string_view to_string(Method m) { return m == Method::pr ? "PR" : "DR"; }

std::optional<Method> parse_method(std::string_view s) {
    if (s == "pr" || s == "PR") return Method::pr;
    if (s == "dr" || s == "DR") return Method::dr;
    return std::nullopt;
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iter: return "max_iter";
        case Termination::diverged: return "diverged";
    }
    return "unknown";
}

void SolverConfig::validate() const {
    if (gamma0 && !(*gamma0 > 0.0)) throw std::invalid_argument("SolverConfig: gamma0 must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
    if (heuristic && !(heuristic->gamma_floor > 0.0))
        throw std::invalid_argument("SolverConfig: heuristic gamma floor must be positive");
}

IterateState IterateState::initial(const Vector& x0) {
    IterateState s;
    s.y = x0;
    s.z = x0;
    s.x = x0;
    return s;
}

double gamma_threshold(double sigma, double lipschitz) {
    if (!(lipschitz > 0.0)) throw std::invalid_argument("gamma_threshold: L must be positive");
    if (!(3.0 * sigma > 2.0 * lipschitz))
        throw std::domain_error("gamma_threshold: insufficient strong convexity (need 3σ > 2L)");
    return (3.0 * sigma - 2.0 * lipschitz) / (lipschitz * lipschitz);
}

IterateState pr_step(const IterateState& s, const SplitProblem& p, double gamma) {
    return step_with(s, p.f.bind_prox(gamma), p.g.bind_prox(gamma), Method::pr);
}

IterateState dr_step(const IterateState& s, const SplitProblem& p, double gamma) {
    return step_with(s, p.f.bind_prox(gamma), p.g.bind_prox(gamma), Method::dr);
}

std::array<double, 3> merit_pr_forms(const Vector& y, const Vector& z, const Vector& x,
                                     const SplitProblem& p, double gamma) {
    const double fy = checked_value(p.f.value, y, "f(y)");
    const double gz = checked_value(p.g.value, z, "g(z)");
    const double base = fy + gz;
    const double yz = (y - z).squaredNorm();
    const double defining = base - 1.5 / gamma * yz + (x - y).dot(z - y) / gamma;
    const double first = base + (2.0 * y - z - x).squaredNorm() / (2.0 * gamma)
                         - (x - y).squaredNorm() / (2.0 * gamma) - 2.0 / gamma * yz;
    const double second =
        base + ((x - y).squaredNorm() - (x - z).squaredNorm() - 2.0 * yz) / (2.0 * gamma);
    return {defining, first, second};
}

double merit_pr(const Vector& y, const Vector& z, const Vector& x, const SplitProblem& p,
                double gamma) {
    const auto forms = merit_pr_forms(y, z, x, p, gamma);
    // Cancellation makes the forms agree only relative to the size of the
    // individual terms, not the size of the result.
    const double scale = std::abs(forms[0]) + ((x - y).squaredNorm() + (x - z).squaredNorm()
                                               + (2.0 * y - z - x).squaredNorm()
                                               + (y - z).squaredNorm()) / gamma;
    const double tol = 1e-9 * std::max(1.0, scale);
    if (std::abs(forms[0] - forms[1]) > tol || std::abs(forms[0] - forms[2]) > tol)
        throw std::logic_error("merit_pr: equivalent forms disagree");
    return forms[0];
}

double merit_dr(const Vector& y, const Vector& z, const Vector& x, const SplitProblem& p,
                double gamma) {
    const double fy = checked_value(p.f.value, y, "f(y)");
    const double gz = checked_value(p.g.value, z, "g(z)");
    return fy + gz - 0.5 / gamma * (y - z).squaredNorm() + (x - y).dot(z - y) / gamma;
}

Residuals stationarity_residual(const IterateState& s, const SplitProblem& p, double gamma) {
    if (s.t == 0 || s.x_prev.size() == 0)
        throw std::logic_error("stationarity_residual: state was not produced by a step");
    const Vector v = (2.0 * s.y - s.x_prev - s.z) / gamma;
    const Vector coupling = v + (s.z - s.y) / gamma;
    return {(p.f.gradient(s.y) + coupling).norm(), (p.f.gradient(s.z) + coupling).norm()};
}

double heuristic_update(double gamma, std::size_t t, const Vector& y_t, const Vector& y_prev,
                        double gamma_floor) {
    if (!(gamma > gamma_floor)) return gamma;
    const bool moving = (y_t - y_prev).norm() > 1000.0 / static_cast<double>(t);
    const bool escaping = y_t.norm() > 1e10;
    if (moving || escaping) return std::max(gamma / 2.0, 0.9999 * gamma_floor);
    return gamma;
}

double relative_change(const IterateState& prev, const IterateState& next) {
    const double num = std::max({(next.x - prev.x).norm(), (next.y - prev.y).norm(),
                                 (next.z - prev.z).norm()});
    const double den = std::max({prev.x.norm(), prev.y.norm(), prev.z.norm(), 1.0});
    return num / den;
}

SolverReport run(const SplitProblem& p, const SolverConfig& cfg, const Vector& x0,
                 const StepObserver& observer) {
    p.validate();
    cfg.validate();
    if (static_cast<std::size_t>(x0.size()) != p.dimension)
        throw std::invalid_argument("run: x0 has the wrong dimension");
    if (!x0.allFinite()) throw std::invalid_argument("run: x0 is not finite");

    double gamma = cfg.gamma0 ? *cfg.gamma0 : 0.99 * gamma_threshold(p.f.sigma, p.f.lipschitz);
    VectorMap f_prox = p.f.bind_prox(gamma);
    VectorMap g_prox = p.g.bind_prox(gamma);

    SolverReport report;
    report.state = IterateState::initial(x0);
    report.gamma_history.emplace_back(0, gamma);
    if (cfg.record_trace) report.trace.reserve(std::min<std::size_t>(cfg.max_iter, 1 << 16));

    double step_gamma = gamma;
    for (std::size_t t = 1; t <= cfg.max_iter; ++t) {
        IterateState next = step_with(report.state, f_prox, g_prox, cfg.method);
        step_gamma = gamma;
        report.iterations = t;
        if (!finite_and_bounded(next)) {
            report.state = std::move(next);
            report.reason = Termination::diverged;
            report.final_gamma = gamma;
            return report;
        }
        const double rel = relative_change(report.state, next);
        if (cfg.record_trace) {
            const double merit = cfg.method == Method::pr
                                     ? merit_pr(next.y, next.z, next.x, p, gamma)
                                     : merit_dr(next.y, next.z, next.x, p, gamma);
            report.trace.push_back({gamma, merit, (next.z - next.y).norm(), rel});
        }
        if (observer) observer(next, gamma);

        const Vector y_prev = std::move(report.state.y);
        report.state = std::move(next);
        if (rel < cfg.tol) {
            report.reason = Termination::converged;
            break;
        }
        if (cfg.heuristic) {
            const double updated =
                heuristic_update(gamma, t, report.state.y, y_prev, cfg.heuristic->gamma_floor);
            if (updated != gamma) {
                gamma = updated;
                f_prox = p.f.bind_prox(gamma);
                g_prox = p.g.bind_prox(gamma);
                report.gamma_history.emplace_back(t, gamma);
            }
        }
    }
    report.final_gamma = gamma;
    if (report.iterations > 0) report.residual = stationarity_residual(report.state, p, step_gamma);
    return report;
}

GapBound ergodic_gap_bound(std::span<const Vector> z_trace, const Vector& x0, const Vector& x_ref,
                           const Vector& z_ref, const ScalarFn& objective, double gamma,
                           double lipschitz_f, std::size_t n) {
    if (n == 0) throw std::invalid_argument("ergodic_gap_bound: N must be positive");
    if (z_trace.size() < n) throw std::invalid_argument("ergodic_gap_bound: trace shorter than N");
    Vector average = Vector::Zero(z_trace.front().size());
    for (std::size_t t = 0; t < n; ++t) average += z_trace[t];
    average /= static_cast<double>(n);
    const double lhs = objective(average) - objective(z_ref);
    const double rhs = (1.0 / gamma - 5.0 * lipschitz_f) * (x0 - x_ref).squaredNorm()
                       / (40.0 * gamma * static_cast<double>(n) * lipschitz_f);
    return {lhs, rhs};
}

double scaled_min_step(std::span<const Vector> x_trace, std::size_t n) {
    if (x_trace.size() < n + 2) throw std::invalid_argument("scaled_min_step: trace too short");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t <= n; ++t) best = std::min(best, (x_trace[t + 1] - x_trace[t]).norm());
    return best * std::sqrt(static_cast<double>(n));
}

double contraction_factor(std::span<const Vector> x_tail, const Vector& x_ref) {
    if (x_tail.size() < 2) throw std::invalid_argument("contraction_factor: need two iterates");
    double r = 0.0;
    for (std::size_t t = 0; t + 1 < x_tail.size(); ++t) {
        const double before = (x_tail[t] - x_ref).squaredNorm();
        const double after = (x_tail[t + 1] - x_ref).squaredNorm();
        if (before == 0.0) {
            if (after > 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        r = std::max(r, after / before);
    }
    return r;
}

}  // namespace prsplit
