#include "hdx/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "hdx/errors.hpp"

namespace hdx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_nonnegative(const Eigen::VectorXd& f) {
    for (Eigen::Index i = 0; i < f.size(); ++i)
        if (!(f[i] >= 0.0))
            throw NegativeFunctionError("entry " + std::to_string(i) + " is negative or NaN");
}

// exp with exp(−∞) = 0 exactly; Eigen's vectorized exp returns a denormal there.
Eigen::VectorXd exp_or_zero(const Eigen::VectorXd& g) {
    return (g.array() == -kInf).select(0.0, g.array().exp()).matrix();
}

// φ(h) = h e^h − e^h + 1, so that Ent f = m Σ π φ(log(f / m)). Each term is
// nonnegative and O(h²), which keeps nearly constant functions accurate.
double entropy_kernel(double h) {
    if (h == -kInf) return 1.0;
    if (std::abs(h) < 0.1) {
        double sum = 0.0, power = 0.5 * h * h;  // h^n / n!
        for (int n = 2; n < 14; ++n) {
            sum += (n - 1) * power;
            power *= h / (n + 1);
        }
        return sum;
    }
    return h * std::exp(h) - std::expm1(h);
}

// Σ π φ(h), where h = log(f / m) on the support of f.
double kernel_sum(const Eigen::VectorXd& pi, const Eigen::VectorXd& f, const Eigen::VectorXd& h) {
    double out = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) out += pi[i] * (f[i] > 0.0 ? entropy_kernel(h[i]) : 1.0);
    return out;
}

double normalized_entropy(const Eigen::VectorXd& pi, const Eigen::VectorXd& f, double m) {
    const Eigen::VectorXd h = (f.array() > 0.0).select((f.array() / m).log(), 0.0).matrix();
    return kernel_sum(pi, f, h);
}

}  // namespace

double relative_entropy(const Eigen::VectorXd& pi, const Eigen::VectorXd& f) {
    if (pi.size() != f.size())
        throw DimensionError("function has " + std::to_string(f.size()) + " entries, expected " +
                             std::to_string(pi.size()));
    require_nonnegative(f);
    if (f.size() == 0 || f.maxCoeff() == f.minCoeff()) return 0.0;
    const double total = pi.sum();
    const double m = pi.dot(f) / total;
    return m * normalized_entropy(pi / total, f, m);
}

double relative_entropy(const LevelDistribution& dist, const Eigen::VectorXd& f) {
    return relative_entropy(dist.probabilities, f);
}

double kl_divergence(const LevelDistribution& tau, const LevelDistribution& pi) {
    if (tau.size() != pi.size()) throw DimensionError("distributions live on different spaces");
    double out = 0.0;
    for (Eigen::Index i = 0; i < tau.probabilities.size(); ++i) {
        const double t = tau.probabilities[i];
        const double p = pi.probabilities[i];
        if (t < 0.0 || p < 0.0) throw NegativeFunctionError("negative probability");
        if (t == 0.0) continue;
        if (p == 0.0) throw SupportError("tau charges state " + std::to_string(i) + " where pi is 0");
        out += t * std::log(t / p);
    }
    return std::max(out, 0.0);
}

double entropy_dirichlet(const WalkOperator& P, const Eigen::VectorXd& f) {
    if (!P.is_square()) throw DimensionError("Dirichlet form needs a square operator");
    if (static_cast<std::size_t>(f.size()) != P.size())
        throw DimensionError("function does not match the operator");
    require_nonnegative(f);
    if (f.minCoeff() > 0.0) return dirichlet_form(P, f, f.array().log().matrix());

    double total = 0.0;
    for (Eigen::Index x = 0; x < f.size(); ++x)
        for (Eigen::Index y = 0; y < f.size(); ++y) {
            const double flow = P.stationary[x] * P.matrix(x, y);
            if (flow == 0.0 || f[x] == f[y]) continue;
            if (f[x] == 0.0 || f[y] == 0.0) return kInf;
            total += flow * (f[x] - f[y]) * (std::log(f[x]) - std::log(f[y]));
        }
    return 0.5 * total;
}

// ---------------------------------------------------------------------------
// Objectives
// ---------------------------------------------------------------------------

MlsiObjective::MlsiObjective(const WalkOperator& P) {
    if (!P.is_square()) throw DimensionError("mLSI needs a square operator");
    pi_ = P.stationary / P.stationary.sum();
    const auto n = P.matrix.rows();
    laplacian_ = pi_.asDiagonal() * (Eigen::MatrixXd::Identity(n, n) - P.matrix);
    for (Eigen::Index x = 0; x < n; ++x)
        for (Eigen::Index y = x + 1; y < n; ++y)
            if (-laplacian_(x, y) > 0.0) edges_.push_back({x, y, -laplacian_(x, y)});
}

double MlsiObjective::evaluate(const Eigen::VectorXd& g, Eigen::VectorXd* gradient) const {
    // A zero of f next to a positive entry makes E(f, log f) infinite.
    if (!g.allFinite()) return kInf;
    const Eigen::VectorXd f = g.array().exp().matrix();
    const double m = pi_.dot(f);
    const double log_m = std::log(m);
    const Eigen::VectorXd centered = g.array() - log_m;
    double ent = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) ent += pi_[i] * entropy_kernel(centered[i]);
    ent *= m;
    if (!(ent > 1e-300) || !std::isfinite(ent)) return kInf;
    // Edge sum Σ Q(x, y)(f(x) − f(y))(g(x) − g(y)) with f(x) − f(y) = f(y) expm1(g(x) − g(y)).
    double num = 0.0;
    for (const Edge& e : edges_) {
        const double diff = g[e.x] - g[e.y];
        num += e.flow * f[e.y] * std::expm1(diff) * diff;
    }
    const double ratio = num / ent;
    if (gradient) {
        const Eigen::VectorXd lg = laplacian_ * g;
        const Eigen::VectorXd grad_num = f.cwiseProduct(lg) + laplacian_.transpose() * f;
        const Eigen::VectorXd grad_ent = (pi_.array() * f.array() * centered.array()).matrix();
        *gradient = (grad_num - ratio * grad_ent) / ent;
    }
    return ratio;
}

ProjectionContractionObjective::ProjectionContractionObjective(Eigen::MatrixXd up,
                                                               Eigen::VectorXd pi_top,
                                                               Eigen::VectorXd pi_bottom)
    : up_(std::move(up)), pi_top_(std::move(pi_top)), pi_bottom_(std::move(pi_bottom)) {
    if (up_.cols() != pi_top_.size() || up_.rows() != pi_bottom_.size())
        throw DimensionError("projection operator does not match the two distributions");
    pi_top_ /= pi_top_.sum();
    pi_bottom_ /= pi_bottom_.sum();
}

double ProjectionContractionObjective::evaluate(const Eigen::VectorXd& g,
                                                Eigen::VectorXd* gradient) const {
    // Entries of g may be −∞ (f = 0); their terms vanish as 0 log 0 = 0.
    const Eigen::VectorXd f = exp_or_zero(g);
    const double m_top = pi_top_.dot(f);
    if (!(m_top > 0.0) || !std::isfinite(m_top)) return kInf;
    const Eigen::VectorXd centered_top =
        (f.array() > 0.0).select(g.array() - std::log(m_top), 0.0).matrix();
    const double ent_top = m_top * kernel_sum(pi_top_, f, centered_top);

    const Eigen::VectorXd h = up_ * f;
    const double m_bottom = pi_bottom_.dot(h);
    const Eigen::VectorXd centered_bottom =
        (h.array() > 0.0).select(h.array().log() - std::log(m_bottom), 0.0).matrix();
    const double ent_bottom = m_bottom * kernel_sum(pi_bottom_, h, centered_bottom);
    if (!(ent_bottom > 1e-300) || !std::isfinite(ent_top) || !std::isfinite(ent_bottom)) return kInf;

    const double ratio = ent_top / ent_bottom;
    if (gradient) {
        const Eigen::VectorXd grad_top = (pi_top_.array() * f.array() * centered_top.array()).matrix();
        const Eigen::VectorXd grad_bottom =
            f.cwiseProduct(up_.transpose() * pi_bottom_.cwiseProduct(centered_bottom));
        *gradient = (grad_top - ratio * grad_bottom) / ent_bottom;
    }
    return ratio;
}

// ---------------------------------------------------------------------------
// Minimizer
// ---------------------------------------------------------------------------

namespace {

constexpr double kSpikeHeight = 30.0;
// Cutoffs, as log of the ratio to the largest entry, tried when snapping
// small coordinates to zero.
constexpr double kSnapLogRatios[] = {-6.0, -10.0, -14.0, -18.0};

struct RestartResult {
    double value = kInf;
    Eigen::VectorXd g;
    bool converged = false;
};

void pin_mean(Eigen::VectorXd& g, const Eigen::VectorXd& pi) {
    // Shift so that E_π exp(g) = 1; uses a max-shift for overflow safety.
    const double top = g.maxCoeff();
    const double m = pi.dot(exp_or_zero((g.array() - top).matrix()));
    g.array() -= top + std::log(m);
}

// Gradient descent from g in place. Coordinates at −∞ stay there.
bool descend(const RatioObjective& objective, const OptimizerOptions& options, Eigen::VectorXd& g,
             double& value) {
    const Eigen::VectorXd& pi = objective.reference_measure();
    const auto n = g.size();
    Eigen::VectorXd grad(n);
    value = objective.evaluate(g, &grad);
    if (!std::isfinite(value)) return false;

    const auto live = g.array().isFinite();
    double step = 0.1 / std::max(grad.norm(), 1e-12);
    Eigen::VectorXd trial(n);
    Eigen::VectorXd trial_grad(n);
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        const double grad_norm2 = grad.squaredNorm();
        if (std::sqrt(grad_norm2) < options.gradient_tolerance) return true;
        bool accepted = false;
        double trial_value = value;
        for (int backtrack = 0; backtrack < 60; ++backtrack) {
            trial = g - step * grad;
            pin_mean(trial, pi);
            trial_value = objective.evaluate(trial, &trial_grad);
            if (std::isfinite(trial_value) && trial_value <= value - 1e-4 * step * grad_norm2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        // No descent at any representable step: stationary to working precision.
        if (!accepted) return true;
        Eigen::VectorXd s = live.select(trial - g, 0.0).matrix();
        const double shift = s.sum() / static_cast<double>(std::max<Eigen::Index>(1, live.count()));
        s = live.select(s.array() - shift, 0.0).matrix();
        const Eigen::VectorXd y = trial_grad - grad;
        const double sy = s.dot(y);
        step = sy > 0.0 ? s.squaredNorm() / sy : 2.0 * step;
        step = std::clamp(step, 1e-12, 1e8);
        g.swap(trial);
        grad.swap(trial_grad);
        value = trial_value;
    }
    return false;
}

RestartResult run_restart(const RatioObjective& objective, const OptimizerOptions& options,
                          std::size_t restart) {
    const Eigen::VectorXd& pi = objective.reference_measure();
    const auto n = static_cast<Eigen::Index>(objective.dimension());
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                      static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    static constexpr double kScales[] = {0.5, 1.0, 2.0, 4.0};
    const double scale = kScales[restart % 4];

    RestartResult out;
    Eigen::VectorXd g(n);
    if (restart % 8 == 7) {
        // Concentrated start near the indicator of a random subset. Ratio
        // infima are often approached at the boundary, which the interior
        // descent reaches only slowly.
        for (Eigen::Index i = 0; i < n; ++i) g[i] = 0.1 * normal(rng);
        std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
        const Eigen::Index count = (restart / 8) % 2 == 0 ? 1 : pick(rng) % std::max<Eigen::Index>(1, n / 2) + 1;
        for (Eigen::Index c = 0; c < count; ++c) g[pick(rng)] += kSpikeHeight;
    } else {
        for (Eigen::Index i = 0; i < n; ++i) g[i] = scale * normal(rng);
    }
    pin_mean(g, pi);

    double value = kInf;
    bool converged = descend(objective, options, g, value);
    if (!std::isfinite(value)) return out;

    // Coordinates drifting to −∞ mean the infimum sits on a face of the
    // orthant. Set them to exactly zero and keep descending on the rest;
    // the ratio is continuous there, so this is still an upper estimate.
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    for (int round = 0; round < 4; ++round) {
        const double top = g.maxCoeff();
        const auto before = (g.array() == kNegInf).count();
        Eigen::VectorXd best_snap;
        double best_snap_value = kInf;
        for (double cut : kSnapLogRatios) {
            Eigen::VectorXd snapped = (g.array() - top < cut).select(kNegInf, g.array()).matrix();
            const auto zeros = (snapped.array() == kNegInf).count();
            if (zeros == before || zeros == n) continue;
            pin_mean(snapped, pi);
            const double v = objective.evaluate(snapped, nullptr);
            if (v < best_snap_value) {
                best_snap_value = v;
                best_snap = std::move(snapped);
            }
        }
        if (!(best_snap_value <= value)) break;
        double snapped_value = kInf;
        const bool snapped_converged = descend(objective, options, best_snap, snapped_value);
        if (!(snapped_value <= value)) break;
        g.swap(best_snap);
        value = snapped_value;
        converged = snapped_converged;
    }
    out.value = value;
    out.g = std::move(g);
    out.converged = converged;
    return out;
}

}  // namespace

EntropyEstimate minimize_ratio(const RatioObjective& objective, const OptimizerOptions& options) {
    if (objective.dimension() < 2)
        throw DegenerateStateSpaceError("ratio minimization needs at least two states");
    if (options.restarts == 0) throw InvalidParameterError("at least one restart is required");

    std::vector<RestartResult> results(options.restarts);
    const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, options.restarts);
    if (jobs == 1) {
        for (std::size_t r = 0; r < options.restarts; ++r) results[r] = run_restart(objective, options, r);
    } else {
        std::vector<std::thread> workers;
        for (std::size_t j = 0; j < jobs; ++j)
            workers.emplace_back([&, j] {
                for (std::size_t r = j; r < options.restarts; r += jobs)
                    results[r] = run_restart(objective, options, r);
            });
        for (auto& w : workers) w.join();
    }

    std::size_t best = options.restarts;
    for (std::size_t r = 0; r < options.restarts; ++r)
        if (std::isfinite(results[r].value) && (best == options.restarts || results[r].value < results[best].value))
            best = r;
    if (best == options.restarts)
        throw OptimizationFailedError("all " + std::to_string(options.restarts) +
                                      " restarts diverged");

    EntropyEstimate out;
    out.value = results[best].value;
    out.minimizer.values = exp_or_zero(results[best].g);
    out.restarts_used = options.restarts;
    out.converged = results[best].converged;
    return out;
}

EntropyEstimate estimate_mlsi(const WalkOperator& P, const OptimizerOptions& options) {
    if (!P.is_square()) throw DimensionError("mLSI needs a square operator");
    if (P.size() < 2) throw DegenerateStateSpaceError("mLSI needs at least two states");
    EntropyEstimate out = minimize_ratio(MlsiObjective(P), options);
    out.minimizer.level = P.source_level;
    return out;
}

EntropyEstimate estimate_entropy_contraction(const Link& lk, const OptimizerOptions& options) {
    const PureSimplicialComplex& c = lk.complex;
    if (c.dimension() < 2)
        throw LevelOutOfRangeError("entropy contraction needs a link of dimension >= 2");
    if (c.level_size(2) < 2) {
        EntropyEstimate out;
        out.value = kInf;
        out.unbounded = true;
        out.minimizer.level = 2;
        out.minimizer.values = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(c.level_size(2)));
        return out;
    }
    ProjectionContractionObjective objective(up_step(c, 1).matrix, level_distribution(c, 2).probabilities,
                                             level_distribution(c, 1).probabilities);
    EntropyEstimate out = minimize_ratio(objective, options);
    out.minimizer.level = 2;
    return out;
}

EntropyEstimate estimate_global_contraction(const PureSimplicialComplex& complex, std::size_t k,
                                            const OptimizerOptions& options) {
    if (k < 1 || k > complex.dimension())
        throw LevelOutOfRangeError("global contraction needs 1 <= k <= d");
    ProjectionContractionObjective objective(up_step(complex, k - 1).matrix,
                                             level_distribution(complex, k).probabilities,
                                             level_distribution(complex, k - 1).probabilities);
    EntropyEstimate out = minimize_ratio(objective, options);
    out.minimizer.level = k;
    return out;
}

// ---------------------------------------------------------------------------

double check_entropy_decomposition(const OperatorSet& ops, const std::vector<Fiber>& fibers,
                                   std::size_t k, const LevelFunction& f) {
    if (k < 2 || k > ops.complex().dimension())
        throw LevelOutOfRangeError("entropy decomposition needs 2 <= k <= d");
    if (f.level != k) throw DimensionError("function lives on the wrong level");
    require_nonnegative(f.values);
    const auto& pi_base = ops.distribution(k - 2).probabilities;
    const double lhs = relative_entropy(ops.distribution(k), f.values);

    double local = 0.0;
    Eigen::VectorXd restricted;
    for (const Fiber& fiber : fibers) {
        restricted.resize(static_cast<Eigen::Index>(fiber.members.size()));
        for (std::size_t j = 0; j < fiber.members.size(); ++j)
            restricted[static_cast<Eigen::Index>(j)] = f.values[static_cast<Eigen::Index>(fiber.members[j])];
        local += pi_base[static_cast<Eigen::Index>(fiber.base)] *
                 relative_entropy(fiber.distribution, restricted);
    }
    const double rhs = local + relative_entropy(pi_base, project_down(ops, f, k - 2).values);
    return relative_residual(lhs, rhs);
}

double check_entropy_decomposition(const PureSimplicialComplex& complex, std::size_t k,
                                   const LevelFunction& f) {
    if (k < 2 || k > complex.dimension())
        throw LevelOutOfRangeError("entropy decomposition needs 2 <= k <= d");
    const OperatorSet ops(complex);
    return check_entropy_decomposition(ops, fibers(complex, k - 2, 2), k, f);
}

double entropy_inequality_margin(const OperatorSet& ops, const LevelFunction& f) {
    const std::size_t k = f.level;
    const double lhs = entropy_dirichlet(ops.down_up(k), f.values);
    const double rhs = relative_entropy(ops.distribution(k), f.values) -
                       relative_entropy(ops.distribution(k - 1), project_down(ops, f, k - 1).values);
    return lhs - rhs;
}

double entropy_inequality_up_margin(const OperatorSet& ops, const LevelFunction& f) {
    const std::size_t k = f.level;
    const Eigen::VectorXd g = project_down(ops, f, k - 1).values;
    const double lhs = entropy_dirichlet(ops.up_down(k - 1), g);
    const double rhs = relative_entropy(ops.distribution(k - 1), g) -
                       relative_entropy(ops.distribution(k), ops.down(k).matrix * g);
    return lhs - rhs;
}

// ---------------------------------------------------------------------------

std::vector<LevelFactorEstimate> estimate_level_factors(const PureSimplicialComplex& complex,
                                                        std::size_t max_level,
                                                        const OptimizerOptions& options) {
    if (max_level + 2 > complex.dimension())
        throw LevelOutOfRangeError("local entropy factors need level <= d-2");
    std::vector<LevelFactorEstimate> out;
    for (std::size_t level = 0; level <= max_level; ++level) {
        LevelFactorEstimate est;
        est.level = level;
        est.value = kInf;
        for (const Face& face : complex.faces(level)) {
            const EntropyEstimate local = estimate_entropy_contraction(link(complex, face), options);
            if (local.unbounded) {
                est.unbounded_faces.push_back(face);
                continue;
            }
            if (local.value < est.value) {
                est.value = local.value;
                est.worst_face = face;
            }
        }
        out.push_back(std::move(est));
    }
    return out;
}

MainEntReport verify_main_ent(const PureSimplicialComplex& complex, std::size_t k,
                              const OptimizerOptions& options,
                              const std::vector<LevelFactorEstimate>* precomputed) {
    if (k < 2 || k > complex.dimension())
        throw LevelOutOfRangeError("main entropy check needs 2 <= k <= d");
    MainEntReport out;
    out.k = k;
    if (precomputed && precomputed->size() + 1 >= k) {
        out.local.assign(precomputed->begin(), precomputed->begin() + static_cast<std::ptrdiff_t>(k - 1));
    } else {
        out.local = estimate_level_factors(complex, k - 2, options);
    }

    ContractionFactors factors;
    for (const LevelFactorEstimate& est : out.local) {
        if (!std::isfinite(est.value)) out.skipped = true;
        // The true factor is at least 1; clamp rounding below it.
        factors.values.push_back(std::max(est.value, 1.0));
    }
    if (out.skipped) return out;

    out.v_hat = solve_recursion(factors).v.back();
    out.global_estimate = estimate_global_contraction(complex, k, options).value;
    out.margin = out.global_estimate - out.v_hat;
    out.mlsi_estimate = estimate_mlsi(down_up(complex, k), options).value;
    out.mlsi_bound = 1.0 - 1.0 / out.v_hat;
    out.mlsi_margin = out.mlsi_estimate - out.mlsi_bound;
    return out;
}

}  // namespace hdx
