#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hdx/complex.hpp"
#include "hdx/contraction.hpp"
#include "hdx/walks.hpp"

namespace hdx {

/// Ent_π(f) = E_π(f log f) − E_π f log E_π f, with 0 log 0 = 0.
/// Throws NegativeFunctionError on negative entries.
double relative_entropy(const LevelDistribution& dist, const Eigen::VectorXd& f);
double relative_entropy(const Eigen::VectorXd& pi, const Eigen::VectorXd& f);

/// D(τ‖π) = Σ τ log(τ/π). Throws SupportError if τ charges a π-null state.
double kl_divergence(const LevelDistribution& tau, const LevelDistribution& pi);

/// E_P(f, log f). Positive f uses fᵀ diag(π)(I − P) log f directly; zeros in
/// f go through the symmetric form ½ Σ π(x)P(x,y)(f(x) − f(y))(log f(x) − log f(y)),
/// which is +∞ when an edge joins a zero and a positive value.
double entropy_dirichlet(const WalkOperator& P, const Eigen::VectorXd& f);

/// A scale-invariant ratio of f = exp(g), minimized over g.
class RatioObjective {
public:
    virtual ~RatioObjective() = default;
    virtual std::size_t dimension() const = 0;
    /// Measure used to pin E f = 1 between steps.
    virtual const Eigen::VectorXd& reference_measure() const = 0;
    /// Ratio at f = exp(g); fills `gradient` (with respect to g) when non-null.
    /// Returns +∞ where the denominator vanishes.
    virtual double evaluate(const Eigen::VectorXd& g, Eigen::VectorXd* gradient) const = 0;
};

/// E_P(f, log f) / Ent_π(f).
class MlsiObjective final : public RatioObjective {
public:
    explicit MlsiObjective(const WalkOperator& P);
    std::size_t dimension() const override { return static_cast<std::size_t>(pi_.size()); }
    const Eigen::VectorXd& reference_measure() const override { return pi_; }
    double evaluate(const Eigen::VectorXd& g, Eigen::VectorXd* gradient) const override;

private:
    Eigen::VectorXd pi_;
    Eigen::MatrixXd laplacian_;  // diag(π)(I − P)
    struct Edge { Eigen::Index x, y; double flow; };
    std::vector<Edge> edges_;    // x < y with π(x) P(x, y) > 0
};

/// Ent_{π_top}(f) / Ent_{π_bottom}(U f) for an averaging operator U from the
/// top level to the bottom one.
class ProjectionContractionObjective final : public RatioObjective {
public:
    ProjectionContractionObjective(Eigen::MatrixXd up, Eigen::VectorXd pi_top,
                                   Eigen::VectorXd pi_bottom);
    std::size_t dimension() const override { return static_cast<std::size_t>(pi_top_.size()); }
    const Eigen::VectorXd& reference_measure() const override { return pi_top_; }
    double evaluate(const Eigen::VectorXd& g, Eigen::VectorXd* gradient) const override;

private:
    Eigen::MatrixXd up_;
    Eigen::VectorXd pi_top_;
    Eigen::VectorXd pi_bottom_;
};

struct OptimizerOptions {
    std::size_t restarts = 64;
    std::uint64_t seed = 42;
    std::size_t max_iterations = 5000;
    double gradient_tolerance = 1e-10;
    std::size_t jobs = 1;
};

/// Result of a ratio minimization. `value` is the best ratio found, so it
/// over-estimates the infimum; it is never a certificate.
struct EntropyEstimate {
    double value = 0.0;
    LevelFunction minimizer;
    std::size_t restarts_used = 0;
    bool converged = false;
    bool unbounded = false;  // the ratio is +∞ everywhere (degenerate instance)
    static constexpr const char* estimate_direction = "upper";
};

/// Gradient descent on g with f = exp(g), E_π f renormalized to 1 after each
/// step, Barzilai–Borwein trial steps and Armijo backtracking. Restart r uses
/// its own generator seeded from (seed, r), so the result does not depend on
/// `jobs`. Throws OptimizationFailedError if no restart yields a finite value.
EntropyEstimate minimize_ratio(const RatioObjective& objective, const OptimizerOptions& options);

/// Upper estimate of ρ(P) = inf E_P(f, log f) / Ent_π(f).
EntropyEstimate estimate_mlsi(const WalkOperator& P, const OptimizerOptions& options);

/// Upper estimate of inf Ent_{π_{S,2}}(f) / Ent_{π_{S,1}}(P^up_{S,1} f) over
/// f on the link's level 2. Needs a link of dimension >= 2; a link with a
/// single level-2 face is reported as unbounded.
EntropyEstimate estimate_entropy_contraction(const Link& link, const OptimizerOptions& options);

/// Same ratio between levels k and k−1 of the whole complex.
EntropyEstimate estimate_global_contraction(const PureSimplicialComplex& complex, std::size_t k,
                                            const OptimizerOptions& options);

/// Relative residual of
///   Ent_{π_k} f = Σ_S π_{k−2}(S) Ent_{π_{S,2}} f_S^(2) + Ent_{π_{k−2}} f^(k−2).
double check_entropy_decomposition(const PureSimplicialComplex& complex, std::size_t k,
                                   const LevelFunction& f);
double check_entropy_decomposition(const OperatorSet& ops, const std::vector<Fiber>& fibers,
                                   std::size_t k, const LevelFunction& f);

/// E_{RW^down_k}(f, log f) − (Ent_{π_k} f − Ent_{π_{k−1}} f^(k−1)); k = f.level.
double entropy_inequality_margin(const OperatorSet& ops, const LevelFunction& f);
/// E_{RW^up_{k−1}}(g, log g) − (Ent_{π_{k−1}} g − Ent_{π_k} P^down_k g), g = f^(k−1).
double entropy_inequality_up_margin(const OperatorSet& ops, const LevelFunction& f);

struct LevelFactorEstimate {
    std::size_t level = 0;
    double value = 0.0;       // min over faces of the local estimate
    Face worst_face;
    std::vector<Face> unbounded_faces;
};

struct MainEntReport {
    std::size_t k = 0;
    std::vector<LevelFactorEstimate> local;  // levels 0..k−2
    double v_hat = 0.0;                      // v̂_{k−2} from the local estimates
    double global_estimate = 0.0;            // min ratio Ent_{π_k} / Ent_{π_{k−1}}
    double margin = 0.0;                     // global_estimate − v_hat
    double mlsi_estimate = 0.0;              // estimate of ρ(RW^down_k)
    double mlsi_bound = 0.0;                 // 1 − 1/v_hat
    double mlsi_margin = 0.0;                // mlsi_estimate − mlsi_bound
    bool skipped = false;                    // some level had no bounded link
};

/// Local entropy contraction estimates for levels 0..max_level, worst face
/// per level. Needs max_level <= d−2.
std::vector<LevelFactorEstimate> estimate_level_factors(const PureSimplicialComplex& complex,
                                                        std::size_t max_level,
                                                        const OptimizerOptions& options);

/// Estimates local factors at levels 0..k−2 (worst face per level), solves the
/// recursion for v̂_{k−2}, and estimates the global ratio and ρ(RW^down_k).
/// `precomputed`, when given, must cover at least levels 0..k−2.
MainEntReport verify_main_ent(const PureSimplicialComplex& complex, std::size_t k,
                              const OptimizerOptions& options,
                              const std::vector<LevelFactorEstimate>* precomputed = nullptr);

}  // namespace hdx
