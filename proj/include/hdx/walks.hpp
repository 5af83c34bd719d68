#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "hdx/complex.hpp"

namespace hdx {

/// Row-stochastic operator from level `source_level` to `target_level`.
/// States are the faces of each level in the complex's lexicographic order.
/// `stationary` is the level distribution of the source level; for square
/// operators it is the measure the walk is reversible against.
struct WalkOperator {
    std::size_t source_level = 0;
    std::size_t target_level = 0;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd stationary;

    bool is_square() const noexcept { return matrix.rows() == matrix.cols(); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

/// A real function on the faces of one level.
struct LevelFunction {
    std::size_t level = 0;
    Eigen::VectorXd values;
};

/// P^up_k: from S ∈ C(k) add i with probability w(S ∪ i) / w(S).
WalkOperator up_step(const PureSimplicialComplex& complex, std::size_t k);
/// P^down_k: from S ∈ C(k) drop a uniformly random element.
WalkOperator down_step(const PureSimplicialComplex& complex, std::size_t k);
/// RW^down_k = P^down_k P^up_{k-1}, for 1 <= k <= d.
WalkOperator down_up(const PureSimplicialComplex& complex, std::size_t k);
/// RW^up_k = P^up_k P^down_{k+1}, for 0 <= k <= d-1.
WalkOperator up_down(const PureSimplicialComplex& complex, std::size_t k);
/// Non-lazy local walk G_S = 2 RW^up_{S,1} - I on the vertices of the link
/// at S, indexed like link(complex, S).complex.faces(1). Needs |S| <= d-2.
WalkOperator local_walk(const PureSimplicialComplex& complex, const Face& base);

/// Every up/down half step and level distribution of a complex, assembled
/// once. The walk checks evaluate many functions against the same complex.
class OperatorSet {
public:
    explicit OperatorSet(const PureSimplicialComplex& complex);

    const PureSimplicialComplex& complex() const noexcept { return *complex_; }
    const WalkOperator& up(std::size_t k) const;
    const WalkOperator& down(std::size_t k) const;
    const LevelDistribution& distribution(std::size_t k) const;
    const WalkOperator& down_up(std::size_t k) const;
    const WalkOperator& up_down(std::size_t k) const;

private:
    const PureSimplicialComplex* complex_;
    std::vector<WalkOperator> up_;
    std::vector<WalkOperator> down_;
    std::vector<WalkOperator> down_up_;
    std::vector<WalkOperator> up_down_;
    std::vector<LevelDistribution> distributions_;
};

/// f^(i) = P^up_i ... P^up_{k-1} f^(k). Accepts 0 <= i <= k.
LevelFunction project_down(const PureSimplicialComplex& complex, const LevelFunction& f,
                           std::size_t target_level);
LevelFunction project_down(const OperatorSet& ops, const LevelFunction& f, std::size_t target_level);

/// For each S ∈ C(base_level), the level-(base_level + span) faces containing
/// S together with π_{S,span} over them (the link's level-`span` distribution).
struct Fiber {
    std::size_t base = 0;
    std::vector<std::size_t> members;
    Eigen::VectorXd distribution;
};
std::vector<Fiber> fibers(const PureSimplicialComplex& complex, std::size_t base_level,
                          std::size_t span);

double expectation(const Eigen::VectorXd& pi, const Eigen::VectorXd& f);
/// E_P(f, g) = fᵀ diag(π) (I − P) g.
double dirichlet_form(const WalkOperator& P, const Eigen::VectorXd& f, const Eigen::VectorXd& g);
double variance(const LevelDistribution& dist, const Eigen::VectorXd& f);
double variance(const Eigen::VectorXd& pi, const Eigen::VectorXd& f);

/// |LHS − RHS| / max(|LHS|, 1e-30) for
///   Var_{π_k} f = Σ_S π_{k−2}(S) Var_{π_{S,2}} f_S^(2) + Var_{π_{k−2}} f^(k−2).
double check_variance_decomposition(const PureSimplicialComplex& complex, std::size_t k,
                                    const LevelFunction& f);
double check_variance_decomposition(const OperatorSet& ops, const std::vector<Fiber>& fibers,
                                    std::size_t k, const LevelFunction& f);

/// |lhs − rhs| / max(|lhs|, 1e-30).
double relative_residual(double lhs, double rhs);

/// Relative residual of E_{RW^down_k}(f, f) = Var_{π_k} f − Var_{π_{k−1}} f^(k−1).
double var_equiv_residual(const OperatorSet& ops, const LevelFunction& f);
/// Relative residual of E_{RW^up_{k−1}}(g, g) = Var_{π_{k−1}} g − Var_{π_k} P^down_k g
/// with g = f^(k−1).
double var_equiv_up_residual(const OperatorSet& ops, const LevelFunction& f);

// Operator sanity.
double row_stochastic_residual(const WalkOperator& P);
/// max |π(x)P(x,y) − π(y)P(y,x)|; requires a square operator.
double detailed_balance_residual(const WalkOperator& P);
/// max |(πP − π)(y)|.
double stationarity_residual(const WalkOperator& P);

}  // namespace hdx
