#include "hdx/walks.hpp"

#include <algorithm>
#include <cmath>

#include "hdx/errors.hpp"

namespace hdx {

namespace {

Eigen::VectorXd stationary_of(const PureSimplicialComplex& complex, std::size_t k) {
    return level_distribution(complex, k).probabilities;
}

void require_size(const Eigen::VectorXd& v, std::size_t n, const char* what) {
    if (static_cast<std::size_t>(v.size()) != n)
        throw DimensionError(std::string(what) + " has " + std::to_string(v.size()) +
                             " entries, expected " + std::to_string(n));
}

}  // namespace

WalkOperator up_step(const PureSimplicialComplex& complex, std::size_t k) {
    if (k >= complex.dimension())
        throw LevelOutOfRangeError("up step needs 0 <= k <= d-1, got k=" + std::to_string(k));
    WalkOperator op;
    op.source_level = k;
    op.target_level = k + 1;
    op.matrix = Eigen::MatrixXd::Zero(complex.level_size(k), complex.level_size(k + 1));
    op.stationary = stationary_of(complex, k);

    const auto& upper = complex.faces(k + 1);
    const auto& upper_w = complex.weights(k + 1);
    const auto& lower_w = complex.weights(k);
    for (std::size_t t = 0; t < upper.size(); ++t)
        for (Element e : upper[t].elements()) {
            const std::size_t s = complex.index_of(upper[t].without(e));
            op.matrix(s, t) = upper_w[t] / lower_w[s];
        }
    return op;
}

WalkOperator down_step(const PureSimplicialComplex& complex, std::size_t k) {
    if (k == 0 || k > complex.dimension())
        throw LevelOutOfRangeError("down step needs 1 <= k <= d, got k=" + std::to_string(k));
    WalkOperator op;
    op.source_level = k;
    op.target_level = k - 1;
    op.matrix = Eigen::MatrixXd::Zero(complex.level_size(k), complex.level_size(k - 1));
    op.stationary = stationary_of(complex, k);

    const auto& faces = complex.faces(k);
    const double p = 1.0 / static_cast<double>(k);
    for (std::size_t s = 0; s < faces.size(); ++s)
        for (Element e : faces[s].elements()) op.matrix(s, complex.index_of(faces[s].without(e))) = p;
    return op;
}

WalkOperator down_up(const PureSimplicialComplex& complex, std::size_t k) {
    const WalkOperator down = down_step(complex, k);
    const WalkOperator up = up_step(complex, k - 1);
    return WalkOperator{k, k, down.matrix * up.matrix, down.stationary};
}

WalkOperator up_down(const PureSimplicialComplex& complex, std::size_t k) {
    const WalkOperator up = up_step(complex, k);
    const WalkOperator down = down_step(complex, k + 1);
    return WalkOperator{k, k, up.matrix * down.matrix, up.stationary};
}

WalkOperator local_walk(const PureSimplicialComplex& complex, const Face& base) {
    if (base.size() + 2 > complex.dimension())
        throw LevelOutOfRangeError("local walk needs |S| <= d-2, got |S|=" +
                                   std::to_string(base.size()) + " with d=" +
                                   std::to_string(complex.dimension()));
    const Link lk = link(complex, base);
    WalkOperator rw = up_down(lk.complex, 1);
    const auto n = rw.matrix.rows();
    rw.matrix = 2.0 * rw.matrix - Eigen::MatrixXd::Identity(n, n);
    return rw;
}

// ---------------------------------------------------------------------------

OperatorSet::OperatorSet(const PureSimplicialComplex& complex) : complex_(&complex) {
    const std::size_t d = complex.dimension();
    for (std::size_t k = 0; k <= d; ++k) {
        distributions_.push_back(level_distribution(complex, k));
        if (k < d) up_.push_back(up_step(complex, k));
        if (k > 0) down_.push_back(down_step(complex, k));
    }
    for (std::size_t k = 1; k <= d; ++k)
        down_up_.push_back(WalkOperator{k, k, down_[k - 1].matrix * up_[k - 1].matrix,
                                        down_[k - 1].stationary});
    for (std::size_t k = 0; k < d; ++k)
        up_down_.push_back(WalkOperator{k, k, up_[k].matrix * down_[k].matrix, up_[k].stationary});
}

const WalkOperator& OperatorSet::up(std::size_t k) const {
    if (k >= up_.size()) throw LevelOutOfRangeError("up step needs 0 <= k <= d-1");
    return up_[k];
}

const WalkOperator& OperatorSet::down(std::size_t k) const {
    if (k == 0 || k > down_.size()) throw LevelOutOfRangeError("down step needs 1 <= k <= d");
    return down_[k - 1];
}

const LevelDistribution& OperatorSet::distribution(std::size_t k) const {
    if (k >= distributions_.size()) throw LevelOutOfRangeError("level exceeds dimension");
    return distributions_[k];
}

const WalkOperator& OperatorSet::down_up(std::size_t k) const {
    if (k == 0 || k > down_up_.size()) throw LevelOutOfRangeError("down-up walk needs 1 <= k <= d");
    return down_up_[k - 1];
}

const WalkOperator& OperatorSet::up_down(std::size_t k) const {
    if (k >= up_down_.size()) throw LevelOutOfRangeError("up-down walk needs 0 <= k <= d-1");
    return up_down_[k];
}

// ---------------------------------------------------------------------------

LevelFunction project_down(const OperatorSet& ops, const LevelFunction& f, std::size_t target_level) {
    if (target_level > f.level)
        throw InvalidParameterError("cannot project level " + std::to_string(f.level) +
                                    " down to level " + std::to_string(target_level));
    require_size(f.values, ops.complex().level_size(f.level), "level function");
    LevelFunction out = f;
    for (std::size_t j = f.level; j-- > target_level;) {
        out.values = ops.up(j).matrix * out.values;
        out.level = j;
    }
    return out;
}

LevelFunction project_down(const PureSimplicialComplex& complex, const LevelFunction& f,
                           std::size_t target_level) {
    if (target_level > f.level)
        throw InvalidParameterError("cannot project level " + std::to_string(f.level) +
                                    " down to level " + std::to_string(target_level));
    require_size(f.values, complex.level_size(f.level), "level function");
    LevelFunction out = f;
    for (std::size_t j = f.level; j-- > target_level;) {
        out.values = up_step(complex, j).matrix * out.values;
        out.level = j;
    }
    return out;
}

std::vector<Fiber> fibers(const PureSimplicialComplex& complex, std::size_t base_level,
                          std::size_t span) {
    const std::size_t top = base_level + span;
    if (top > complex.dimension())
        throw LevelOutOfRangeError("fiber level " + std::to_string(top) + " exceeds dimension");
    std::vector<Fiber> out(complex.level_size(base_level));
    for (std::size_t s = 0; s < out.size(); ++s) out[s].base = s;

    const auto& faces = complex.faces(top);
    std::vector<std::vector<double>> weights(out.size());
    for (std::size_t i = 0; i < faces.size(); ++i) {
        // Every span-subset removed from faces[i] names one base face.
        const auto elems = faces[i].elements();
        std::vector<bool> drop(elems.size(), false);
        std::fill(drop.end() - static_cast<std::ptrdiff_t>(span), drop.end(), true);
        do {
            std::vector<Element> kept;
            for (std::size_t j = 0; j < elems.size(); ++j)
                if (!drop[j]) kept.push_back(elems[j]);
            const std::size_t s = complex.index_of(Face(std::move(kept)));
            out[s].members.push_back(i);
            weights[s].push_back(complex.weights(top)[i]);
        } while (std::next_permutation(drop.begin(), drop.end()));
    }
    for (std::size_t s = 0; s < out.size(); ++s) {
        // Keep members in lexicographic order of the level-`top` faces, which is
        // also the lexicographic order of the link faces T = I ∖ S.
        std::vector<std::size_t> order(out[s].members.size());
        for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return out[s].members[a] < out[s].members[b]; });
        std::vector<std::size_t> members;
        out[s].distribution.resize(static_cast<Eigen::Index>(order.size()));
        for (std::size_t j = 0; j < order.size(); ++j) {
            members.push_back(out[s].members[order[j]]);
            out[s].distribution[static_cast<Eigen::Index>(j)] = weights[s][order[j]];
        }
        out[s].members = std::move(members);
        out[s].distribution /= out[s].distribution.sum();
    }
    return out;
}

// ---------------------------------------------------------------------------

double expectation(const Eigen::VectorXd& pi, const Eigen::VectorXd& f) {
    require_size(f, static_cast<std::size_t>(pi.size()), "function");
    return pi.dot(f) / pi.sum();
}

double dirichlet_form(const WalkOperator& P, const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
    if (!P.is_square()) throw DimensionError("Dirichlet form needs a square operator");
    require_size(f, P.size(), "f");
    require_size(g, P.size(), "g");
    const Eigen::VectorXd residual = g - P.matrix * g;
    return (P.stationary.array() * f.array() * residual.array()).sum();
}

double variance(const Eigen::VectorXd& pi, const Eigen::VectorXd& f) {
    require_size(f, static_cast<std::size_t>(pi.size()), "function");
    if (f.size() == 0 || f.maxCoeff() == f.minCoeff()) return 0.0;
    const double m = pi.dot(f) / pi.sum();
    return (pi.array() * (f.array() - m).square()).sum() / pi.sum();
}

double variance(const LevelDistribution& dist, const Eigen::VectorXd& f) {
    return variance(dist.probabilities, f);
}

double relative_residual(double lhs, double rhs) {
    return std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-30);
}

double check_variance_decomposition(const OperatorSet& ops, const std::vector<Fiber>& fibers,
                                    std::size_t k, const LevelFunction& f) {
    if (k < 2 || k > ops.complex().dimension())
        throw LevelOutOfRangeError("variance decomposition needs 2 <= k <= d");
    if (f.level != k) throw DimensionError("function lives on the wrong level");
    const auto& pi_base = ops.distribution(k - 2).probabilities;
    const double lhs = variance(ops.distribution(k), f.values);

    double local = 0.0;
    Eigen::VectorXd restricted;
    for (const Fiber& fiber : fibers) {
        restricted.resize(static_cast<Eigen::Index>(fiber.members.size()));
        for (std::size_t j = 0; j < fiber.members.size(); ++j)
            restricted[static_cast<Eigen::Index>(j)] = f.values[static_cast<Eigen::Index>(fiber.members[j])];
        local += pi_base[static_cast<Eigen::Index>(fiber.base)] * variance(fiber.distribution, restricted);
    }
    const double rhs = local + variance(pi_base, project_down(ops, f, k - 2).values);
    return relative_residual(lhs, rhs);
}

double check_variance_decomposition(const PureSimplicialComplex& complex, std::size_t k,
                                    const LevelFunction& f) {
    if (k < 2 || k > complex.dimension())
        throw LevelOutOfRangeError("variance decomposition needs 2 <= k <= d");
    const OperatorSet ops(complex);
    return check_variance_decomposition(ops, fibers(complex, k - 2, 2), k, f);
}

double var_equiv_residual(const OperatorSet& ops, const LevelFunction& f) {
    const std::size_t k = f.level;
    const auto& walk = ops.down_up(k);
    const double lhs = dirichlet_form(walk, f.values, f.values);
    const double rhs = variance(ops.distribution(k), f.values) -
                       variance(ops.distribution(k - 1), project_down(ops, f, k - 1).values);
    return relative_residual(lhs, rhs);
}

double var_equiv_up_residual(const OperatorSet& ops, const LevelFunction& f) {
    const std::size_t k = f.level;
    const auto& walk = ops.up_down(k - 1);
    const Eigen::VectorXd g = project_down(ops, f, k - 1).values;
    const double lhs = dirichlet_form(walk, g, g);
    const double rhs = variance(ops.distribution(k - 1), g) -
                       variance(ops.distribution(k), ops.down(k).matrix * g);
    return relative_residual(lhs, rhs);
}

// ---------------------------------------------------------------------------

double row_stochastic_residual(const WalkOperator& P) {
    if (P.matrix.rows() == 0) return 0.0;
    return (P.matrix.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

double detailed_balance_residual(const WalkOperator& P) {
    if (!P.is_square()) throw DimensionError("detailed balance needs a square operator");
    const Eigen::MatrixXd flow = P.stationary.asDiagonal() * P.matrix;
    if (flow.size() == 0) return 0.0;
    return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

double stationarity_residual(const WalkOperator& P) {
    if (!P.is_square()) throw DimensionError("stationarity needs a square operator");
    if (P.matrix.rows() == 0) return 0.0;
    const Eigen::VectorXd moved = P.matrix.transpose() * P.stationary;
    return (moved - P.stationary).cwiseAbs().maxCoeff();
}

}  // namespace hdx
