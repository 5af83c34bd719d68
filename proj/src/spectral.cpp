#include "hdx/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hdx/errors.hpp"

namespace hdx {

namespace {

constexpr double kReversibilityTolerance = 1e-8;
constexpr double kDisconnectedThreshold = 1.0 - 1e-9;

double off_diagonal_norm(const Eigen::MatrixXd& a) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
}

}  // namespace

SymmetricEigensystem jacobi_eigensolve(Eigen::MatrixXd a, double tolerance, int max_sweeps) {
    if (a.rows() != a.cols()) throw DimensionError("eigensolve needs a square matrix");
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    // Rounding in the rotations leaves an off-diagonal floor proportional to
    // the matrix norm, so the threshold scales with it for large norms.
    const double threshold = tolerance * std::max(1.0, a.norm());

    int sweep = 0;
    for (; sweep < max_sweeps && off_diagonal_norm(a) >= threshold; ++sweep) {
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

    SymmetricEigensystem out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out.values[j] = a(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(j)]);
        out.vectors.col(j) = v.col(order[static_cast<std::size_t>(j)]);
    }
    out.sweeps = sweep;
    return out;
}

WalkSpectrum walk_spectrum(const WalkOperator& P) {
    if (!P.is_square()) throw DimensionError("spectrum needs a square operator");
    if (P.size() < 2)
        throw DegenerateStateSpaceError("second eigenvalue needs at least two states");
    if (P.stationary.size() != P.matrix.rows())
        throw DimensionError("stationary distribution does not match the operator");
    if (P.stationary.minCoeff() <= 0.0)
        throw DegenerateStateSpaceError("stationary distribution has a zero entry");
    const double balance = detailed_balance_residual(P);
    if (balance > kReversibilityTolerance)
        throw NotReversibleError("detailed-balance residual " + std::to_string(balance) +
                                 " exceeds 1e-8");

    const Eigen::VectorXd root = P.stationary.cwiseSqrt();
    const Eigen::VectorXd inv_root = root.cwiseInverse();
    Eigen::MatrixXd sym = root.asDiagonal() * P.matrix * inv_root.asDiagonal();
    sym = 0.5 * (sym + sym.transpose()).eval();

    SymmetricEigensystem eig = jacobi_eigensolve(std::move(sym));
    WalkSpectrum out;
    out.eigenvalues = std::move(eig.values);
    // Columns of eig.vectors are Euclidean-orthonormal; after D^{-1/2} they are
    // orthonormal in ⟨f, g⟩_π = Σ π f g (with π summing to 1).
    out.right_eigenvectors = inv_root.asDiagonal() * eig.vectors * std::sqrt(P.stationary.sum());
    return out;
}

double second_eigenvalue(const WalkOperator& P) { return walk_spectrum(P).eigenvalues[1]; }

// ---------------------------------------------------------------------------

ProfileMeasurement measure_spectral_profile(const PureSimplicialComplex& complex) {
    const std::size_t d = complex.dimension();
    if (d < 2) throw LevelOutOfRangeError("spectral profile needs d >= 2");
    ProfileMeasurement out;
    out.levels.resize(d - 1);
    for (std::size_t k = 0; k + 2 <= d; ++k) {
        double worst = -std::numeric_limits<double>::infinity();
        Face worst_face;
        for (const Face& face : complex.faces(k)) {
            double lambda2 = 0.0;
            try {
                lambda2 = second_eigenvalue(local_walk(complex, face));
            } catch (const DegenerateStateSpaceError&) {
                out.degenerate.push_back(face);
                continue;
            }
            out.levels[k].push_back({face, lambda2});
            if (lambda2 > worst) {
                worst = lambda2;
                worst_face = face;
            }
        }
        out.profile.values.push_back(worst);
        out.argmax.push_back(worst_face);
    }
    return out;
}

bool TricklingDownResult::holds() const noexcept {
    return std::all_of(rows.begin(), rows.end(), [](const TricklingRow& r) { return r.holds; });
}

TricklingDownResult trickling_down_check(const PureSimplicialComplex& complex, std::size_t k,
                                         double tolerance) {
    const std::size_t d = complex.dimension();
    if (k < 1 || k + 2 > d)
        throw LevelOutOfRangeError("trickling-down check needs 1 <= k <= d-2, got k=" +
                                   std::to_string(k) + " with d=" + std::to_string(d));
    TricklingDownResult out;
    out.level = k;
    out.gamma_raw = -std::numeric_limits<double>::infinity();
    for (const Face& face : complex.faces(k))
        out.gamma_raw = std::max(out.gamma_raw, second_eigenvalue(local_walk(complex, face)));
    if (out.gamma_raw >= kDisconnectedThreshold)
        throw PreconditionUnmetError("a level-" + std::to_string(k) +
                                     " link is disconnected (gamma >= 1); the check is vacuous");
    out.gamma = std::max(out.gamma_raw, 0.0);
    out.bound = out.gamma / (1.0 - out.gamma);
    out.bound_raw = out.gamma_raw / (1.0 - out.gamma_raw);

    for (const Face& face : complex.faces(k - 1)) {
        TricklingRow row;
        row.face = face;
        row.lambda2 = second_eigenvalue(local_walk(complex, face));
        if (row.lambda2 >= kDisconnectedThreshold) {
            row.status = TricklingStatus::Disconnected;
        } else {
            row.holds = row.lambda2 <= out.bound + tolerance;
            row.holds_raw = row.lambda2 <= out.bound_raw + tolerance;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

SpectralProfile trickling_down_propagate(double gamma, std::size_t d) {
    if (d < 2) throw LevelOutOfRangeError("trickling-down profile needs d >= 2");
    const double limit = 1.0 / static_cast<double>(d - 1);
    if (!(gamma >= 0.0) || gamma > limit)
        throw PreconditionUnmetError("gamma must lie in [0, 1/(d-1)] = [0, " +
                                     std::to_string(limit) + "]");
    SpectralProfile out;
    for (std::size_t j = 0; j + 2 <= d; ++j)
        out.values.push_back(gamma / (1.0 - static_cast<double>(d - j - 2) * gamma));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct VertexLink {
    std::size_t vertex = 0;
    Eigen::VectorXd distribution;        // π_{v,1}
    std::vector<std::size_t> embedding;  // link vertex j -> index in C(1)
    WalkOperator walk;                   // G_v (empty when the link has dimension < 2)
};

std::vector<VertexLink> vertex_links(const PureSimplicialComplex& complex, bool with_walks) {
    std::vector<VertexLink> out;
    const auto& vertices = complex.faces(1);
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        const Link lk = link(complex, vertices[v]);
        VertexLink entry;
        entry.vertex = v;
        entry.distribution = level_distribution(lk.complex, 1).probabilities;
        for (const Face& u : lk.complex.faces(1)) entry.embedding.push_back(complex.index_of(u));
        if (with_walks) entry.walk = local_walk(lk.complex, Face{});
        out.push_back(std::move(entry));
    }
    return out;
}

void require_dimension(const PureSimplicialComplex& complex, std::size_t min_d, const char* what) {
    if (complex.dimension() < min_d)
        throw LevelOutOfRangeError(std::string(what) + " needs d >= " + std::to_string(min_d));
}

}  // namespace

TricklingProofResiduals trickling_proof_residuals(const PureSimplicialComplex& complex) {
    require_dimension(complex, 3, "trickling-down proof identities");
    const Eigen::VectorXd pi1 = level_distribution(complex, 1).probabilities;
    const WalkOperator g_root = local_walk(complex, Face{});
    const auto links = vertex_links(complex, true);
    const auto n = pi1.size();

    Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd weighted_walks = Eigen::MatrixXd::Zero(n, n);
    TricklingProofResiduals out;
    for (const VertexLink& lk : links) {
        const double mass = pi1[static_cast<Eigen::Index>(lk.vertex)];
        for (std::size_t a = 0; a < lk.embedding.size(); ++a) {
            const auto ia = static_cast<Eigen::Index>(lk.embedding[a]);
            const double pa = lk.distribution[static_cast<Eigen::Index>(a)];
            diagonal[ia] += mass * pa;
            for (std::size_t b = 0; b < lk.embedding.size(); ++b)
                weighted_walks(ia, static_cast<Eigen::Index>(lk.embedding[b])) +=
                    mass * pa * lk.walk.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        }
        // Row v of G_∅ against π_{v,1} extended by zeros.
        Eigen::VectorXd extended = Eigen::VectorXd::Zero(n);
        for (std::size_t a = 0; a < lk.embedding.size(); ++a)
            extended[static_cast<Eigen::Index>(lk.embedding[a])] = lk.distribution[static_cast<Eigen::Index>(a)];
        out.row_identity = std::max(
            out.row_identity,
            (g_root.matrix.row(static_cast<Eigen::Index>(lk.vertex)).transpose() - extended).cwiseAbs().maxCoeff());
    }
    out.diagonal_decomposition = (diagonal - pi1).cwiseAbs().maxCoeff();
    const Eigen::MatrixXd rebuilt = pi1.cwiseInverse().asDiagonal() * weighted_walks;
    out.operator_decomposition = (rebuilt - g_root.matrix).cwiseAbs().maxCoeff();
    return out;
}

double local_dirichlet_decomposition_residual(const PureSimplicialComplex& complex,
                                              const Eigen::VectorXd& f) {
    require_dimension(complex, 3, "local Dirichlet decomposition");
    const Eigen::VectorXd pi1 = level_distribution(complex, 1).probabilities;
    const double lhs = dirichlet_form(local_walk(complex, Face{}), f, f);
    double rhs = 0.0;
    for (const VertexLink& lk : vertex_links(complex, true)) {
        Eigen::VectorXd restricted(static_cast<Eigen::Index>(lk.embedding.size()));
        for (std::size_t a = 0; a < lk.embedding.size(); ++a)
            restricted[static_cast<Eigen::Index>(a)] = f[static_cast<Eigen::Index>(lk.embedding[a])];
        rhs += pi1[static_cast<Eigen::Index>(lk.vertex)] * dirichlet_form(lk.walk, restricted, restricted);
    }
    return relative_residual(lhs, rhs);
}

double eigenvalue_relation_margin(const PureSimplicialComplex& complex) {
    require_dimension(complex, 3, "eigenvalue relation");
    double gamma = -std::numeric_limits<double>::infinity();
    for (const VertexLink& lk : vertex_links(complex, true))
        gamma = std::max(gamma, second_eigenvalue(lk.walk));
    const Eigen::VectorXd spectrum = walk_spectrum(local_walk(complex, Face{})).eigenvalues;
    double margin = std::numeric_limits<double>::infinity();
    for (double lambda : spectrum)
        margin = std::min(margin, (1.0 - lambda) - (1.0 - gamma) * (1.0 - lambda * lambda));
    return margin;
}

}  // namespace hdx
