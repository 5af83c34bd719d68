#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hdx/complex.hpp"
#include "hdx/walks.hpp"

namespace hdx {

struct SymmetricEigensystem {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // column j pairs with values[j]
    int sweeps = 0;
};

/// Cyclic Jacobi rotations on a symmetric matrix. Stops once the
/// off-diagonal Frobenius norm drops below `tolerance`.
SymmetricEigensystem jacobi_eigensolve(Eigen::MatrixXd matrix, double tolerance = 1e-13,
                                       int max_sweeps = 200);

/// Spectrum of a reversible walk via D^{1/2} P D^{-1/2}. Right eigenvectors
/// of P are D^{-1/2} times the symmetric ones, so column j is orthonormal
/// under the π-weighted inner product.
struct WalkSpectrum {
    Eigen::VectorXd eigenvalues;       // descending, with multiplicity
    Eigen::MatrixXd right_eigenvectors;
};

/// Throws DimensionError for non-square input, DegenerateStateSpaceError for
/// a single state or a stationary distribution with a zero entry, and
/// NotReversibleError if the detailed-balance residual exceeds 1e-8.
WalkSpectrum walk_spectrum(const WalkOperator& P);

/// Second largest eigenvalue (counted with multiplicity).
double second_eigenvalue(const WalkOperator& P);

/// Worst-case link second eigenvalues a_0..a_{d-2}.
struct SpectralProfile {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    /// Dimension of the complex the profile belongs to.
    std::size_t dimension() const noexcept { return values.size() + 1; }
};

struct FaceEigenvalue {
    Face face;
    double lambda2 = 0.0;
};

struct ProfileMeasurement {
    SpectralProfile profile;
    std::vector<Face> argmax;                          // per level
    std::vector<std::vector<FaceEigenvalue>> levels;   // every non-degenerate face
    std::vector<Face> degenerate;                      // excluded with a warning
};

/// a_k = max over S ∈ C(k) of λ₂(G_S), for 0 <= k <= d-2. Needs d >= 2.
ProfileMeasurement measure_spectral_profile(const PureSimplicialComplex& complex);

enum class TricklingStatus { Checked, Disconnected };

struct TricklingRow {
    Face face;
    double lambda2 = 0.0;
    TricklingStatus status = TricklingStatus::Checked;
    bool holds = true;      // against the clamped bound
    bool holds_raw = true;  // against γ_raw / (1 − γ_raw)
};

struct TricklingDownResult {
    std::size_t level = 0;     // k: the level whose links supply γ
    double gamma_raw = 0.0;    // max λ₂(G_T), T ∈ C(k)
    double gamma = 0.0;        // max(γ_raw, 0), used for the asserted bound
    double bound = 0.0;        // γ / (1 − γ)
    double bound_raw = 0.0;    // γ_raw / (1 − γ_raw)
    std::vector<TricklingRow> rows;  // one per S ∈ C(k − 1)

    bool holds() const noexcept;
};

/// Checks λ₂(G_S) ≤ γ/(1 − γ) + tolerance for every connected S ∈ C(k−1),
/// where γ bounds the level-k links. Needs 1 <= k <= d−2. Throws
/// PreconditionUnmetError if some level-k link is disconnected (γ ≥ 1).
TricklingDownResult trickling_down_check(const PureSimplicialComplex& complex, std::size_t k,
                                         double tolerance = 1e-9);

/// Profile obtained by applying trickling down from a_{d−2} = γ:
/// a_j = γ / (1 − (d − j − 2) γ). Needs 0 <= γ <= 1/(d−1) and d >= 2.
SpectralProfile trickling_down_propagate(double gamma, std::size_t d);

/// Residuals of the operator identities behind the trickling-down argument,
/// evaluated on the link at ∅ (pass link(...).complex to use another face).
struct TricklingProofResiduals {
    double diagonal_decomposition = 0.0;  // D_1 = Σ_v π_1(v) D̄_{v,1}
    double operator_decomposition = 0.0;  // G_∅ = D_1⁻¹ Σ_v π_1(v) D̄_{v,1} Ḡ_v
    double row_identity = 0.0;            // G_∅(v, ·) = π̄_{v,1}
};
TricklingProofResiduals trickling_proof_residuals(const PureSimplicialComplex& complex);

/// Relative residual of E_{G_∅}(f, f) = Σ_v π_1(v) E_{G_v}(f_v, f_v) for f on C(1).
double local_dirichlet_decomposition_residual(const PureSimplicialComplex& complex,
                                              const Eigen::VectorXd& f);

/// min over eigenvalues λ of G_∅ of (1 − λ) − (1 − γ)(1 − λ²), with γ the
/// largest λ₂(G_v) over vertices v. Nonnegative when the argument goes through.
double eigenvalue_relation_margin(const PureSimplicialComplex& complex);

}  // namespace hdx
