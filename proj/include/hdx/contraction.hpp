#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hdx/spectral.hpp"

namespace hdx {

/// Per-level contraction factors s_0..s_{d-2}, each >= 1.
struct ContractionFactors {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

/// State of the v_k recursion and everything derived from it. Index j of
/// `our_bounds` / `al_bounds` holds the bound for k = j + 2.
struct ContractionSolution {
    std::vector<double> v;             // recursion v_k = s_k − (s_k − 1)/v_{k−1}, v_0 = s_0
    std::vector<double> x;             // x_k = v_k / (v_k − 1)
    std::vector<double> x_recurrence;  // x_k = x_{k−1}/(s_k − 1) + 1, x_{−1} = 1
    /// products[k][i] = S_i^k = Π_{j=i}^{k} 1/(s_j − 1), for i <= k.
    std::vector<std::vector<double>> products;
    std::vector<double> v_closed_form;  // 1 + 1/Σ_i S_i^k; empty when singular
    bool singular_closed_form = false;  // some s_k == 1
    std::vector<double> our_bounds;     // γ_k = 1 / v_{k−2}
    std::vector<double> al_bounds;      // only filled by solve_profile
};

/// s_k = 2 / (1 + a_k). Throws InvalidProfileError if some a_k <= −1.
ContractionFactors factors_from_profile(const SpectralProfile& profile);

/// Throws InvalidParameterError if some s_k < 1 or the input is empty.
ContractionSolution solve_recursion(const ContractionFactors& factors);
/// solve_recursion on factors_from_profile, with al_bounds filled in.
ContractionSolution solve_profile(const SpectralProfile& profile);

/// γ_k = 1 / v_{k−2}, for 2 <= k <= d = factors.size() + 1.
double our_bound(const ContractionFactors& factors, std::size_t k);
/// γ_{k,AL} = 1 − (1/k) Π_{i=0}^{k−2} (1 − a_i), for 2 <= k <= d.
double al_bound(const SpectralProfile& profile, std::size_t k);
/// 1 − (1/k)(1 − (d−1)γ)/(1 − (d−k)γ), for 0 <= γ <= 1/(d−1), 2 <= k <= d.
double trickling_profile_bound(double gamma, std::size_t d, std::size_t k);

struct Admissibility {
    bool admissible = true;
    std::optional<std::size_t> first_violation;
};

/// a_i < 1 for all i and a_{i−1} <= a_i / (1 − a_i) (+1e-12) for i >= 1.
Admissibility is_admissible(const SpectralProfile& profile);

/// a_k (k+1) + Π_{i=0}^{k} (1 − a_i) − 1, for 1 <= k <= d−2.
double check_profile_property(const SpectralProfile& profile, std::size_t k);

struct BoundComparisonRow {
    std::size_t k = 0;
    double ours = 0.0;
    double al = 0.0;
    double gap = 0.0;  // ours − al
    bool holds = true;
};

/// One row per 2 <= k <= d. Throws AdmissibilityError on inadmissible input.
std::vector<BoundComparisonRow> compare_bounds(const SpectralProfile& profile,
                                               double tolerance = 1e-12);

/// Draws a_{d−2} ~ U(0, 1−δ) and then, descending,
/// a_{i−1} ~ U[0, min(a_i/(1−a_i), 1−δ)].
SpectralProfile sample_admissible_profile(std::size_t d, std::mt19937_64& rng, double delta = 1e-3);

}  // namespace hdx
