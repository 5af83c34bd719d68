#include "hdx/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hdx/errors.hpp"

namespace hdx {

ContractionFactors factors_from_profile(const SpectralProfile& profile) {
    ContractionFactors out;
    out.values.reserve(profile.size());
    for (std::size_t k = 0; k < profile.size(); ++k) {
        if (!(profile[k] > -1.0))
            throw InvalidProfileError("a_" + std::to_string(k) + " = " + std::to_string(profile[k]) +
                                      " is not above -1");
        out.values.push_back(2.0 / (1.0 + profile[k]));
    }
    return out;
}

ContractionSolution solve_recursion(const ContractionFactors& factors) {
    if (factors.size() == 0) throw InvalidParameterError("no contraction factors given");
    for (std::size_t k = 0; k < factors.size(); ++k)
        if (!(factors[k] >= 1.0))
            throw InvalidParameterError("s_" + std::to_string(k) + " = " +
                                        std::to_string(factors[k]) + " is below 1");

    ContractionSolution out;
    const std::size_t m = factors.size();
    // Track u_k = v_k − 1, which obeys u_k = (s_k − 1) u_{k−1} / (1 + u_{k−1});
    // forming v_k first and subtracting 1 loses digits when s is close to 1.
    double u = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double s = factors[k];
        u = k == 0 ? s - 1.0 : (s - 1.0) * u / (1.0 + u);
        out.v.push_back(1.0 + u);
        out.x.push_back(u > 0.0 ? (1.0 + u) / u : std::numeric_limits<double>::infinity());
        out.our_bounds.push_back(1.0 / out.v.back());
        if (s == 1.0) out.singular_closed_form = true;
    }
    if (out.singular_closed_form) return out;

    double x_prev = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
        x_prev = x_prev / (factors[k] - 1.0) + 1.0;
        out.x_recurrence.push_back(x_prev);

        std::vector<double> row(k + 1);
        double product = 1.0;
        for (std::size_t i = k + 1; i-- > 0;) {
            product /= (factors[i] - 1.0);
            row[i] = product;
        }
        double sum = 0.0;
        for (double p : row) sum += p;
        out.products.push_back(std::move(row));
        out.v_closed_form.push_back(1.0 + 1.0 / sum);
    }
    return out;
}

ContractionSolution solve_profile(const SpectralProfile& profile) {
    ContractionSolution out = solve_recursion(factors_from_profile(profile));
    for (std::size_t k = 2; k <= profile.dimension(); ++k) out.al_bounds.push_back(al_bound(profile, k));
    return out;
}

double our_bound(const ContractionFactors& factors, std::size_t k) {
    const std::size_t d = factors.size() + 1;
    if (k < 2 || k > d)
        throw LevelOutOfRangeError("bound needs 2 <= k <= " + std::to_string(d) + ", got " +
                                   std::to_string(k));
    ContractionFactors prefix{{factors.values.begin(), factors.values.begin() + static_cast<std::ptrdiff_t>(k - 1)}};
    return solve_recursion(prefix).our_bounds.back();
}

double al_bound(const SpectralProfile& profile, std::size_t k) {
    const std::size_t d = profile.dimension();
    if (k < 2 || k > d)
        throw LevelOutOfRangeError("bound needs 2 <= k <= " + std::to_string(d) + ", got " +
                                   std::to_string(k));
    double product = 1.0;
    for (std::size_t i = 0; i + 2 <= k; ++i) product *= 1.0 - profile[i];
    return 1.0 - product / static_cast<double>(k);
}

double trickling_profile_bound(double gamma, std::size_t d, std::size_t k) {
    if (d < 2) throw LevelOutOfRangeError("needs d >= 2");
    if (k < 2 || k > d) throw LevelOutOfRangeError("bound needs 2 <= k <= d");
    const double limit = 1.0 / static_cast<double>(d - 1);
    if (!(gamma >= 0.0) || gamma > limit)
        throw PreconditionUnmetError("gamma must lie in [0, 1/(d-1)]");
    const double dd = static_cast<double>(d);
    const double kk = static_cast<double>(k);
    return 1.0 - (1.0 / kk) * ((1.0 - (dd - 1.0) * gamma) / (1.0 - (dd - kk) * gamma));
}

Admissibility is_admissible(const SpectralProfile& profile) {
    constexpr double kSlack = 1e-12;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (!(profile[i] < 1.0)) return {false, i};
        if (i >= 1 && profile[i - 1] > profile[i] / (1.0 - profile[i]) + kSlack) return {false, i};
    }
    return {true, std::nullopt};
}

double check_profile_property(const SpectralProfile& profile, std::size_t k) {
    if (k < 1 || k >= profile.size())
        throw LevelOutOfRangeError("profile property needs 1 <= k <= d-2");
    double product = 1.0;
    for (std::size_t i = 0; i <= k; ++i) product *= 1.0 - profile[i];
    return profile[k] * static_cast<double>(k + 1) + product - 1.0;
}

std::vector<BoundComparisonRow> compare_bounds(const SpectralProfile& profile, double tolerance) {
    const Admissibility adm = is_admissible(profile);
    if (!adm.admissible)
        throw AdmissibilityError("profile is not admissible (first violation at index " +
                                 std::to_string(*adm.first_violation) + ")");
    const ContractionSolution solution = solve_profile(profile);
    std::vector<BoundComparisonRow> rows;
    for (std::size_t j = 0; j < solution.our_bounds.size(); ++j) {
        BoundComparisonRow row;
        row.k = j + 2;
        row.ours = solution.our_bounds[j];
        row.al = solution.al_bounds[j];
        row.gap = row.ours - row.al;
        row.holds = row.gap >= -tolerance;
        rows.push_back(row);
    }
    return rows;
}

SpectralProfile sample_admissible_profile(std::size_t d, std::mt19937_64& rng, double delta) {
    if (d < 2) throw LevelOutOfRangeError("profile needs d >= 2");
    std::vector<double> a(d - 1);
    std::uniform_real_distribution<double> top(0.0, 1.0 - delta);
    a.back() = top(rng);
    for (std::size_t i = d - 2; i-- > 0;) {
        const double hi = std::min(a[i + 1] / (1.0 - a[i + 1]), 1.0 - delta);
        a[i] = std::uniform_real_distribution<double>(0.0, hi)(rng);
    }
    return SpectralProfile{std::move(a)};
}

}  // namespace hdx
