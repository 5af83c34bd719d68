#pragma once

// Reference computations for the tests. Each one recomputes a quantity
// straight from its definition, without going through the library routine
// under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hdx/complex.hpp"
#include "hdx/walks.hpp"

namespace oracle {

inline double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

// All k-subsets of `elements`, in lexicographic order of positions.
inline std::vector<std::vector<hdx::Element>> subsets(const std::vector<hdx::Element>& elements,
                                                      std::size_t k) {
    std::vector<std::vector<hdx::Element>> out;
    std::vector<bool> mask(elements.size(), false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
        std::vector<hdx::Element> s;
        for (std::size_t i = 0; i < elements.size(); ++i)
            if (mask[i]) s.push_back(elements[i]);
        out.push_back(std::move(s));
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return out;
}

inline std::vector<hdx::Element> elems(const hdx::Face& f) {
    return {f.elements().begin(), f.elements().end()};
}

// w(S) = Σ_{top T ⊇ S} w(T) · (d − |S|)!: the number of chains from S up to T.
inline double weight_by_chains(const hdx::PureSimplicialComplex& c, const hdx::Face& s) {
    const std::size_t d = c.dimension();
    double fact = 1.0;
    for (std::size_t i = 2; i <= d - s.size(); ++i) fact *= static_cast<double>(i);
    double total = 0.0;
    const auto& tops = c.faces(d);
    for (std::size_t t = 0; t < tops.size(); ++t)
        if (s.is_subset_of(tops[t])) total += c.weights(d)[t];
    return total * fact;
}

// P^up_k(S, S∪{i}) = w(S∪{i}) / w(S), from the definition.
inline Eigen::MatrixXd up_matrix(const hdx::PureSimplicialComplex& c, std::size_t k) {
    const auto& lo = c.faces(k);
    const auto& hi = c.faces(k + 1);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(lo.size()),
                                              static_cast<Eigen::Index>(hi.size()));
    for (std::size_t i = 0; i < lo.size(); ++i)
        for (std::size_t j = 0; j < hi.size(); ++j)
            if (lo[i].is_subset_of(hi[j]))
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    weight_by_chains(c, hi[j]) / weight_by_chains(c, lo[i]);
    return m;
}

// P^down_k(S, S∖{i}) = 1/k.
inline Eigen::MatrixXd down_matrix(const hdx::PureSimplicialComplex& c, std::size_t k) {
    const auto& hi = c.faces(k);
    const auto& lo = c.faces(k - 1);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(hi.size()),
                                              static_cast<Eigen::Index>(lo.size()));
    for (std::size_t i = 0; i < hi.size(); ++i)
        for (std::size_t j = 0; j < lo.size(); ++j)
            if (lo[j].is_subset_of(hi[i]))
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0 / static_cast<double>(k);
    return m;
}

// π_k(S) ∝ Σ_{top T ⊇ S} π_d(T).
inline Eigen::VectorXd marginal(const hdx::PureSimplicialComplex& c, std::size_t k) {
    const std::size_t d = c.dimension();
    const auto& faces = c.faces(k);
    const auto& tops = c.faces(d);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(faces.size()));
    for (std::size_t i = 0; i < faces.size(); ++i)
        for (std::size_t t = 0; t < tops.size(); ++t)
            if (faces[i].is_subset_of(tops[t])) p[static_cast<Eigen::Index>(i)] += c.weights(d)[t];
    return p / p.sum();
}

// Spectrum (descending) of a π-reversible P using Eigen's dense solver.
inline Eigen::VectorXd reversible_spectrum(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi) {
    const Eigen::VectorXd s = pi.cwiseSqrt();
    const Eigen::MatrixXd sym = s.asDiagonal() * p * s.cwiseInverse().asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
    Eigen::VectorXd ev = es.eigenvalues().reverse();
    return ev;
}

inline double variance(const Eigen::VectorXd& pi, const Eigen::VectorXd& f) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) m += pi[i] * f[i];
    double v = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) v += pi[i] * (f[i] - m) * (f[i] - m);
    return v;
}

inline double entropy(const Eigen::VectorXd& pi, const Eigen::VectorXd& f) {
    double m = 0.0;
    double flogf = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        m += pi[i] * f[i];
        if (f[i] > 0.0) flogf += pi[i] * f[i] * std::log(f[i]);
    }
    return flogf - (m > 0.0 ? m * std::log(m) : 0.0);
}

// ½ Σ π(x)P(x,y)(f(x) − f(y))(g(x) − g(y)).
inline double dirichlet(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi, const Eigen::VectorXd& f,
                        const Eigen::VectorXd& g) {
    double total = 0.0;
    for (Eigen::Index x = 0; x < p.rows(); ++x)
        for (Eigen::Index y = 0; y < p.cols(); ++y)
            total += pi[x] * p(x, y) * (f[x] - f[y]) * (g[x] - g[y]);
    return 0.5 * total;
}

inline Eigen::VectorXd gaussian(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
    return v;
}

inline Eigen::VectorXd positive(std::mt19937_64& rng, std::size_t n) {
    return gaussian(rng, n).array().exp().matrix();
}

}  // namespace oracle
