#include "hdx/analyze.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "hdx/contraction.hpp"
#include "hdx/errors.hpp"
#include "hdx/spectral.hpp"
#include "hdx/walks.hpp"

namespace hdx {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

json faces_json(const std::vector<Face>& faces) {
    json out = json::array();
    for (const Face& f : faces) out.push_back(f.to_string());
    return out;
}

// Eigenvalues of a square walk, descending. A single state has eigenvalue P(0,0).
std::vector<double> spectrum_of(const WalkOperator& P) {
    if (P.size() == 1) return {P.matrix(0, 0)};
    const Eigen::VectorXd ev = walk_spectrum(P).eigenvalues;
    return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> nonzero(const std::vector<double>& values, double cutoff) {
    std::vector<double> out;
    for (double v : values)
        if (std::abs(v) > cutoff) out.push_back(v);
    return out;
}

class Runner {
public:
    Runner(const PureSimplicialComplex& complex, const AnalyzeOptions& options, VerificationReport& report)
        : complex_(complex), options_(options), report_(report) {}

    const AnalyzeOptions& options() const { return options_; }
    const Tolerances& tol() const { return options_.tolerances; }

    std::mt19937_64 rng_for(const std::string& id) const {
        const std::uint64_t h = fnv1a(id);
        std::seed_seq seq{static_cast<std::uint32_t>(options_.seed),
                          static_cast<std::uint32_t>(options_.seed >> 32),
                          static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
        return std::mt19937_64(seq);
    }

    // Runs `body` and appends its record. Exceptions become a failed record,
    // except unmet preconditions, which become a skip.
    void run(const std::string& id, const std::string& suite, const std::string& anchor,
             const std::function<void(CheckRecord&)>& body) {
        CheckRecord rec;
        rec.id = id;
        rec.suite = suite;
        rec.anchor = anchor;
        const auto start = std::chrono::steady_clock::now();
        try {
            body(rec);
        } catch (const PreconditionUnmetError& e) {
            rec.skipped = true;
            rec.note = e.what();
        } catch (const DegenerateStateSpaceError& e) {
            rec.skipped = true;
            rec.note = e.what();
        } catch (const std::exception& e) {
            rec.measured = kNaN;
            rec.note = std::string("error: ") + e.what();
        }
        const auto stop = std::chrono::steady_clock::now();
        rec.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        report_.checks.push_back(std::move(rec));
    }

    static void skip(CheckRecord& rec, std::string note) {
        rec.skipped = true;
        rec.note = std::move(note);
    }

    static void at_most(CheckRecord& rec, double measured, double bound, double tolerance) {
        rec.comparison = Comparison::AtMost;
        rec.measured = measured;
        rec.bound = bound;
        rec.tolerance = tolerance;
    }

    static void at_least(CheckRecord& rec, double measured, double bound, double tolerance) {
        rec.comparison = Comparison::AtLeast;
        rec.measured = measured;
        rec.bound = bound;
        rec.tolerance = tolerance;
    }

    LevelFunction gaussian_function(std::mt19937_64& rng, std::size_t level) const {
        std::normal_distribution<double> normal(0.0, 1.0);
        LevelFunction f{level, Eigen::VectorXd(static_cast<Eigen::Index>(complex_.level_size(level)))};
        for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = normal(rng);
        return f;
    }

    LevelFunction positive_function(std::mt19937_64& rng, std::size_t level) const {
        LevelFunction f = gaussian_function(rng, level);
        f.values = (1.5 * f.values.array()).exp().matrix();
        return f;
    }

private:
    const PureSimplicialComplex& complex_;
    const AnalyzeOptions& options_;
    VerificationReport& report_;
};

std::string level_id(const std::string& base, std::size_t k) {
    return base + ".k" + std::to_string(k);
}

// π_k by summing π_d over top faces containing each face: every k-subset of
// every top face receives π_d(T) / C(d, k).
double marginal_consistency_error(const PureSimplicialComplex& complex) {
    const std::size_t d = complex.dimension();
    const auto& tops = complex.faces(d);
    const auto pi_top = level_distribution(complex, d);
    double worst = 0.0;
    for (std::size_t k = 0; k <= d; ++k) {
        Eigen::VectorXd direct = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(complex.level_size(k)));
        double choose = 1.0;
        for (std::size_t i = 0; i < k; ++i) choose = choose * static_cast<double>(d - i) / static_cast<double>(i + 1);
        std::vector<bool> mask(d, false);
        std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
        for (std::size_t t = 0; t < tops.size(); ++t) {
            const auto elems = tops[t].elements();
            std::vector<bool> m = mask;
            do {
                std::vector<Element> sub;
                for (std::size_t i = 0; i < d; ++i)
                    if (m[i]) sub.push_back(elems[i]);
                direct[static_cast<Eigen::Index>(complex.index_of(Face(sub)))] += pi_top.probabilities[static_cast<Eigen::Index>(t)] / choose;
            } while (std::prev_permutation(m.begin(), m.end()));
        }
        const auto via_weights = level_distribution(complex, k);
        worst = std::max(worst, (direct - via_weights.probabilities).cwiseAbs().maxCoeff());
    }
    return worst;
}

// Faces at levels 0..max_level, thinned to at most `limit` by even spacing.
std::vector<Face> sample_faces(const PureSimplicialComplex& complex, std::size_t max_level,
                               std::size_t limit) {
    std::vector<Face> all;
    for (std::size_t k = 0; k <= max_level; ++k)
        for (const Face& f : complex.faces(k)) all.push_back(f);
    if (all.size() <= limit) return all;
    std::vector<Face> out;
    for (std::size_t i = 0; i < limit; ++i) out.push_back(all[i * all.size() / limit]);
    return out;
}

void structure_suite(Runner& r, const PureSimplicialComplex& c) {
    const std::string suite = "structure";
    const std::size_t d = c.dimension();
    const double tol = r.tol().structural;

    r.run("structure.weight_recursion", suite, "weight of a face is the sum of its cover weights",
          [&](CheckRecord& rec) { Runner::at_most(rec, weight_recursion_residual(c), 0.0, tol); });

    r.run("structure.marginal_consistency", suite,
          "level marginals from weights match direct summation over top faces", [&](CheckRecord& rec) {
              if (c.level_size(d) > 10000) return Runner::skip(rec, "more than 10^4 top faces");
              Runner::at_most(rec, marginal_consistency_error(c), 0.0, tol);
          });

    r.run("structure.link_consistency", suite,
          "link distributions are the conditional distributions of the parent", [&](CheckRecord& rec) {
              if (d == 0) return Runner::skip(rec, "no proper faces");
              const auto faces = sample_faces(c, d - 1, 200);
              double worst = 0.0;
              for (const Face& f : faces) worst = std::max(worst, link_consistency_residual(c, f));
              Runner::at_most(rec, worst, 0.0, tol);
              rec.details["faces_checked"] = faces.size();
          });

    for (std::size_t k = 2; k <= d; ++k)
        r.run(level_id("structure.mixture_identity", k), suite,
              "pi_k is the pi_{k-2} mixture of level-2 link distributions",
              [&, k](CheckRecord& rec) { Runner::at_most(rec, mixture_identity_residual(c, k), 0.0, tol); });
}

void walks_suite(Runner& r, const PureSimplicialComplex& c, const OperatorSet& ops) {
    const std::string suite = "walks";
    const std::size_t d = c.dimension();
    const Tolerances& t = r.tol();
    const std::size_t nf = r.options().functions;

    r.run("walks.row_stochastic", suite, "every walk operator is row stochastic", [&](CheckRecord& rec) {
        double worst = 0.0;
        for (std::size_t k = 0; k <= d; ++k) {
            if (k < d) worst = std::max(worst, row_stochastic_residual(ops.up(k)));
            if (k > 0) worst = std::max(worst, row_stochastic_residual(ops.down(k)));
            if (k > 0) worst = std::max(worst, row_stochastic_residual(ops.down_up(k)));
            if (k < d) worst = std::max(worst, row_stochastic_residual(ops.up_down(k)));
        }
        Runner::at_most(rec, worst, 0.0, t.structural);
    });

    r.run("walks.detailed_balance", suite, "up-down and down-up walks are reversible for pi_k",
          [&](CheckRecord& rec) {
              double worst = 0.0;
              for (std::size_t k = 0; k <= d; ++k) {
                  if (k > 0) worst = std::max(worst, detailed_balance_residual(ops.down_up(k)));
                  if (k < d) worst = std::max(worst, detailed_balance_residual(ops.up_down(k)));
              }
              Runner::at_most(rec, worst, 0.0, t.structural);
          });

    r.run("walks.stationarity", suite, "pi_k is stationary for the walks on level k", [&](CheckRecord& rec) {
        double worst = 0.0;
        for (std::size_t k = 0; k <= d; ++k) {
            if (k > 0) worst = std::max(worst, stationarity_residual(ops.down_up(k)));
            if (k < d) worst = std::max(worst, stationarity_residual(ops.up_down(k)));
        }
        Runner::at_most(rec, worst, 0.0, t.structural);
    });

    for (std::size_t k = 2; k <= d; ++k) {
        const std::string id = level_id("walks.var_equiv", k);
        r.run(id, suite, "Dirichlet form of down-up walk equals variance drop", [&, k, id](CheckRecord& rec) {
            auto rng = r.rng_for(id);
            double worst = 0.0;
            for (std::size_t i = 0; i < nf; ++i)
                worst = std::max(worst, var_equiv_residual(ops, r.gaussian_function(rng, k)));
            Runner::at_most(rec, worst, 0.0, t.equality);
            rec.details["functions"] = nf;
        });
    }
    for (std::size_t k = 2; k <= d; ++k) {
        const std::string id = level_id("walks.var_equiv_up", k);
        r.run(id, suite, "Dirichlet form of up-down walk equals variance drop under the down step",
              [&, k, id](CheckRecord& rec) {
                  auto rng = r.rng_for(id);
                  double worst = 0.0;
                  for (std::size_t i = 0; i < nf; ++i)
                      worst = std::max(worst, var_equiv_up_residual(ops, r.gaussian_function(rng, k)));
                  Runner::at_most(rec, worst, 0.0, t.equality);
                  rec.details["functions"] = nf;
              });
    }
    for (std::size_t k = 2; k <= d; ++k) {
        const std::string id = level_id("walks.variance_decomposition", k);
        r.run(id, suite, "variance splits into local level-2 variances plus projected variance",
              [&, k, id](CheckRecord& rec) {
                  auto rng = r.rng_for(id);
                  const auto fib = fibers(c, k - 2, 2);
                  double worst = 0.0;
                  for (std::size_t i = 0; i < nf; ++i)
                      worst = std::max(worst, check_variance_decomposition(ops, fib, k, r.gaussian_function(rng, k)));
                  Runner::at_most(rec, worst, 0.0, t.equality);
                  rec.details["functions"] = nf;
              });
    }

    for (std::size_t k = 1; k <= d; ++k) {
        if (c.level_size(k) < 2) continue;
        r.run(level_id("walks.poincare_eigenvector", k), suite,
              "Dirichlet ratio of the second eigenvector equals the spectral gap", [&, k](CheckRecord& rec) {
                  const WalkOperator& P = ops.down_up(k);
                  const WalkSpectrum spec = walk_spectrum(P);
                  const Eigen::VectorXd f = spec.right_eigenvectors.col(1);
                  const double ratio = dirichlet_form(P, f, f) / variance(P.stationary, f);
                  const double gap = 1.0 - spec.eigenvalues[1];
                  Runner::at_most(rec, std::abs(ratio - gap), 0.0, t.spectral);
                  rec.details["ratio"] = ratio;
                  rec.details["gap"] = gap;
              });
        const std::string id = level_id("walks.poincare_random", k);
        r.run(id, suite, "Dirichlet ratio of any function is at least the spectral gap",
              [&, k, id](CheckRecord& rec) {
                  const WalkOperator& P = ops.down_up(k);
                  const double gap = 1.0 - second_eigenvalue(P);
                  auto rng = r.rng_for(id);
                  double worst = kInf;
                  for (std::size_t i = 0; i < nf; ++i) {
                      const LevelFunction f = r.gaussian_function(rng, k);
                      const double var = variance(P.stationary, f.values);
                      if (var <= 0.0) continue;
                      worst = std::min(worst, dirichlet_form(P, f.values, f.values) / var);
                  }
                  Runner::at_least(rec, worst, gap, t.spectral);
                  rec.details["functions"] = nf;
              });
    }

    for (std::size_t k = 0; k < d; ++k)
        r.run(level_id("walks.cospectral", k), suite,
              "up walk on level k and down walk on level k+1 share nonzero spectra", [&, k](CheckRecord& rec) {
                  const auto a = nonzero(spectrum_of(ops.up_down(k)), 1e-8);
                  const auto b = nonzero(spectrum_of(ops.down_up(k + 1)), 1e-8);
                  double diff = kInf;
                  if (a.size() == b.size()) {
                      diff = 0.0;
                      for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
                  }
                  Runner::at_most(rec, diff, 0.0, t.spectral);
                  rec.details["nonzero_up"] = a.size();
                  rec.details["nonzero_down"] = b.size();
              });

    for (std::size_t k = 2; k <= d; ++k)
        r.run(level_id("walks.lambda2_up_equals_down", k), suite,
              "second eigenvalues of the down walk on k and the up walk on k-1 agree", [&, k](CheckRecord& rec) {
                  const double down = second_eigenvalue(ops.down_up(k));
                  const double up = second_eigenvalue(ops.up_down(k - 1));
                  Runner::at_most(rec, std::abs(down - up), 0.0, t.equality);
              });
}

SpectralProfile clamp_profile(const SpectralProfile& p) {
    SpectralProfile out = p;
    for (double& a : out.values) a = std::max(a, 0.0);
    return out;
}

void spectral_suite(Runner& r, const PureSimplicialComplex& c, const ProfileMeasurement& prof) {
    const std::string suite = "spectral";
    const std::size_t d = c.dimension();
    const Tolerances& t = r.tol();

    for (std::size_t j = 0; j < prof.profile.size(); ++j)
        r.run("spectral.profile.a" + std::to_string(j), suite,
              "worst second eigenvalue of local walks at this level", [&, j](CheckRecord& rec) {
                  Runner::at_most(rec, prof.profile[j], 1.0, t.spectral);
                  rec.details["argmax"] = prof.argmax[j].to_string();
                  rec.details["faces"] = prof.levels[j].size();
              });
    if (!prof.degenerate.empty()) {
        r.run("spectral.degenerate_links", suite, "links excluded from the profile", [&](CheckRecord& rec) {
            Runner::skip(rec, std::to_string(prof.degenerate.size()) + " links with fewer than two vertices");
            rec.details["faces"] = faces_json(prof.degenerate);
        });
    }

    for (std::size_t k = 1; k + 2 <= d; ++k)
        r.run(level_id("spectral.trickling_down", k), suite,
              "local expansion gamma at level k gives gamma/(1-gamma) one level below",
              [&, k](CheckRecord& rec) {
                  const TricklingDownResult res = trickling_down_check(c, k, t.spectral);
                  double worst = -kInf;
                  std::size_t disconnected = 0;
                  json rows = json::array();
                  for (const TricklingRow& row : res.rows) {
                      rows.push_back({{"face", row.face.to_string()},
                                      {"lambda2", row.lambda2},
                                      {"connected", row.status == TricklingStatus::Checked}});
                      if (row.status == TricklingStatus::Checked) worst = std::max(worst, row.lambda2);
                      else ++disconnected;
                  }
                  rec.details["gamma_raw"] = res.gamma_raw;
                  rec.details["bound_raw"] = res.bound_raw;
                  rec.details["rows"] = rows;
                  if (worst == -kInf) return Runner::skip(rec, "every link one level below is disconnected");
                  Runner::at_most(rec, worst, res.bound, t.spectral);
                  if (disconnected) rec.note = std::to_string(disconnected) + " disconnected links excluded";
              });

    if (d < 3) return;
    // The proof identities concern G_∅ and vertex links; apply them to every
    // link that still has dimension at least 3.
    const auto bases = sample_faces(c, d - 3, 200);
    auto over_links = [&](const std::function<double(const PureSimplicialComplex&)>& fn, bool take_min) {
        double acc = take_min ? kInf : 0.0;
        for (const Face& base : bases) {
            const double v = base.empty() ? fn(c) : fn(link(c, base).complex);
            acc = take_min ? std::min(acc, v) : std::max(acc, v);
        }
        return acc;
    };

    r.run("spectral.proof_diagonal_decomposition", suite,
          "vertex degree matrix is the pi_1 mixture of link degree matrices", [&](CheckRecord& rec) {
              Runner::at_most(rec, over_links([](const auto& x) { return trickling_proof_residuals(x).diagonal_decomposition; }, false),
                              0.0, t.structural);
              rec.details["links"] = bases.size();
          });
    r.run("spectral.proof_operator_decomposition", suite,
          "local walk at the root is the weighted average of extended vertex-link walks", [&](CheckRecord& rec) {
              Runner::at_most(rec, over_links([](const auto& x) { return trickling_proof_residuals(x).operator_decomposition; }, false),
                              0.0, t.structural);
              rec.details["links"] = bases.size();
          });
    r.run("spectral.proof_row_identity", suite,
          "row v of the root local walk is the level-1 distribution of the link of v", [&](CheckRecord& rec) {
              Runner::at_most(rec, over_links([](const auto& x) { return trickling_proof_residuals(x).row_identity; }, false),
                              0.0, t.structural);
              rec.details["links"] = bases.size();
          });
    {
        const std::string id = "spectral.proof_dirichlet_decomposition";
        r.run(id, suite, "root Dirichlet form is the pi_1 average of vertex-link Dirichlet forms",
              [&, id](CheckRecord& rec) {
                  auto rng = r.rng_for(id);
                  std::normal_distribution<double> normal(0.0, 1.0);
                  const std::size_t per_link = std::max<std::size_t>(1, r.options().functions / bases.size());
                  double worst = 0.0;
                  for (const Face& base : bases) {
                      const PureSimplicialComplex lk = base.empty() ? c : link(c, base).complex;
                      Eigen::VectorXd f(static_cast<Eigen::Index>(lk.level_size(1)));
                      for (std::size_t i = 0; i < per_link; ++i) {
                          for (Eigen::Index j = 0; j < f.size(); ++j) f[j] = normal(rng);
                          worst = std::max(worst, local_dirichlet_decomposition_residual(lk, f));
                      }
                  }
                  Runner::at_most(rec, worst, 0.0, t.equality);
                  rec.details["links"] = bases.size();
                  rec.details["functions_per_link"] = per_link;
              });
    }
    r.run("spectral.eigenvalue_relation", suite,
          "every root eigenvalue satisfies (1-lambda) >= (1-gamma)(1-lambda^2)", [&](CheckRecord& rec) {
              Runner::at_least(rec, over_links([](const auto& x) { return eigenvalue_relation_margin(x); }, true),
                               0.0, t.spectral);
              rec.details["links"] = bases.size();
          });
}

void bounds_suite(Runner& r, const PureSimplicialComplex& c, const OperatorSet& ops,
                  const ProfileMeasurement& prof) {
    const std::string suite = "bounds";
    const std::size_t d = c.dimension();
    const Tolerances& t = r.tol();
    if (d < 2) return;

    const SpectralProfile clamped = clamp_profile(prof.profile);
    const ContractionSolution sol = solve_profile(clamped);
    const ContractionFactors factors = factors_from_profile(clamped);
    const Admissibility adm = is_admissible(clamped);

    r.run("bounds.recursion_closed_form", suite, "recursion for v_k matches its closed form",
          [&](CheckRecord& rec) {
              const double min_s = *std::min_element(factors.values.begin(), factors.values.end());
              if (sol.singular_closed_form || min_s <= 1.0 + 1e-9)
                  return Runner::skip(rec, "some contraction factor is 1");
              double worst = 0.0;
              for (std::size_t j = 0; j < sol.v.size(); ++j)
                  worst = std::max(worst, std::abs(sol.v[j] - sol.v_closed_form[j]) / sol.v[j]);
              Runner::at_most(rec, worst, 0.0, 1e-11);
          });
    r.run("bounds.x_recurrence", suite, "x_k = v_k/(v_k-1) satisfies its linear recurrence",
          [&](CheckRecord& rec) {
              double worst = 0.0;
              std::size_t used = 0;
              for (std::size_t j = 0; j < sol.x.size(); ++j) {
                  if (!std::isfinite(sol.x[j]) || !std::isfinite(sol.x_recurrence[j])) continue;
                  worst = std::max(worst, std::abs(sol.x[j] - sol.x_recurrence[j]) / std::abs(sol.x[j]));
                  ++used;
              }
              if (used == 0) return Runner::skip(rec, "x is infinite at every level");
              Runner::at_most(rec, worst, 0.0, 1e-11);
          });

    for (std::size_t k = 2; k <= d; ++k) {
        r.run(level_id("bounds.down_walk_vs_ours", k), suite,
              "second eigenvalue of the down-up walk is at most 1/v_{k-2}", [&, k](CheckRecord& rec) {
                  Runner::at_most(rec, second_eigenvalue(ops.down_up(k)), our_bound(factors, k), t.spectral);
              });
        r.run(level_id("bounds.down_walk_vs_al", k), suite,
              "second eigenvalue of the down-up walk is at most the product bound", [&, k](CheckRecord& rec) {
                  Runner::at_most(rec, second_eigenvalue(ops.down_up(k)), al_bound(clamped, k), t.spectral);
              });
        r.run(level_id("bounds.ours_vs_al", k), suite, "recursion bound is at least the product bound",
              [&, k](CheckRecord& rec) {
                  if (!adm.admissible) return Runner::skip(rec, "measured profile is not admissible");
                  Runner::at_least(rec, our_bound(factors, k), al_bound(clamped, k), t.structural);
              });
    }

    for (std::size_t k = 1; k + 2 <= d; ++k)
        r.run(level_id("bounds.profile_property", k), suite,
              "a_k(k+1) + prod(1-a_i) >= 1 for admissible profiles", [&, k](CheckRecord& rec) {
                  if (!adm.admissible) return Runner::skip(rec, "measured profile is not admissible");
                  Runner::at_least(rec, check_profile_property(clamped, k), 0.0, t.structural);
              });
    for (std::size_t k = 0; k + 2 <= d; ++k)
        r.run(level_id("bounds.x_lower_bound", k), suite, "x_k >= (k+2)/prod(1-a_i)", [&, k](CheckRecord& rec) {
            if (!adm.admissible) return Runner::skip(rec, "measured profile is not admissible");
            double prod = 1.0;
            for (std::size_t i = 0; i <= k; ++i) prod *= 1.0 - clamped[i];
            Runner::at_least(rec, sol.x[k], static_cast<double>(k + 2) / prod, t.spectral);
        });

    const double top = clamped[d - 2];
    const double gamma_max = d >= 2 ? 1.0 / static_cast<double>(d - 1) : 1.0;
    for (std::size_t k = 2; k <= d; ++k) {
        r.run(level_id("bounds.trickling_profile_formula", k), suite,
              "closed-form trickling bound equals the recursion on the propagated profile",
              [&, k](CheckRecord& rec) {
                  if (top > gamma_max) return Runner::skip(rec, "top local expansion exceeds 1/(d-1)");
                  const double formula = trickling_profile_bound(top, d, k);
                  const double rec_bound = our_bound(factors_from_profile(trickling_down_propagate(top, d)), k);
                  Runner::at_most(rec, std::abs(formula - rec_bound), 0.0, t.structural);
              });
        r.run(level_id("bounds.trickling_closed_form", k), suite,
              "down-up walk obeys the bound from trickling down the top local expansion",
              [&, k](CheckRecord& rec) {
                  if (top > gamma_max) return Runner::skip(rec, "top local expansion exceeds 1/(d-1)");
                  Runner::at_most(rec, second_eigenvalue(ops.down_up(k)), trickling_profile_bound(top, d, k),
                                  t.spectral);
                  rec.details["gamma"] = top;
              });
        r.run(level_id("bounds.one_over_k_squared", k), suite,
              "top local expansion at most 1/d gives lambda_2 <= 1 - 1/k^2", [&, k](CheckRecord& rec) {
                  if (top > 1.0 / static_cast<double>(d)) return Runner::skip(rec, "top local expansion exceeds 1/d");
                  const double kk = static_cast<double>(k);
                  Runner::at_most(rec, second_eigenvalue(ops.down_up(k)), 1.0 - 1.0 / (kk * kk), t.spectral);
              });
    }
}

// Brute-force minimum over g = (0, g1, g2) in [lo, hi]² on a 3-state objective.
double grid_minimum(const RatioObjective& objective, double lo, double hi, double step) {
    double best = kInf;
    Eigen::VectorXd g(3);
    const int n = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            g << 0.0, lo + i * step, lo + j * step;
            best = std::min(best, objective.evaluate(g, nullptr));
        }
    return best;
}

void entropy_suite(Runner& r, const PureSimplicialComplex& c, const OperatorSet& ops) {
    const std::string suite = "entropy";
    const std::size_t d = c.dimension();
    const Tolerances& t = r.tol();
    const std::size_t nf = r.options().functions;
    const OptimizerOptions& opt = r.options().optimizer;

    for (std::size_t k = 2; k <= d; ++k) {
        const std::string id = level_id("entropy.decomposition", k);
        r.run(id, suite, "entropy splits into local level-2 entropies plus projected entropy",
              [&, k, id](CheckRecord& rec) {
                  auto rng = r.rng_for(id);
                  const auto fib = fibers(c, k - 2, 2);
                  double worst = 0.0;
                  for (std::size_t i = 0; i < nf; ++i)
                      worst = std::max(worst, check_entropy_decomposition(ops, fib, k, r.positive_function(rng, k)));
                  Runner::at_most(rec, worst, 0.0, t.equality);
                  rec.details["functions"] = nf;
              });
    }
    for (std::size_t k = 1; k <= d; ++k) {
        const std::string id = level_id("entropy.inequality_down", k);
        r.run(id, suite, "entropy Dirichlet form of down-up walk dominates entropy drop",
              [&, k, id](CheckRecord& rec) {
                  auto rng = r.rng_for(id);
                  double worst = kInf;
                  for (std::size_t i = 0; i < nf; ++i)
                      worst = std::min(worst, entropy_inequality_margin(ops, r.positive_function(rng, k)));
                  Runner::at_least(rec, worst, 0.0, t.equality);
                  rec.details["functions"] = nf;
              });
    }
    for (std::size_t k = 1; k <= d; ++k) {
        const std::string id = level_id("entropy.inequality_up", k);
        r.run(id, suite, "entropy Dirichlet form of up-down walk dominates entropy drop under the down step",
              [&, k, id](CheckRecord& rec) {
                  auto rng = r.rng_for(id);
                  double worst = kInf;
                  for (std::size_t i = 0; i < nf; ++i)
                      worst = std::min(worst, entropy_inequality_up_margin(ops, r.positive_function(rng, k)));
                  Runner::at_least(rec, worst, 0.0, t.equality);
                  rec.details["functions"] = nf;
              });
    }
    for (std::size_t k = 1; k <= d; ++k) {
        const std::string id = level_id("entropy.data_processing", k);
        r.run(id, suite, "projecting to a lower level does not increase entropy", [&, k, id](CheckRecord& rec) {
            auto rng = r.rng_for(id);
            double worst = kInf;
            for (std::size_t i = 0; i < nf; ++i) {
                const LevelFunction f = r.positive_function(rng, k);
                const LevelFunction g = project_down(ops, f, k - 1);
                worst = std::min(worst, relative_entropy(ops.distribution(k), f.values) -
                                            relative_entropy(ops.distribution(k - 1), g.values));
            }
            Runner::at_least(rec, worst, 0.0, t.equality);
        });
    }
    {
        const std::string id = "entropy.homogeneity";
        r.run(id, suite, "entropy is positively homogeneous", [&, id](CheckRecord& rec) {
            auto rng = r.rng_for(id);
            std::uniform_real_distribution<double> scale(0.1, 10.0);
            double worst = 0.0;
            for (std::size_t i = 0; i < 100; ++i) {
                const LevelFunction f = r.positive_function(rng, d);
                const double s = scale(rng);
                const double lhs = relative_entropy(ops.distribution(d), s * f.values);
                const double rhs = s * relative_entropy(ops.distribution(d), f.values);
                worst = std::max(worst, relative_residual(lhs, rhs));
            }
            Runner::at_most(rec, worst, 0.0, t.structural);
        });
    }

    if (d < 2) return;
    std::vector<LevelFactorEstimate> factors;
    r.run("entropy.local_factors", suite, "local entropy contraction estimates are at least 1",
          [&](CheckRecord& rec) {
              factors = estimate_level_factors(c, d - 2, opt);
              double worst = kInf;
              json levels = json::array();
              for (const auto& f : factors) {
                  levels.push_back({{"level", f.level},
                                    {"value", std::isfinite(f.value) ? json(f.value) : json("inf")},
                                    {"worst_face", f.worst_face.to_string()},
                                    {"unbounded_faces", faces_json(f.unbounded_faces)}});
                  worst = std::min(worst, f.value);
              }
              rec.details["levels"] = levels;
              if (!std::isfinite(worst)) return Runner::skip(rec, "every link is unbounded");
              Runner::at_least(rec, worst, 1.0, t.optimization);
          });

    r.run("entropy.grid_oracle", suite, "optimizer is no worse than a brute-force grid on 3-state links",
          [&](CheckRecord& rec) {
              double worst = -kInf;
              std::size_t links = 0;
              for (std::size_t level = 0; level + 2 <= d && links < 20; ++level)
                  for (const Face& face : c.faces(level)) {
                      if (links >= 20) break;
                      const Link lk = link(c, face);
                      if (lk.complex.level_size(2) != 3) continue;
                      const ProjectionContractionObjective obj(up_step(lk.complex, 1).matrix,
                                                               level_distribution(lk.complex, 2).probabilities,
                                                               level_distribution(lk.complex, 1).probabilities);
                      const double est = estimate_entropy_contraction(lk, opt).value;
                      worst = std::max(worst, est - grid_minimum(obj, -6.0, 6.0, 0.05));
                      ++links;
                  }
              if (links == 0) return Runner::skip(rec, "no link with three level-2 faces");
              Runner::at_most(rec, worst, 0.0, t.optimization);
              rec.details["links"] = links;
          });

    for (std::size_t k = 2; k <= d; ++k) {
        MainEntReport main;
        bool have_main = false;
        r.run(level_id("entropy.main", k), suite,
              "global entropy contraction is at least the recursion value of local factors",
              [&, k](CheckRecord& rec) {
                  if (factors.empty()) return Runner::skip(rec, "local factors unavailable");
                  main = verify_main_ent(c, k, opt, &factors);
                  if (main.skipped) return Runner::skip(rec, "some level has only unbounded links");
                  have_main = true;
                  Runner::at_least(rec, main.global_estimate, main.v_hat, t.optimization);
              });
        if (k == 2)
            r.run("entropy.main_collapse", suite, "at k=2 the global ratio is the local ratio at the root",
                  [&](CheckRecord& rec) {
                      if (!have_main) return Runner::skip(rec, "main entropy check did not run");
                      Runner::at_most(rec, std::abs(main.global_estimate - main.v_hat), 0.0, t.optimization);
                  });
        r.run(level_id("entropy.mlsi_down", k), suite,
              "modified log-Sobolev constant of the down-up walk is at least 1 - 1/v_{k-2}",
              [&](CheckRecord& rec) {
                  if (!have_main) return Runner::skip(rec, "main entropy check did not run");
                  Runner::at_least(rec, main.mlsi_estimate, main.mlsi_bound, t.optimization);
              });
    }
    for (std::size_t k = 1; k + 1 <= d; ++k)
        r.run(level_id("entropy.mlsi_up", k), suite,
              "modified log-Sobolev constant of the up-down walk is at least 1 - 1/v_{k-1}",
              [&, k](CheckRecord& rec) {
                  if (factors.size() < k) return Runner::skip(rec, "local factors unavailable");
                  ContractionFactors s;
                  for (std::size_t j = 0; j < k; ++j) {
                      if (!std::isfinite(factors[j].value)) return Runner::skip(rec, "unbounded local factor");
                      s.values.push_back(std::max(factors[j].value, 1.0));
                  }
                  const double v = solve_recursion(s).v.back();
                  Runner::at_least(rec, estimate_mlsi(ops.up_down(k), opt).value, 1.0 - 1.0 / v, t.optimization);
              });
}

}  // namespace

std::vector<std::string> parse_suites(const std::string& list) {
    if (list.empty() || list == "all") return kAllSuites;
    std::set<std::string> chosen;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "all") return kAllSuites;
        if (std::find(kAllSuites.begin(), kAllSuites.end(), item) == kAllSuites.end())
            throw InvalidParameterError("unknown check suite '" + item + "'");
        chosen.insert(item);
    }
    std::vector<std::string> out;
    for (const auto& s : kAllSuites)
        if (chosen.count(s)) out.push_back(s);
    return out;
}

InstanceDescriptor describe(const PureSimplicialComplex& complex, const std::string& source) {
    return {source, complex.ground_set_size(), complex.dimension(), complex.face_counts()};
}

VerificationReport run_analyze(const PureSimplicialComplex& complex, const std::string& source,
                               const AnalyzeOptions& options) {
    if (options.functions == 0) throw InvalidParameterError("need at least one random function");
    VerificationReport report;
    report.instance = describe(complex, source);
    report.metadata.seed = options.seed;
    report.metadata.restarts = options.optimizer.restarts;

    auto enabled = [&](const char* s) {
        return std::find(options.suites.begin(), options.suites.end(), s) != options.suites.end();
    };
    Runner runner(complex, options, report);
    const OperatorSet ops(complex);

    if (enabled("structure")) structure_suite(runner, complex);
    if (enabled("walks")) walks_suite(runner, complex, ops);

    if ((enabled("spectral") || enabled("bounds")) && complex.dimension() >= 2) {
        const ProfileMeasurement prof = measure_spectral_profile(complex);
        if (enabled("spectral")) spectral_suite(runner, complex, prof);
        if (enabled("bounds")) bounds_suite(runner, complex, ops, prof);
    }
    if (enabled("entropy")) entropy_suite(runner, complex, ops);
    return report;
}

}  // namespace hdx
