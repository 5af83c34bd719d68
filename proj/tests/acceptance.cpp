// Acceptance run: one PASS/FAIL line per criterion. Tolerances and time
// limits are fixed below; the exit status is 1 if any criterion fails.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "hdx/complex.hpp"
#include "hdx/contraction.hpp"
#include "hdx/entropy.hpp"
#include "hdx/errors.hpp"
#include "hdx/spectral.hpp"
#include "hdx/walks.hpp"
#include "oracles.hpp"

using namespace hdx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

namespace tol {
constexpr double spectral = 1e-9;
constexpr double bound = 1e-12;
constexpr double identity = 1e-10;
constexpr double optimization = 1e-6;
constexpr double gradient = 1e-5;
}  // namespace tol

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Accumulates the worst value of a quantity and whether it stayed in range.
struct Worst {
    double value;
    bool ok = true;

    static Worst low() { return {kInf}; }
    static Worst high() { return {-kInf}; }
    void at_most(double x, double limit) {
        value = std::max(value, x);
        ok = ok && x <= limit;
    }
    void at_least(double x, double limit) {
        value = std::min(value, x);
        ok = ok && x >= limit;
    }
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(4);
    s << x;
    return s.str();
}

int failures = 0;

void criterion(int id, double time_limit_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= time_limit_s;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::printf("criterion %2d: %s  %s; %.2f s (limit %.0f s)%s\n", id, pass ? "PASS" : "FAIL",
                out.detail.c_str(), secs, time_limit_s, in_time ? "" : " TIME EXCEEDED");
    std::fflush(stdout);
}

SpectralProfile clamped(SpectralProfile p) {
    for (double& a : p.values) a = std::max(a, 0.0);
    return p;
}

// γ_k by the recursion and by the product formula, written out directly.
double recursion_bound(const std::vector<double>& a, std::size_t k) {
    double v = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        const double s = 2.0 / (1.0 + a[i]);
        v = i == 0 ? s : s - (s - 1.0) / v;
    }
    return 1.0 / v;
}

double product_bound(const std::vector<double>& a, std::size_t k) {
    double prod = 1.0;
    for (std::size_t i = 0; i + 1 < k; ++i) prod *= 1.0 - a[i];
    return 1.0 - prod / static_cast<double>(k);
}

std::vector<SpectralProfile> sampled_profiles() {
    std::mt19937_64 rng(20240601);
    std::vector<SpectralProfile> out;
    out.reserve(10000);
    for (int i = 0; i < 10000; ++i) out.push_back(sample_admissible_profile(2 + i % 11, rng));
    return out;
}

// Second eigenvalue of the uniform walk on K_m, by dense eigensolve.
double complete_graph_lambda2(int m) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Constant(m, m, 1.0 / (m - 1));
    p.diagonal().setZero();
    return oracle::reversible_spectrum(p, Eigen::VectorXd::Constant(m, 1.0 / m))[1];
}

// G_∅ = 2 P^up_1 P^down_2 − I from the half-step definitions.
double root_walk_lambda2(const PureSimplicialComplex& c) {
    const Eigen::MatrixXd up = oracle::up_matrix(c, 1) * oracle::down_matrix(c, 2);
    const Eigen::MatrixXd g = 2.0 * up - Eigen::MatrixXd::Identity(up.rows(), up.cols());
    return oracle::reversible_spectrum(g, oracle::marginal(c, 1))[1];
}

std::vector<PureSimplicialComplex> identity_instances() {
    std::vector<PureSimplicialComplex> out;
    out.push_back(generate_complete_complex(5, 3));
    out.push_back(generate_graphic_matroid_bases({{0, 1}, {1, 2}, {0, 2}}));
    for (std::uint64_t seed : {101u, 102u, 103u}) out.push_back(generate_random_complex(7, 3, 0.5, seed));
    return out;
}

// Infimum of Ent_{π_2}(f) / Ent_{π_1}(U f) over positive f on a 3-edge
// complex. Searches the closure of the positive orthant: the interior by a
// zooming grid with f_0 = 1, the faces with zero coordinates directly, and
// the constant limit through the second singular value of the projection.
double grid_oracle(const Eigen::MatrixXd& U, const Eigen::VectorXd& pi_top, const Eigen::VectorXd& pi_bottom) {
    const auto ratio = [&](const Eigen::Vector3d& f) {
        const double bottom = oracle::entropy(pi_bottom, U * f);
        return bottom > 0.0 ? oracle::entropy(pi_top, f) / bottom : kInf;
    };
    const auto at = [&](double x, double y) {
        if (std::hypot(x, y) < 1e-3) return kInf;
        return ratio(Eigen::Vector3d(1.0, std::exp(x), std::exp(y)));
    };
    double best = kInf, bx = 0.0, by = 0.0;
    for (double x = -8.0; x <= 8.0 + 1e-9; x += 0.1)
        for (double y = -8.0; y <= 8.0 + 1e-9; y += 0.1)
            if (const double r = at(x, y); r < best) best = r, bx = x, by = y;
    for (double step = 0.02; step > 1e-9; step /= 5.0) {
        const double cx = bx, cy = by;
        for (int i = -10; i <= 10; ++i)
            for (int j = -10; j <= 10; ++j)
                if (const double r = at(cx + i * step, cy + j * step); r < best)
                    best = r, bx = cx + i * step, by = cy + j * step;
    }
    // One zero coordinate: a one-parameter family, searched the same way.
    for (int zero = 0; zero < 3; ++zero) {
        const auto edge = [&](double t) {
            Eigen::Vector3d f = Eigen::Vector3d::Ones();
            f[zero] = 0.0;
            f[(zero + 1) % 3] = std::exp(t);
            return ratio(f);
        };
        double tb = 0.0, eb = kInf;
        for (double t = -30.0; t <= 30.0; t += 0.01)
            if (const double r = edge(t); r < eb) eb = r, tb = t;
        for (double step = 0.002; step > 1e-10; step /= 5.0) {
            const double c = tb;
            for (int i = -10; i <= 10; ++i)
                if (const double r = edge(c + i * step); r < eb) eb = r, tb = c + i * step;
        }
        best = std::min(best, eb);
        Eigen::Vector3d point = Eigen::Vector3d::Zero();
        point[zero] = 1.0;
        best = std::min(best, ratio(point));
    }
    // Constant limit: Ent ≈ Var / 2 on both sides.
    const Eigen::MatrixXd m = pi_bottom.cwiseSqrt().asDiagonal() * U * pi_top.cwiseSqrt().cwiseInverse().asDiagonal();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const double sigma2 = svd.singularValues()[1];
    if (sigma2 > 0.0) best = std::min(best, 1.0 / (sigma2 * sigma2));
    return best;
}

double gradient_error(const RatioObjective& obj, const Eigen::VectorXd& g) {
    Eigen::VectorXd grad;
    obj.evaluate(g, &grad);
    Eigen::VectorXd fd(g.size());
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        Eigen::VectorXd plus = g, minus = g;
        plus[i] += h;
        minus[i] -= h;
        fd[i] = (obj.evaluate(plus, nullptr) - obj.evaluate(minus, nullptr)) / (2.0 * h);
    }
    return (grad - fd).norm() / std::max(fd.norm(), 1e-8);
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream s;
    s << in.rdbuf();
    out = s.str();
    return true;
}

}  // namespace

int main() {
    criterion(1, 10.0, [] {
        const std::size_t n = 6, d = 4;
        const auto c = generate_complete_complex(n, d);
        const ProfileMeasurement m = measure_spectral_profile(c);
        Worst profile = Worst::high();
        for (std::size_t k = 0; k < m.profile.size(); ++k) {
            const double expected = complete_graph_lambda2(static_cast<int>(n - k));
            profile.at_most(std::abs(m.profile[k] - expected), tol::spectral);
            profile.at_most(std::abs(expected + 1.0 / (n - k - 1.0)), tol::spectral);
        }
        const SpectralProfile zero = clamped(m.profile);
        const ContractionFactors f = factors_from_profile(zero);
        Worst bounds = Worst::high(), walk = Worst::high();
        for (std::size_t k = 2; k <= d; ++k) {
            const double target = 1.0 - 1.0 / static_cast<double>(k);
            bounds.at_most(std::abs(our_bound(f, k) - target), tol::bound);
            bounds.at_most(std::abs(al_bound(zero, k) - target), tol::bound);
            walk.at_most(second_eigenvalue(down_up(c, k)) - target, tol::spectral);
        }
        return Outcome{profile.ok && bounds.ok && walk.ok && m.profile.size() == d - 1,
                       "profile err " + fmt(profile.value) + ", bound err " + fmt(bounds.value) +
                           ", max lambda2 - (1-1/k) " + fmt(walk.value)};
    });

    criterion(2, 1.0, [] {
        Worst closed = Worst::high(), rec = Worst::high();
        for (std::size_t d = 3; d <= 10; ++d) {
            const double gamma = 1.0 / static_cast<double>(d);
            const SpectralProfile p = trickling_down_propagate(gamma, d);
            const ContractionFactors f = factors_from_profile(p);
            for (std::size_t k = 2; k <= d; ++k) {
                const double kk = static_cast<double>(k);
                const double t = trickling_profile_bound(gamma, d, k);
                closed.at_most(std::abs(t - (1.0 - 1.0 / (kk * kk))), tol::bound);
                rec.at_most(std::abs(t - our_bound(f, k)), tol::bound);
                rec.at_most(std::abs(t - recursion_bound(p.values, k)), tol::bound);
            }
        }
        return Outcome{closed.ok && rec.ok,
                       "|bound - (1-1/k^2)| " + fmt(closed.value) + ", |bound - recursion| " + fmt(rec.value)};
    });

    const std::vector<SpectralProfile> profiles = sampled_profiles();

    criterion(3, 5.0, [&] {
        Worst cmp = Worst::low(), lib = Worst::high(), tight = Worst::high();
        for (const SpectralProfile& p : profiles) {
            const auto rows = compare_bounds(p);
            for (const auto& row : rows) {
                const double ours = recursion_bound(p.values, row.k);
                const double al = product_bound(p.values, row.k);
                cmp.at_least(ours - al, -tol::bound);
                lib.at_most(std::max(std::abs(row.ours - ours), std::abs(row.al - al)), tol::bound);
            }
        }
        for (std::size_t d = 3; d <= 12; ++d)
            for (double frac : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
                const SpectralProfile p = trickling_down_propagate(frac / static_cast<double>(d - 1), d);
                for (std::size_t k = 2; k <= d; ++k)
                    tight.at_most(std::abs(recursion_bound(p.values, k) - product_bound(p.values, k)), tol::bound);
                for (const auto& row : compare_bounds(p)) tight.at_most(std::abs(row.gap), tol::bound);
            }
        return Outcome{cmp.ok && lib.ok && tight.ok,
                       std::to_string(profiles.size()) + " profiles, min(ours - al) " + fmt(cmp.value) +
                           ", library vs direct " + fmt(lib.value) + ", tight gap " + fmt(tight.value)};
    });

    criterion(4, 1.0, [&] {
        Worst margin = Worst::low(), lib = Worst::high();
        for (const SpectralProfile& p : profiles) {
            double prod = 1.0 - p[0];
            for (std::size_t k = 1; k + 2 <= p.dimension(); ++k) {
                prod *= 1.0 - p[k];
                const double lhs = p[k] * static_cast<double>(k + 1) + prod;
                margin.at_least(lhs - 1.0, -tol::bound);
                lib.at_most(std::abs(check_profile_property(p, k) - (lhs - 1.0)), tol::bound);
            }
        }
        return Outcome{margin.ok && lib.ok, "min(lhs - 1) " + fmt(margin.value) + ", library vs direct " + fmt(lib.value)};
    });

    criterion(5, 30.0, [] {
        std::size_t eligible = 0, tried = 0;
        Worst thm = Worst::high(), oracle_gap = Worst::high(), proof = Worst::high();
        std::mt19937_64 fn_rng(5);
        for (std::uint64_t seed = 1; eligible < 100 && seed <= 2000; ++seed) {
            ++tried;
            const std::size_t n = 6 + seed % 3;
            const auto c = generate_random_complex(n, 3, 0.55, seed);
            if (c.level_size(1) < 3) continue;
            TricklingDownResult r;
            try {
                r = trickling_down_check(c, 1);
            } catch (const PreconditionUnmetError&) {
                continue;
            }
            if (!(r.gamma_raw > 0.0 && r.gamma_raw < 1.0) || r.rows.size() != 1) continue;
            const double lambda = root_walk_lambda2(c);
            if (!(lambda < 1.0 - 1e-9)) continue;
            ++eligible;
            // γ from the local walks, recomputed with the dense oracle.
            double gamma = -kInf;
            for (const Face& v : c.faces(1)) {
                const WalkOperator g = local_walk(c, v);
                gamma = std::max(gamma, oracle::reversible_spectrum(g.matrix, g.stationary)[1]);
            }
            oracle_gap.at_most(std::max(std::abs(gamma - r.gamma_raw), std::abs(lambda - r.rows[0].lambda2)),
                               tol::spectral);
            thm.at_most(lambda - gamma / (1.0 - gamma), tol::spectral);
            const TricklingProofResiduals res = trickling_proof_residuals(c);
            proof.at_most(std::max(res.operator_decomposition, res.row_identity), tol::identity);
            for (int i = 0; i < 10; ++i)
                proof.at_most(local_dirichlet_decomposition_residual(c, oracle::gaussian(fn_rng, c.level_size(1))),
                              tol::identity);
        }
        return Outcome{eligible == 100 && thm.ok && oracle_gap.ok && proof.ok,
                       std::to_string(eligible) + " of " + std::to_string(tried) +
                           " instances eligible, max lambda2 - g/(1-g) " + fmt(thm.value) + ", oracle diff " +
                           fmt(oracle_gap.value) + ", proof residual " + fmt(proof.value)};
    });

    const std::vector<PureSimplicialComplex> instances = identity_instances();

    criterion(6, 20.0, [&] {
        std::mt19937_64 rng(6);
        Worst worst = Worst::high();
        for (const auto& c : instances) {
            const OperatorSet ops(c);
            for (std::size_t k = 2; k <= c.dimension(); ++k) {
                worst.at_most(mixture_identity_residual(c, k), tol::identity);
                const auto fib = fibers(c, k - 2, 2);
                for (int i = 0; i < 1000; ++i) {
                    const LevelFunction f{k, oracle::gaussian(rng, c.level_size(k))};
                    const LevelFunction pos{k, oracle::positive(rng, c.level_size(k))};
                    worst.at_most(var_equiv_residual(ops, f), tol::identity);
                    worst.at_most(var_equiv_up_residual(ops, f), tol::identity);
                    worst.at_most(check_variance_decomposition(ops, fib, k, f), tol::identity);
                    worst.at_most(check_entropy_decomposition(ops, fib, k, pos), tol::identity);
                }
            }
        }
        return Outcome{worst.ok, std::to_string(instances.size()) + " instances, max relative residual " + fmt(worst.value)};
    });

    criterion(7, 10.0, [&] {
        std::mt19937_64 rng(7);
        Worst worst = Worst::low();
        for (const auto& c : instances) {
            const OperatorSet ops(c);
            for (std::size_t k = 1; k <= c.dimension(); ++k)
                for (int i = 0; i < 1000; ++i) {
                    const LevelFunction f{k, oracle::positive(rng, c.level_size(k))};
                    worst.at_least(entropy_inequality_margin(ops, f), -tol::identity);
                    worst.at_least(entropy_inequality_up_margin(ops, f), -tol::identity);
                }
        }
        return Outcome{worst.ok, "min(lhs - rhs) " + fmt(worst.value)};
    });

    const auto main_instance = generate_complete_complex(5, 3);
    OptimizerOptions opt;
    opt.restarts = 64;
    opt.seed = 42;
    std::vector<LevelFactorEstimate> local;

    criterion(8, 60.0, [&] {
        local = estimate_level_factors(main_instance, 1, opt);
        const MainEntReport k3 = verify_main_ent(main_instance, 3, opt, &local);
        const MainEntReport k2 = verify_main_ent(main_instance, 2, opt, &local);
        const bool main_ok = !k3.skipped && k3.margin >= -tol::optimization;
        const double collapse = std::abs(k2.global_estimate - k2.v_hat);

        // Finite differences on both objectives at random points.
        std::mt19937_64 rng(8);
        Worst grad = Worst::high();
        const Link lk = link(main_instance, Face({0}));
        const ProjectionContractionObjective proj(up_step(lk.complex, 1).matrix,
                                                  level_distribution(lk.complex, 2).probabilities,
                                                  level_distribution(lk.complex, 1).probabilities);
        const MlsiObjective mlsi(down_up(main_instance, 2));
        for (int i = 0; i < 20; ++i) {
            grad.at_most(gradient_error(proj, oracle::gaussian(rng, proj.dimension())), tol::gradient);
            grad.at_most(gradient_error(mlsi, oracle::gaussian(rng, mlsi.dimension())), tol::gradient);
        }

        // Optimizer against the grid oracle on weighted triangles.
        Worst grid = Worst::high();
        std::uniform_real_distribution<double> weight(0.2, 2.0);
        for (int t = 0; t < 4; ++t) {
            std::vector<WeightedFace> top;
            for (auto [a, b] : {std::pair{0u, 1u}, {1u, 2u}, {0u, 2u}})
                top.push_back({Face({a, b}), t == 0 ? 1.0 : weight(rng)});
            const auto tri = build_from_top_faces(2, top);
            const Eigen::MatrixXd U = up_step(tri, 1).matrix;
            const Eigen::VectorXd pi2 = level_distribution(tri, 2).probabilities;
            const Eigen::VectorXd pi1 = level_distribution(tri, 1).probabilities;
            const double est = minimize_ratio(ProjectionContractionObjective(U, pi2, pi1), opt).value;
            grid.at_most(std::abs(est - grid_oracle(U, pi2, pi1)), tol::optimization);
        }
        return Outcome{main_ok && collapse <= tol::optimization && grad.ok && grid.ok,
                       "k=3 global " + fmt(k3.global_estimate) + " vs v_hat " + fmt(k3.v_hat) + " (margin " +
                           fmt(k3.margin) + "), k=2 collapse " + fmt(collapse) + ", gradient rel err " +
                           fmt(grad.value) + ", grid diff " + fmt(grid.value)};
    });

    criterion(9, 60.0, [&] {
        if (local.empty()) local = estimate_level_factors(main_instance, 1, opt);
        Worst margin = Worst::low();
        std::string detail;
        for (std::size_t k = 2; k <= 3; ++k) {
            ContractionFactors s;
            for (std::size_t j = 0; j + 2 <= k; ++j) s.values.push_back(std::max(local[j].value, 1.0));
            const double bound = 1.0 - 1.0 / solve_recursion(s).v.back();
            const double est = estimate_mlsi(down_up(main_instance, k), opt).value;
            margin.at_least(est - bound, -tol::optimization);
            detail += "k=" + std::to_string(k) + " rho " + fmt(est) + " >= " + fmt(bound) + "; ";
        }
        return Outcome{margin.ok, detail + "min margin " + fmt(margin.value)};
    });

    criterion(10, 120.0, [] {
        const std::string base = std::string(HDX_CLI_PATH) +
                                 " analyze --generate complete:n=5,d=3 --checks all --seed 42"
                                 " --restarts 16 --functions 200 --format json --no-timing --output ";
        const std::string a = "acceptance_run_a.json", b = "acceptance_run_b.json";
        const int ra = std::system((base + a).c_str());
        const int rb = std::system((base + b).c_str());
        std::string ja, jb;
        if (!read_file(a, ja) || !read_file(b, jb)) return Outcome{false, "report files missing"};
        std::remove(a.c_str());
        std::remove(b.c_str());
        return Outcome{ra == rb && !ja.empty() && ja == jb,
                       std::to_string(ja.size()) + " bytes, reports " + (ja == jb ? "identical" : "differ")};
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
