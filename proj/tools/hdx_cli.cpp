// hdx: verify local-to-global expansion bounds on weighted simplicial complexes.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdx/analyze.hpp"
#include "hdx/contraction.hpp"
#include "hdx/errors.hpp"
#include "hdx/instance_io.hpp"
#include "hdx/report.hpp"
#include "hdx/spectral.hpp"
#include "hdx/walks.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct InstanceArgs {
    std::string input;
    std::string generate;
};

struct RunArgs {
    std::string checks = "all";
    std::optional<std::uint64_t> seed;
    std::size_t restarts = 64;
    double opt_tol = 1e-10;
    double eq_tol = 1e-10;
    double spec_tol = 1e-9;
    double opt_margin = 1e-6;
    std::size_t functions = 1000;
    std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string format = "text";
    std::string output = "-";
    bool no_timing = false;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& a) {
    auto* in = cmd->add_option("--input,-i", a.input, "instance JSON file");
    auto* gen = cmd->add_option("--generate,-g", a.generate,
                                "generator spec, e.g. complete:n=6,d=4 or random:n=8,d=3,density=0.5,seed=7");
    in->excludes(gen);
}

void add_run_options(CLI::App* cmd, RunArgs& a) {
    cmd->add_option("--seed", a.seed, "random seed (falls back to $HDX_SEED, then 42)");
    cmd->add_option("--restarts", a.restarts, "optimizer restarts")->check(CLI::PositiveNumber);
    cmd->add_option("--opt-tol", a.opt_tol, "optimizer gradient-norm stop")->check(CLI::PositiveNumber);
    cmd->add_option("--eq-tol", a.eq_tol, "tolerance for identities on random functions");
    cmd->add_option("--spec-tol", a.spec_tol, "tolerance for eigenvalue inequalities");
    cmd->add_option("--opt-margin", a.opt_margin, "tolerance for optimizer comparisons");
    cmd->add_option("--functions", a.functions, "random functions per identity")->check(CLI::PositiveNumber);
    cmd->add_option("--jobs,-j", a.jobs, "worker threads for optimizer restarts")->check(CLI::PositiveNumber);
    cmd->add_option("--format", a.format, "text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_option("--output,-o", a.output, "report path, '-' for stdout");
    cmd->add_flag("--no-timing", a.no_timing, "omit wall times from JSON output");
}

std::uint64_t resolve_seed(const RunArgs& a) {
    if (a.seed) return *a.seed;
    if (const char* env = std::getenv("HDX_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw hdx::InvalidParameterError(std::string("HDX_SEED is not an integer: ") + env);
        }
    }
    return 42;
}

std::pair<hdx::PureSimplicialComplex, std::string> load(const InstanceArgs& a) {
    if (!a.input.empty()) return {hdx::load_instance(a.input), a.input};
    if (!a.generate.empty()) return {hdx::generate_instance(a.generate), a.generate};
    throw hdx::InvalidParameterError("one of --input or --generate is required");
}

hdx::AnalyzeOptions analyze_options(const RunArgs& a) {
    hdx::AnalyzeOptions o;
    o.suites = hdx::parse_suites(a.checks);
    o.seed = resolve_seed(a);
    o.functions = a.functions;
    o.optimizer.restarts = a.restarts;
    o.optimizer.seed = o.seed;
    o.optimizer.gradient_tolerance = a.opt_tol;
    o.optimizer.jobs = a.jobs;
    o.tolerances.equality = a.eq_tol;
    o.tolerances.spectral = a.spec_tol;
    o.tolerances.optimization = a.opt_margin;
    return o;
}

int run_report(const InstanceArgs& inst, const RunArgs& args, const hdx::AnalyzeOptions& opts) {
    auto [complex, source] = load(inst);
    const hdx::VerificationReport report = hdx::run_analyze(complex, source, opts);
    hdx::write_report(report, hdx::parse_report_format(args.format), args.output, !args.no_timing);
    return report.all_passed() ? kExitPass : kExitFail;
}

struct BoundsArgs {
    std::string profile;
    std::optional<double> trickling;
    std::size_t dimension = 0;
    std::size_t k_max = 0;
    std::string format = "text";
};

hdx::SpectralProfile parse_profile(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw hdx::ParseError("--profile: " + std::string(e.what()));
    }
    if (!doc.is_array() || doc.empty()) throw hdx::ParseError("--profile must be a non-empty JSON array");
    hdx::SpectralProfile p;
    for (const auto& v : doc) {
        if (!v.is_number()) throw hdx::ParseError("--profile entries must be numbers");
        p.values.push_back(v.get<double>());
    }
    return p;
}

int run_bounds(const BoundsArgs& a) {
    hdx::SpectralProfile profile;
    if (a.trickling) {
        if (a.dimension < 2) throw hdx::InvalidParameterError("--trickling needs --dimension >= 2");
        profile = hdx::trickling_down_propagate(*a.trickling, a.dimension);
    } else if (!a.profile.empty()) {
        profile = parse_profile(a.profile);
    } else {
        throw hdx::InvalidParameterError("one of --profile or --trickling is required");
    }
    if (profile.size() == 0) throw hdx::InvalidProfileError("profile is empty");
    const std::size_t k_max = a.k_max == 0 ? profile.dimension() : a.k_max;
    if (k_max < 2) throw hdx::InvalidParameterError("--k-max must be at least 2");
    if (k_max > profile.dimension()) {
        // A profile a_0..a_{d-2} covers k <= d; extend it with its last entry.
        std::cerr << "note: profile has dimension " << profile.dimension() << "; repeating a_"
                  << profile.size() - 1 << " up to k = " << k_max << "\n";
        profile.values.resize(k_max - 1, profile.values.back());
    }

    const hdx::ContractionSolution sol = hdx::solve_profile(profile);
    const hdx::Admissibility adm = hdx::is_admissible(profile);

    if (a.format == "json") {
        nlohmann::json doc;
        doc["profile"] = profile.values;
        doc["admissible"] = adm.admissible;
        doc["rows"] = nlohmann::json::array();
        for (std::size_t k = 2; k <= k_max; ++k)
            doc["rows"].push_back({{"k", k},
                                   {"v", sol.v[k - 2]},
                                   {"ours", sol.our_bounds[k - 2]},
                                   {"al", sol.al_bounds[k - 2]},
                                   {"gap", sol.our_bounds[k - 2] - sol.al_bounds[k - 2]}});
        std::cout << doc.dump(2) << "\n";
    } else if (a.format == "csv") {
        std::cout << std::setprecision(17) << "k,v,ours,al,gap\n";
        for (std::size_t k = 2; k <= k_max; ++k)
            std::cout << k << ',' << sol.v[k - 2] << ',' << sol.our_bounds[k - 2] << ','
                      << sol.al_bounds[k - 2] << ',' << sol.our_bounds[k - 2] - sol.al_bounds[k - 2] << '\n';
    } else {
        std::cout << "profile:";
        for (double x : profile.values) std::cout << ' ' << x;
        std::cout << (adm.admissible ? "  (admissible)" : "  (not admissible)") << "\n\n";
        std::cout << std::setw(4) << "k" << std::setw(16) << "v_{k-2}" << std::setw(16) << "ours"
                  << std::setw(16) << "al" << std::setw(19) << "gap" << "\n";
        std::cout << std::setprecision(10);
        for (std::size_t k = 2; k <= k_max; ++k)
            std::cout << std::setw(4) << k << "  " << std::setw(14) << sol.v[k - 2] << "  " << std::setw(14)
                      << sol.our_bounds[k - 2] << "  " << std::setw(14) << sol.al_bounds[k - 2] << "  "
                      << std::setw(17) << sol.our_bounds[k - 2] - sol.al_bounds[k - 2] << "\n";
    }
    return kExitPass;
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out) throw hdx::IoError("cannot write " + path.string());
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
        out << '\n';
    }
}

int run_export(const InstanceArgs& inst, const std::string& dir) {
    auto [complex, source] = load(inst);
    std::filesystem::path root(dir);
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) throw hdx::IoError("cannot create " + dir + ": " + ec.message());
    const hdx::OperatorSet ops(complex);
    const std::size_t d = complex.dimension();
    for (std::size_t k = 0; k <= d; ++k) {
        const std::string s = std::to_string(k);
        std::ofstream faces(root / ("faces_" + s + ".csv"));
        if (!faces) throw hdx::IoError("cannot write into " + dir);
        faces << std::setprecision(17) << "index,face,weight,pi\n";
        const auto& dist = ops.distribution(k);
        for (std::size_t i = 0; i < complex.level_size(k); ++i)
            faces << i << ",\"" << complex.faces(k)[i].to_string() << "\"," << complex.weights(k)[i] << ','
                  << dist.probabilities[static_cast<Eigen::Index>(i)] << '\n';
        if (k < d) write_matrix(root / ("up_" + s + ".csv"), ops.up(k).matrix);
        if (k < d) write_matrix(root / ("up_down_" + s + ".csv"), ops.up_down(k).matrix);
        if (k > 0) write_matrix(root / ("down_" + s + ".csv"), ops.down(k).matrix);
        if (k > 0) write_matrix(root / ("down_up_" + s + ".csv"), ops.down_up(k).matrix);
    }
    std::cerr << "wrote operators for " << source << " to " << dir << "\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral and entropy verification for weighted simplicial complexes"};
    app.set_version_flag("--version", hdx::kToolVersion);
    app.require_subcommand(1);

    InstanceArgs analyze_inst;
    RunArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "run verification suites on an instance");
    add_instance_options(analyze, analyze_inst);
    add_run_options(analyze, analyze_args);
    analyze->add_option("--checks", analyze_args.checks,
                        "all, or comma separated: structure,walks,spectral,bounds,entropy");

    InstanceArgs entropy_inst;
    RunArgs entropy_args;
    auto* entropy = app.add_subcommand("entropy", "run only the entropy suite");
    add_instance_options(entropy, entropy_inst);
    add_run_options(entropy, entropy_args);

    BoundsArgs bounds_args;
    auto* bounds = app.add_subcommand("bounds", "evaluate bounds for a spectral profile");
    auto* prof = bounds->add_option("--profile", bounds_args.profile, "JSON array a_0..a_{d-2}");
    auto* trick = bounds->add_option("--trickling", bounds_args.trickling,
                                     "use the profile propagated down from a_{d-2} = gamma");
    prof->excludes(trick);
    bounds->add_option("--dimension,-d", bounds_args.dimension, "d, with --trickling");
    bounds->add_option("--k-max", bounds_args.k_max, "largest k in the table (default d)");
    bounds->add_option("--format", bounds_args.format, "text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    InstanceArgs export_inst;
    std::string export_dir = "operators";
    auto* exporter = app.add_subcommand("export-operators", "write walk operators as CSV");
    add_instance_options(exporter, export_inst);
    exporter->add_option("--output-dir,-o", export_dir, "destination directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*analyze) return run_report(analyze_inst, analyze_args, analyze_options(analyze_args));
        if (*entropy) {
            hdx::AnalyzeOptions opts = analyze_options(entropy_args);
            opts.suites = {"entropy"};
            return run_report(entropy_inst, entropy_args, opts);
        }
        if (*bounds) return run_bounds(bounds_args);
        if (*exporter) return run_export(export_inst, export_dir);
    } catch (const hdx::Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
