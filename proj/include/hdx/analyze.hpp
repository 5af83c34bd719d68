#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hdx/complex.hpp"
#include "hdx/entropy.hpp"
#include "hdx/report.hpp"

namespace hdx {

/// Default tolerances for every check the harness runs.
struct Tolerances {
    double structural = 1e-12;    // weights, marginals, stochasticity, operator identities
    double equality = 1e-10;      // identities evaluated on random functions
    double spectral = 1e-9;       // eigenvalue inequalities
    double optimization = 1e-6;   // comparisons between optimizer estimates
};

inline const std::vector<std::string> kAllSuites = {"structure", "walks", "spectral", "bounds",
                                                    "entropy"};

struct AnalyzeOptions {
    std::vector<std::string> suites = kAllSuites;
    std::uint64_t seed = 42;
    std::size_t functions = 1000;  // random test functions per identity
    OptimizerOptions optimizer;
    Tolerances tolerances;
};

/// "all" or a comma separated subset of kAllSuites. Throws InvalidParameterError.
std::vector<std::string> parse_suites(const std::string& list);

/// Runs the selected suites on `complex`. Failing checks are recorded, never
/// thrown; only invalid options raise.
VerificationReport run_analyze(const PureSimplicialComplex& complex, const std::string& source,
                               const AnalyzeOptions& options);

InstanceDescriptor describe(const PureSimplicialComplex& complex, const std::string& source);

}  // namespace hdx
