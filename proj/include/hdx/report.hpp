#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace hdx {

inline constexpr int kReportSchema = 1;
inline constexpr const char* kToolVersion = "0.1.0";

enum class CheckStatus { Pass, Fail, Skipped };

/// How `measured` must relate to `bound` for a check to pass.
///   AtMost:  measured <= bound + tolerance
///   AtLeast: measured >= bound - tolerance
enum class Comparison { AtMost, AtLeast };

std::string to_string(CheckStatus status);
std::string to_string(Comparison comparison);

struct CheckRecord {
    std::string id;
    std::string suite;
    std::string anchor;  // which identity or inequality the check exercises
    Comparison comparison = Comparison::AtMost;
    double measured = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
    bool skipped = false;
    std::string note;
    nlohmann::json details = nlohmann::json::object();
    double wall_time_ms = 0.0;

    /// Signed slack; nonnegative exactly when the check passes.
    double margin() const;
    /// Derived only from measured, bound, tolerance and comparison.
    CheckStatus status() const;
};

struct InstanceDescriptor {
    std::string source;
    std::size_t ground_set_size = 0;
    std::size_t dimension = 0;
    std::vector<std::size_t> face_counts;
};

struct ReportMetadata {
    std::uint64_t seed = 42;
    std::size_t restarts = 64;
    std::string tool_version = kToolVersion;
};

struct VerificationReport {
    int schema = kReportSchema;
    InstanceDescriptor instance;
    ReportMetadata metadata;
    std::vector<CheckRecord> checks;

    bool all_passed() const;
    std::size_t count(CheckStatus status) const;
};

enum class ReportFormat { Text, Json, Csv };
ReportFormat parse_report_format(const std::string& name);

/// Full schema. Timing fields are dropped when `include_timing` is false.
nlohmann::json to_json(const VerificationReport& report, bool include_timing = true);
VerificationReport report_from_json(const nlohmann::json& doc);

std::string emit_text(const VerificationReport& report);
/// Header row plus one row per check: id,measured,bound,margin,status.
std::string emit_csv(const VerificationReport& report);
std::string emit(const VerificationReport& report, ReportFormat format, bool include_timing = true);

/// Writes to `path`, or to stdout when the path is empty or "-".
/// Throws IoError when the file cannot be written.
void write_report(const VerificationReport& report, ReportFormat format, const std::string& path,
                  bool include_timing = true);

}  // namespace hdx
