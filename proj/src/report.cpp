#include "hdx/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "hdx/errors.hpp"

namespace hdx {

using nlohmann::json;

std::string to_string(CheckStatus status) {
    switch (status) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Skipped: return "skipped";
    }
    return "unknown";
}

std::string to_string(Comparison comparison) {
    return comparison == Comparison::AtMost ? "<=" : ">=";
}

double CheckRecord::margin() const {
    if (comparison == Comparison::AtMost) return bound + tolerance - measured;
    return measured - (bound - tolerance);
}

CheckStatus CheckRecord::status() const {
    if (skipped) return CheckStatus::Skipped;
    // NaN margins fail.
    return margin() >= 0.0 ? CheckStatus::Pass : CheckStatus::Fail;
}

bool VerificationReport::all_passed() const { return count(CheckStatus::Fail) == 0; }

std::size_t VerificationReport::count(CheckStatus status) const {
    return static_cast<std::size_t>(std::count_if(
        checks.begin(), checks.end(), [&](const CheckRecord& c) { return c.status() == status; }));
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "text") return ReportFormat::Text;
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw InvalidParameterError("unknown report format '" + name + "' (text, json or csv)");
}

namespace {

// JSON has no infinities or NaN; encode them as strings.
json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double read_number(const json& v) {
    if (v.is_number()) return v.get<double>();
    const std::string s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

std::string format_number(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

}  // namespace

json to_json(const VerificationReport& report, bool include_timing) {
    json doc;
    doc["schema"] = report.schema;
    doc["instance"] = {{"source", report.instance.source},
                       {"ground_set_size", report.instance.ground_set_size},
                       {"d", report.instance.dimension},
                       {"face_counts", report.instance.face_counts}};
    doc["metadata"] = {{"seed", report.metadata.seed},
                       {"restarts", report.metadata.restarts},
                       {"tool_version", report.metadata.tool_version},
                       {"estimate_direction", "upper"}};
    json checks = json::array();
    for (const CheckRecord& c : report.checks) {
        json item = {{"id", c.id},
                     {"suite", c.suite},
                     {"anchor", c.anchor},
                     {"comparison", to_string(c.comparison)},
                     {"measured", number(c.measured)},
                     {"bound", number(c.bound)},
                     {"tolerance", number(c.tolerance)},
                     {"margin", number(c.margin())},
                     {"status", to_string(c.status())},
                     {"skipped", c.skipped},
                     {"note", c.note},
                     {"details", c.details}};
        if (include_timing) item["wall_time_ms"] = c.wall_time_ms;
        checks.push_back(std::move(item));
    }
    doc["checks"] = std::move(checks);
    doc["summary"] = {{"pass", report.count(CheckStatus::Pass)},
                      {"fail", report.count(CheckStatus::Fail)},
                      {"skipped", report.count(CheckStatus::Skipped)}};
    return doc;
}

VerificationReport report_from_json(const json& doc) {
    VerificationReport r;
    r.schema = doc.at("schema").get<int>();
    const json& inst = doc.at("instance");
    r.instance.source = inst.at("source").get<std::string>();
    r.instance.ground_set_size = inst.at("ground_set_size").get<std::size_t>();
    r.instance.dimension = inst.at("d").get<std::size_t>();
    r.instance.face_counts = inst.at("face_counts").get<std::vector<std::size_t>>();
    const json& meta = doc.at("metadata");
    r.metadata.seed = meta.at("seed").get<std::uint64_t>();
    r.metadata.restarts = meta.at("restarts").get<std::size_t>();
    r.metadata.tool_version = meta.at("tool_version").get<std::string>();
    for (const json& item : doc.at("checks")) {
        CheckRecord c;
        c.id = item.at("id").get<std::string>();
        c.suite = item.at("suite").get<std::string>();
        c.anchor = item.at("anchor").get<std::string>();
        c.comparison = item.at("comparison").get<std::string>() == "<=" ? Comparison::AtMost
                                                                        : Comparison::AtLeast;
        c.measured = read_number(item.at("measured"));
        c.bound = read_number(item.at("bound"));
        c.tolerance = read_number(item.at("tolerance"));
        c.skipped = item.at("skipped").get<bool>();
        c.note = item.at("note").get<std::string>();
        c.details = item.at("details");
        if (item.contains("wall_time_ms")) c.wall_time_ms = item["wall_time_ms"].get<double>();
        r.checks.push_back(std::move(c));
    }
    return r;
}

std::string emit_text(const VerificationReport& report) {
    std::ostringstream os;
    os << "instance: " << report.instance.source << "  n=" << report.instance.ground_set_size
       << "  d=" << report.instance.dimension << "  faces=[";
    for (std::size_t i = 0; i < report.instance.face_counts.size(); ++i)
        os << (i ? "," : "") << report.instance.face_counts[i];
    os << "]\n";
    os << "seed=" << report.metadata.seed << "  restarts=" << report.metadata.restarts << "\n\n";

    std::size_t id_width = 5;
    for (const CheckRecord& c : report.checks) id_width = std::max(id_width, c.id.size());
    os << std::left << std::setw(static_cast<int>(id_width)) << "check" << "  " << std::setw(8)
       << "status" << std::right << std::setw(18) << "measured" << "  " << "cmp" << std::setw(18)
       << "bound" << "  " << std::setw(16) << "margin" << "\n";
    for (const CheckRecord& c : report.checks) {
        os << std::left << std::setw(static_cast<int>(id_width)) << c.id << "  " << std::setw(8)
           << to_string(c.status()) << std::right << std::setw(18) << format_number(c.measured)
           << "  " << std::setw(3) << to_string(c.comparison) << std::setw(18)
           << format_number(c.bound) << "  " << std::setw(16) << format_number(c.margin()) << "\n";
        if (c.status() == CheckStatus::Fail) os << "    anchor: " << c.anchor << "\n";
        if (!c.note.empty() && c.status() != CheckStatus::Pass) os << "    note: " << c.note << "\n";
    }
    os << "\n"
       << report.count(CheckStatus::Pass) << " passed, " << report.count(CheckStatus::Fail)
       << " failed, " << report.count(CheckStatus::Skipped) << " skipped\n";
    return os.str();
}

std::string emit_csv(const VerificationReport& report) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "id,measured,bound,margin,status\n";
    for (const CheckRecord& c : report.checks)
        os << c.id << ',' << c.measured << ',' << c.bound << ',' << c.margin() << ','
           << to_string(c.status()) << '\n';
    return os.str();
}

std::string emit(const VerificationReport& report, ReportFormat format, bool include_timing) {
    switch (format) {
        case ReportFormat::Text: return emit_text(report);
        case ReportFormat::Json: return to_json(report, include_timing).dump(2) + "\n";
        case ReportFormat::Csv: return emit_csv(report);
    }
    return {};
}

void write_report(const VerificationReport& report, ReportFormat format, const std::string& path,
                  bool include_timing) {
    const std::string body = emit(report, format, include_timing);
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << body;
    if (!out) throw IoError("write to " + path + " failed");
}

}  // namespace hdx
