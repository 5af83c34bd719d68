#include "hdx/instance_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "hdx/errors.hpp"

namespace hdx {

using nlohmann::json;

namespace {

std::size_t require_count(const json& node, const char* key, const std::string& source) {
    if (!node.contains(key)) throw ParseError(source + ": missing field \"" + key + "\"");
    const json& v = node.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ParseError(source + ": field \"" + key + "\" must be a nonnegative integer");
    return v.get<std::size_t>();
}

std::size_t parse_count(std::string_view text, std::string_view what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError("generator: cannot parse " + std::string(what) + " from '" +
                         std::string(text) + "'");
    return value;
}

double parse_real(std::string_view text, std::string_view what) {
    try {
        std::size_t used = 0;
        const std::string s(text);
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("generator: cannot parse " + std::string(what) + " from '" +
                         std::string(text) + "'");
    }
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

PureSimplicialComplex parse_instance(std::string_view text, const std::string& source,
                                     const BuildOptions& options) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError(source + ": top-level value must be an object");

    const std::size_t d = require_count(doc, "d", source);
    const std::size_t n = require_count(doc, "ground_set_size", source);
    if (!doc.contains("top_faces") || !doc["top_faces"].is_array())
        throw ParseError(source + ": \"top_faces\" must be an array");

    std::vector<WeightedFace> top;
    std::size_t position = 0;
    for (const json& entry : doc["top_faces"]) {
        const std::string where = source + ": top_faces[" + std::to_string(position++) + "]";
        if (!entry.is_object() || !entry.contains("elements") || !entry["elements"].is_array())
            throw ParseError(where + ": expected {\"elements\": [...], \"weight\": ...}");
        std::vector<Element> elements;
        for (const json& e : entry["elements"]) {
            if (!e.is_number_integer() || e.get<long long>() < 0)
                throw ParseError(where + ": elements must be nonnegative integers");
            const auto value = e.get<std::size_t>();
            if (value >= n)
                throw ParseError(where + ": element " + std::to_string(value) +
                                 " outside ground set of size " + std::to_string(n));
            elements.push_back(static_cast<Element>(value));
        }
        if (elements.size() != d)
            throw PurityError(where + ": face has cardinality " + std::to_string(elements.size()) +
                              ", expected " + std::to_string(d));
        double weight = 1.0;
        if (entry.contains("weight")) {
            if (!entry["weight"].is_number()) throw ParseError(where + ": weight must be a number");
            weight = entry["weight"].get<double>();
        }
        if (!std::isfinite(weight) || weight <= 0.0)
            throw ParseError(where + ": weight must be finite and positive");
        try {
            top.push_back({Face(std::move(elements)), weight});
        } catch (const InvalidParameterError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    return build_from_top_faces(d, std::move(top), n, options);
}

PureSimplicialComplex load_instance(const std::string& path, const BuildOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_instance(buffer.str(), path, options);
}

std::string dump_instance(const PureSimplicialComplex& complex) {
    const std::size_t d = complex.dimension();
    json doc;
    doc["d"] = d;
    doc["ground_set_size"] = complex.ground_set_size();
    json faces = json::array();
    const auto& top = complex.faces(d);
    const auto& w = complex.weights(d);
    for (std::size_t t = 0; t < top.size(); ++t) {
        std::vector<Element> elems(top[t].elements().begin(), top[t].elements().end());
        faces.push_back({{"elements", elems}, {"weight", w[t]}});
    }
    doc["top_faces"] = std::move(faces);
    return doc.dump(2);
}

PureSimplicialComplex generate_instance(std::string_view spec, const BuildOptions& options) {
    const auto colon = spec.find(':');
    const std::string_view kind = spec.substr(0, colon);
    std::map<std::string, std::string, std::less<>> params;
    if (colon != std::string_view::npos && colon + 1 < spec.size()) {
        for (auto item : split(spec.substr(colon + 1), ',')) {
            const auto eq = item.find('=');
            if (eq == std::string_view::npos)
                throw ParseError("generator: expected key=value, got '" + std::string(item) + "'");
            params.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
        }
    }
    auto get = [&](std::string_view key) -> const std::string& {
        auto it = params.find(key);
        if (it == params.end())
            throw ParseError("generator '" + std::string(kind) + "' needs parameter " +
                             std::string(key));
        return it->second;
    };

    if (kind == "complete")
        return generate_complete_complex(parse_count(get("n"), "n"), parse_count(get("d"), "d"),
                                         options);
    if (kind == "matroid") {
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (auto e : split(get("edges"), ';')) {
            const auto dash = e.find('-');
            if (dash == std::string_view::npos)
                throw ParseError("generator: edge '" + std::string(e) + "' is not u-v");
            edges.emplace_back(parse_count(e.substr(0, dash), "vertex"),
                               parse_count(e.substr(dash + 1), "vertex"));
        }
        return generate_graphic_matroid_bases(edges, options);
    }
    if (kind == "random") {
        const double density = params.count("density") ? parse_real(get("density"), "density") : 0.5;
        const std::uint64_t seed = params.count("seed") ? parse_count(get("seed"), "seed") : 0;
        return generate_random_complex(parse_count(get("n"), "n"), parse_count(get("d"), "d"),
                                       density, seed, options);
    }
    throw ParseError("unknown generator '" + std::string(kind) +
                     "' (expected complete, matroid or random)");
}

}  // namespace hdx
