#pragma once

#include <string>
#include <string_view>

#include "hdx/complex.hpp"

namespace hdx {

/// Parses the instance format
///   {"d": int, "ground_set_size": int,
///    "top_faces": [{"elements": [int, ...], "weight": float}, ...]}
/// `source` names the input in error messages. Throws ParseError for
/// malformed JSON or schema violations, and the build_from_top_faces errors
/// for structural ones.
PureSimplicialComplex parse_instance(std::string_view text, const std::string& source = "<input>",
                                     const BuildOptions& options = {});

PureSimplicialComplex load_instance(const std::string& path, const BuildOptions& options = {});

/// Serializes the top level of `complex` in the same format.
std::string dump_instance(const PureSimplicialComplex& complex);

/// Builds an instance from a generator spec such as
///   complete:n=6,d=4
///   matroid:edges=0-1;1-2;0-2
///   random:n=8,d=3,density=0.5,seed=7
PureSimplicialComplex generate_instance(std::string_view spec, const BuildOptions& options = {});

}  // namespace hdx
