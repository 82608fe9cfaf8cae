#pragma once

#include <string>

#include <json.hpp>

#include "rp3kh/invariants.hpp"

namespace rp3kh {

using Json = nlohmann::ordered_json;

Json profile_json(const RankProfile& p);
Json report_json(const InvariantReport& r);
Json resolution_json(const ResolutionCube& cube, Vertex v);
Json cube_json(const ResolutionCube& cube);
Json complex_json(const GradedComplex& c);

std::string report_human(const InvariantReport& r);

}  // namespace rp3kh
