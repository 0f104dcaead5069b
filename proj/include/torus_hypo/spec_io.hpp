#pragma once

#include <string>

#include <json.hpp>

#include "torus_hypo/system.hpp"
#include "torus_hypo/trig_poly.hpp"

namespace torus_hypo {

/// {"const": "1/2", "cos": ["0", "1/3"], "sin": ["1"]}, {"zero": true}; numbers give a float polynomial.
TrigPoly trig_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrigPoly& p);

system::SystemSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const system::SystemSpec& spec);

system::VectorClaim claim_from_json(const nlohmann::json& j);
nlohmann::json to_json(const system::VectorClaim& claim);

nlohmann::json to_json(const system::Coefficient& a);

nlohmann::json read_json_file(const std::string& path);

}  // namespace torus_hypo
