#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace torus_hypo::report {

inline constexpr int kFormatVersion = 1;

/// Sorted keys, two-space indent, doubles as %.17g, non-finite doubles as null.
std::string canonical_dump(const nlohmann::json& value);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex_digest(std::string_view bytes);

struct Report {
  std::string command;
  std::vector<std::string> args;
  /// Digest over the canonical form of every input document, in order.
  std::string input_digest;
  nlohmann::json result = nlohmann::json::object();
  /// Seconds; written only when set.
  double runtime = -1;
};

std::string input_digest(const std::vector<nlohmann::json>& inputs);
nlohmann::json to_json(const Report& r);

}  // namespace torus_hypo::report
