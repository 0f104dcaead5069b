#include "torus_hypo/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace torus_hypo::report {

namespace {

void indent(std::string& out, int depth) {
  out += '\n';
  out.append(static_cast<std::size_t>(2 * depth), ' ');
}

void write(const nlohmann::json& v, std::string& out, int depth) {
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        indent(out, depth + 1);
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        write(it.value(), out, depth + 1);
      }
      indent(out, depth);
      out += '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      bool scalars = std::all_of(v.begin(), v.end(), [](const nlohmann::json& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += scalars ? ", " : ",";
        first = false;
        if (!scalars) indent(out, depth + 1);
        write(e, out, depth + 1);
      }
      if (!scalars) indent(out, depth);
      out += ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>() == 0 ? 0.0 : v.get<double>();
      if (!std::isfinite(d)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out += buf;
      return;
    }
    default:
      out += v.dump();
  }
}

}  // namespace

std::string canonical_dump(const nlohmann::json& value) {
  std::string out;
  write(value, out, 0);
  out += '\n';
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string input_digest(const std::vector<nlohmann::json>& inputs) {
  std::string all;
  for (const auto& j : inputs) all += canonical_dump(j);
  return "fnv1a64:" + hex_digest(all);
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json j = {{"format_version", kFormatVersion},
                      {"command", r.command},
                      {"args", r.args},
                      {"input_digest", r.input_digest},
                      {"result", r.result}};
  if (r.runtime >= 0) j["runtime_seconds"] = r.runtime;
  return j;
}

}  // namespace torus_hypo::report
