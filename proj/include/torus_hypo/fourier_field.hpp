#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "torus_hypo/multi_trig.hpp"

namespace torus_hypo {

/// Partial Fourier data u^(t, xi): one trig block in t per x-frequency on a sorted ladder.
struct FourierField {
  std::size_t dims = 1;
  int grid = 128;
  std::vector<std::int64_t> ladder;
  std::vector<MultiTrig> blocks;

  std::size_t size() const { return ladder.size(); }
  std::int64_t xi_min() const { return ladder.empty() ? 0 : ladder.front(); }
  std::int64_t xi_max() const { return ladder.empty() ? 0 : ladder.back(); }
  const MultiTrig* find(std::int64_t xi) const;
  MultiTrig* find(std::int64_t xi);
  /// Inserts or replaces the block at xi, keeping the ladder sorted.
  void set(std::int64_t xi, MultiTrig block);
  /// Checks sorted, unique ladder and matching block dimensions.
  void validate() const;
  /// Largest coefficient degree per variable.
  std::vector<int> max_degrees() const;
};

FourierField zero_like(const FourierField& field);

nlohmann::json to_json(const FourierField& field);
FourierField field_from_json(const nlohmann::json& j);

/// Little-endian binary layout, see README.
void write_binary(const FourierField& field, std::ostream& out);
FourierField read_binary(std::istream& in);

}  // namespace torus_hypo
