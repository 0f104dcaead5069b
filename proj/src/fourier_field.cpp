#include "torus_hypo/fourier_field.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <istream>
#include <ostream>

#include "torus_hypo/error.hpp"

namespace torus_hypo {

namespace {

constexpr char kMagic[8] = {'T', 'H', 'F', 'F', 'B', 'I', 'N', '1'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::uint64_t bits = 0;
  if constexpr (std::is_same_v<T, double>) {
    std::memcpy(&bits, &value, sizeof(double));
  } else {
    bits = static_cast<std::uint64_t>(value);
  }
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffu);
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
  if (!in) fail(ErrorKind::InvalidInput, "truncated binary field");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  if constexpr (std::is_same_v<T, double>) {
    double v;
    std::memcpy(&v, &bits, sizeof(double));
    return v;
  } else {
    return static_cast<T>(bits);
  }
}

}  // namespace

const MultiTrig* FourierField::find(std::int64_t xi) const {
  auto it = std::lower_bound(ladder.begin(), ladder.end(), xi);
  if (it == ladder.end() || *it != xi) return nullptr;
  return &blocks[static_cast<std::size_t>(it - ladder.begin())];
}

MultiTrig* FourierField::find(std::int64_t xi) {
  auto it = std::lower_bound(ladder.begin(), ladder.end(), xi);
  if (it == ladder.end() || *it != xi) return nullptr;
  return &blocks[static_cast<std::size_t>(it - ladder.begin())];
}

void FourierField::set(std::int64_t xi, MultiTrig block) {
  if (block.dims() != dims) fail(ErrorKind::GridMismatch, "block dimension differs from field");
  auto it = std::lower_bound(ladder.begin(), ladder.end(), xi);
  std::size_t pos = static_cast<std::size_t>(it - ladder.begin());
  if (it != ladder.end() && *it == xi) {
    blocks[pos] = std::move(block);
    return;
  }
  ladder.insert(it, xi);
  blocks.insert(blocks.begin() + static_cast<std::ptrdiff_t>(pos), std::move(block));
}

void FourierField::validate() const {
  if (ladder.size() != blocks.size()) fail(ErrorKind::InvalidInput, "ladder and blocks differ in length");
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i] <= ladder[i - 1]) fail(ErrorKind::InvalidInput, "ladder not strictly increasing");
  }
  for (const auto& b : blocks) {
    if (b.dims() != dims) fail(ErrorKind::GridMismatch, "block dimension differs from field");
  }
  if (grid < 4 || (grid & (grid - 1)) != 0) fail(ErrorKind::GridMismatch, "grid must be a power of two >= 4");
}

std::vector<int> FourierField::max_degrees() const {
  std::vector<int> deg(dims, 0);
  for (const auto& b : blocks) {
    for (std::size_t j = 0; j < dims; ++j) deg[j] = std::max(deg[j], b.degrees()[j]);
  }
  return deg;
}

FourierField zero_like(const FourierField& field) {
  FourierField out;
  out.dims = field.dims;
  out.grid = field.grid;
  out.ladder = field.ladder;
  for (const auto& b : field.blocks) out.blocks.emplace_back(b.degrees());
  return out;
}

nlohmann::json to_json(const FourierField& field) {
  nlohmann::json j;
  j["format"] = "torus-hypo/fourier-field";
  j["version"] = 1;
  j["n"] = field.dims;
  j["grid"] = field.grid;
  j["xi_min"] = field.xi_min();
  j["xi_max"] = field.xi_max();
  nlohmann::json blocks = nlohmann::json::array();
  for (std::size_t i = 0; i < field.size(); ++i) {
    const auto& b = field.blocks[i];
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (auto c : b.data()) {
      re.push_back(c.real());
      im.push_back(c.imag());
    }
    blocks.push_back({{"xi", field.ladder[i]}, {"degree", b.degrees()}, {"re", re}, {"im", im}});
  }
  j["blocks"] = blocks;
  return j;
}

FourierField field_from_json(const nlohmann::json& j) {
  try {
    FourierField f;
    f.dims = j.at("n").get<std::size_t>();
    f.grid = j.value("grid", 128);
    for (const auto& b : j.at("blocks")) {
      std::vector<int> deg = b.at("degree").get<std::vector<int>>();
      if (deg.size() != f.dims) fail(ErrorKind::InvalidInput, "block degree length differs from n");
      MultiTrig block(deg);
      const auto& re = b.at("re");
      const auto& im = b.contains("im") ? b.at("im") : nlohmann::json::array();
      if (re.size() != block.size() || (!im.empty() && im.size() != block.size())) {
        fail(ErrorKind::InvalidInput, "block coefficient count does not match degree");
      }
      for (std::size_t k = 0; k < block.size(); ++k) {
        block.data()[k] = Complex(re[k].get<double>(), im.empty() ? 0.0 : im[k].get<double>());
      }
      std::int64_t xi = b.at("xi").get<std::int64_t>();
      if (f.find(xi)) fail(ErrorKind::InvalidInput, "duplicate frequency in field");
      f.set(xi, std::move(block));
    }
    f.validate();
    return f;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("malformed field JSON: ") + e.what());
  }
}

void write_binary(const FourierField& field, std::ostream& out) {
  field.validate();
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.dims));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid));
  put_le<std::int64_t>(out, field.xi_min());
  put_le<std::int64_t>(out, field.xi_max());
  put_le<std::uint64_t>(out, field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const auto& b = field.blocks[i];
    put_le<std::int64_t>(out, field.ladder[i]);
    for (int d : b.degrees()) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    for (auto c : b.data()) {
      put_le<double>(out, c.real());
      put_le<double>(out, c.imag());
    }
  }
}

FourierField read_binary(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) fail(ErrorKind::InvalidInput, "not a binary field");
  FourierField f;
  f.dims = get_le<std::uint32_t>(in);
  f.grid = static_cast<int>(get_le<std::uint32_t>(in));
  get_le<std::int64_t>(in);
  get_le<std::int64_t>(in);
  std::uint64_t count = get_le<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::int64_t xi = get_le<std::int64_t>(in);
    std::vector<int> deg(f.dims);
    for (auto& d : deg) d = static_cast<int>(get_le<std::uint32_t>(in));
    MultiTrig block(deg);
    for (auto& c : block.data()) {
      double re = get_le<double>(in);
      double im = get_le<double>(in);
      c = Complex(re, im);
    }
    f.set(xi, std::move(block));
  }
  f.validate();
  return f;
}

}  // namespace torus_hypo
