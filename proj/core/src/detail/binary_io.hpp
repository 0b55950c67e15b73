#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "romvel/error.hpp"

namespace romvel::detail {

inline std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

inline void write_f64(std::ostream& os, const double* data, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits;
    std::memcpy(&bits, data + i, sizeof bits);
    bits = to_little(bits);
    os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
}

inline void read_f64(std::istream& is, double* data, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t bits;
    is.read(reinterpret_cast<char*>(&bits), sizeof bits);
    if (!is) throw IoError("binary payload is shorter than its header declares");
    bits = to_little(bits);
    std::memcpy(data + i, &bits, sizeof bits);
  }
}

inline std::filesystem::path with_ext(const std::filesystem::path& stem, const char* ext) {
  std::filesystem::path p = stem;
  p += ext;
  return p;
}

inline std::ofstream open_out(const std::filesystem::path& p, bool binary) {
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream os(p, binary ? std::ios::binary : std::ios::out);
  if (!os) throw IoError("cannot open '" + p.string() + "' for writing");
  return os;
}

inline std::ifstream open_in(const std::filesystem::path& p, bool binary) {
  std::ifstream is(p, binary ? std::ios::binary : std::ios::in);
  if (!is) throw IoError("cannot open '" + p.string() + "' for reading");
  return is;
}

inline nlohmann::json read_json(const std::filesystem::path& p) {
  std::ifstream is = open_in(p, false);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed JSON in '" + p.string() + "': " + e.what());
  }
}

inline void write_json(const std::filesystem::path& p, const nlohmann::json& j) {
  std::ofstream os = open_out(p, false);
  os << j.dump(2) << '\n';
}

}  // namespace romvel::detail
