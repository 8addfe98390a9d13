#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "seba/error.hpp"
#include "seba/matrix.hpp"

namespace seba {

// Shared matrix file formats:
//   (a) plain CSV, one matrix row per line, no header;
//   (b) binary "SEBA1": magic "SEBA1\0", little-endian u64 rows, u64 cols,
//       then rows*cols little-endian f64 in column-major order.
// Readers reject NaN/Inf.

namespace detail {

inline void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline std::uint64_t get_u64_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

inline void put_f64_le(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64_le(out, bits);
}

inline double get_f64_le(const unsigned char* p) {
  const std::uint64_t bits = get_u64_le(p);
  double d;
  std::memcpy(&d, &bits, 8);
  return d;
}

}  // namespace detail

inline constexpr char kSeba1Magic[6] = {'S', 'E', 'B', 'A', '1', '\0'};

// Shortest decimal that round-trips.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IoError("write failed: " + path);
}

inline std::string read_binary_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_seba1(const std::string& path, const DenseMatrix& m) {
  std::string out;
  out.reserve(22 + 8 * m.rows() * m.cols());
  out.append(kSeba1Magic, 6);
  detail::put_u64_le(out, m.rows());
  detail::put_u64_le(out, m.cols());
  for (double v : m.data()) detail::put_f64_le(out, v);
  write_text_file(path, out);
}

inline DenseMatrix read_seba1(const std::string& path) {
  const std::string raw = read_binary_file(path);
  if (raw.size() < 22 || std::memcmp(raw.data(), kSeba1Magic, 6) != 0)
    throw IoError("not a SEBA1 file: " + path);
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  const std::uint64_t rows = detail::get_u64_le(p + 6);
  const std::uint64_t cols = detail::get_u64_le(p + 14);
  if (rows == 0 || cols == 0 || rows > (1u << 30) || cols > (1u << 30) ||
      raw.size() != 22 + 8 * rows * cols)
    throw IoError("corrupt SEBA1 header: " + path);
  std::vector<double> data(rows * cols);
  for (std::size_t k = 0; k < data.size(); ++k) data[k] = detail::get_f64_le(p + 22 + 8 * k);
  try {
    return DenseMatrix(rows, cols, std::move(data));
  } catch (const InvalidArgument& e) {
    throw IoError(path + ": " + e.what());
  }
}

inline void write_csv_matrix(const std::string& path, const DenseMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out.push_back(',');
      out += format_double(m(i, j));
    }
    out.push_back('\n');
  }
  write_text_file(path, out);
}

inline DenseMatrix read_csv_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const std::string tok = line.substr(pos, comma - pos);
      try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        while (used < tok.size() && (tok[used] == ' ' || tok[used] == '\t')) ++used;
        if (used != tok.size()) throw std::invalid_argument(tok);
        row.push_back(v);
      } catch (const std::exception&) {
        throw IoError(path + ": bad number '" + tok + "'");
      }
      pos = comma + 1;
      if (comma == line.size()) break;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError(path + ": ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(path + ": empty matrix");
  DenseMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  if (!m.all_finite()) throw IoError(path + ": matrix contains NaN/Inf");
  return m;
}

// Dispatch on the magic bytes so either format is accepted anywhere.
inline DenseMatrix read_matrix(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  char head[6] = {};
  f.read(head, 6);
  if (f.gcount() == 6 && std::memcmp(head, kSeba1Magic, 6) == 0) return read_seba1(path);
  return read_csv_matrix(path);
}

inline std::vector<double> read_value_column(const std::string& path) {
  const DenseMatrix m = read_matrix(path);
  if (m.cols() != 1) throw IoError(path + ": expected a single column");
  std::vector<double> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, 0);
  return v;
}

inline void write_value_column(const std::string& path, const std::vector<double>& v) {
  std::string out;
  for (double x : v) {
    out += format_double(x);
    out.push_back('\n');
  }
  write_text_file(path, out);
}

// ---- key=value sidecars -----------------------------------------------------

using KvPairs = std::vector<std::pair<std::string, std::string>>;

inline void write_kv(const std::string& path, const KvPairs& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out.push_back('=');
    out += v;
    out.push_back('\n');
  }
  write_text_file(path, out);
}

inline KvPairs read_kv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open: " + path);
  KvPairs kv;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw IoError(path + ": bad key=value line: " + line);
    kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return kv;
}

inline std::string kv_get(const KvPairs& kv, const std::string& key) {
  for (const auto& [k, v] : kv)
    if (k == key) return v;
  throw IoError("missing key: " + key);
}

inline std::string kv_get_or(const KvPairs& kv, const std::string& key,
                             const std::string& fallback) {
  for (const auto& [k, v] : kv)
    if (k == key) return v;
  return fallback;
}

}  // namespace seba
