#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "chac/band_matrix.hpp"
#include "chac/dendrogram.hpp"
#include "chac/error.hpp"
#include "chac/similarity.hpp"

namespace chac::io {

/// Heights in merge tables: 12 significant digits.
inline std::string format_height(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Shortest-safe round-trip representation of a double.
inline std::string format_exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < s.size()) {
    while (k < s.size() && (s[k] == ' ' || s[k] == '\t' || s[k] == '\r')) ++k;
    const std::size_t b = k;
    while (k < s.size() && s[k] != ' ' && s[k] != '\t' && s[k] != '\r') ++k;
    if (k > b) out.push_back(s.substr(b, k - b));
  }
  return out;
}

inline std::vector<std::string_view> split_char(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t b = 0;
  for (;;) {
    const auto e = s.find(sep, b);
    out.push_back(trim(s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b)));
    if (e == std::string_view::npos) break;
    b = e + 1;
  }
  return out;
}

[[noreturn]] inline void fail(std::size_t line, const std::string& what) {
  throw input_error("line " + std::to_string(line) + ": " + what);
}

inline double parse_double(std::string_view tok, std::size_t line) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    fail(line, "not a number: '" + std::string(tok) + "'");
  }
  return v;
}

template <typename Int>
inline Int parse_int(std::string_view tok, std::size_t line) {
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    fail(line, "not an integer: '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace detail

// --- COO: "i j value" per line, 1-based, '#' comments -----------------------

struct CooData {
  std::vector<Triplet> triplets;
  std::size_t max_index = 0;
};

inline CooData read_coo(std::istream& in) {
  CooData out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto tok = detail::split_ws(s);
    if (tok.size() != 3) detail::fail(n, "expected 'i j value'");
    Triplet t{detail::parse_int<std::size_t>(tok[0], n), detail::parse_int<std::size_t>(tok[1], n),
              detail::parse_double(tok[2], n)};
    if (t.i == 0 || t.j == 0) detail::fail(n, "indices are 1-based");
    out.max_index = std::max({out.max_index, t.i, t.j});
    out.triplets.push_back(t);
  }
  return out;
}

inline void write_coo(std::ostream& out, const BandMatrix& m) {
  for (const auto& t : to_coo(m)) {
    out << t.i << ' ' << t.j << ' ' << format_exact(t.value) << '\n';
  }
}

// --- dense CSV: p rows of p comma-separated numbers --------------------------

inline std::vector<std::vector<double>> read_dense_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto s = detail::trim(line);
    if (s.empty()) continue;
    std::vector<double> row;
    for (const auto tok : detail::split_char(s, ',')) row.push_back(detail::parse_double(tok, n));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw input_error("dense matrix file is empty");
  return rows;
}

inline void write_dense_csv(std::ostream& out, const std::vector<std::vector<double>>& rows) {
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j > 0) out << ',';
      out << format_exact(r[j]);
    }
    out << '\n';
  }
}

// --- genotype CSV: samples x loci, 0/1/2 or NA --------------------------------

inline GenotypeMatrix read_genotype_csv(std::istream& in) {
  std::vector<std::int8_t> dosages;
  std::size_t loci = 0;
  std::size_t samples = 0;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto s = detail::trim(line);
    if (s.empty()) continue;
    const auto tok = detail::split_char(s, ',');
    if (samples == 0) loci = tok.size();
    if (tok.size() != loci) detail::fail(n, "inconsistent number of loci");
    for (const auto t : tok) {
      if (t == "NA") {
        dosages.push_back(GenotypeMatrix::kMissing);
      } else if (t == "0" || t == "1" || t == "2") {
        dosages.push_back(static_cast<std::int8_t>(t[0] - '0'));
      } else {
        detail::fail(n, "genotype must be 0, 1, 2 or NA, got '" + std::string(t) + "'");
      }
    }
    ++samples;
  }
  if (samples == 0) throw input_error("genotype file is empty");
  return GenotypeMatrix(samples, loci, std::move(dosages));
}

// --- merge table: "left right height" ------------------------------------------

inline void write_merges(std::ostream& out, const Dendrogram& d) {
  for (const auto& m : d.merges()) {
    out << m.left << ' ' << m.right << ' ' << format_height(m.height) << '\n';
  }
}

inline void write_heights(std::ostream& out, const Dendrogram& d) {
  for (const auto& m : d.merges()) out << format_height(m.height) << '\n';
}

/// Reads a merge table; the number of objects is one more than the number
/// of merges.
inline Dendrogram read_merges(std::istream& in) {
  std::vector<MergeRecord> records;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto tok = detail::split_ws(s);
    if (tok.size() != 3) detail::fail(n, "expected 'left right height'");
    MergeRecord r{detail::parse_int<NodeRef>(tok[0], n), detail::parse_int<NodeRef>(tok[1], n),
                  detail::parse_double(tok[2], n)};
    if (!std::isfinite(r.height)) detail::fail(n, "non-finite height");
    records.push_back(r);
  }
  return Dendrogram(records.size() + 1, records);
}

// --- labels: "index label" -----------------------------------------------------

inline void write_labels(std::ostream& out, const Partition& part) {
  for (std::size_t i = 0; i < part.labels.size(); ++i) {
    out << i + 1 << ' ' << part.labels[i] << '\n';
  }
}

inline Partition read_labels(std::istream& in) {
  Partition out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto tok = detail::split_ws(s);
    if (tok.size() != 2) detail::fail(n, "expected 'index label'");
    const auto idx = detail::parse_int<std::size_t>(tok[0], n);
    if (idx != out.labels.size() + 1) detail::fail(n, "indices must run 1, 2, ... in order");
    out.labels.push_back(detail::parse_int<std::size_t>(tok[1], n));
  }
  return out;
}

// --- manifest: flat key=value --------------------------------------------------

using Manifest = std::map<std::string, std::string>;

inline void write_manifest(std::ostream& out, const Manifest& m) {
  for (const auto& [k, v] : m) out << k << '=' << v << '\n';
}

inline Manifest read_manifest(std::istream& in) {
  Manifest out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos || eq == 0) detail::fail(n, "expected key=value");
    out[std::string(detail::trim(s.substr(0, eq)))] = std::string(detail::trim(s.substr(eq + 1)));
  }
  return out;
}

}  // namespace chac::io
