#pragma once

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "geod/dataset.hpp"

namespace geod {

struct LibsvmOptions {
  /// n_features is max(largest index seen, min_features).
  std::size_t min_features = 0;
};

namespace detail {

inline bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

inline std::optional<double> parse_real(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty() || s.front() == '+') return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<std::uint32_t> parse_index(std::string_view s) {
  std::uint32_t v = 0;
  if (s.empty()) return std::nullopt;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v == 0) return std::nullopt;
  return v;
}

}  // namespace detail

/// Reads `label idx:val idx:val ...` lines. Text after '#' is ignored, blank
/// lines are skipped, indices must be strictly increasing within a line.
/// Two distinct raw labels map to -1 (smaller) and +1 (larger), so {0, 1}
/// becomes {-1, +1}; a single distinct label maps by sign (<= 0 is -1).
inline SparseDataset parse_libsvm(std::istream& in, const LibsvmOptions& opts = {}) {
  std::vector<double> raw_labels;
  std::vector<std::size_t> offsets{0};
  std::vector<Feature> features;
  std::size_t max_index = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    if (const auto hash = rest.find('#'); hash != std::string_view::npos) {
      rest = rest.substr(0, hash);
    }

    auto next_token = [&rest]() -> std::string_view {
      std::size_t i = 0;
      while (i < rest.size() && detail::is_space(rest[i])) ++i;
      std::size_t j = i;
      while (j < rest.size() && !detail::is_space(rest[j])) ++j;
      const std::string_view tok = rest.substr(i, j - i);
      rest.remove_prefix(j);
      return tok;
    };

    std::string_view tok = next_token();
    if (tok.empty()) continue;
    const auto label = detail::parse_real(tok);
    if (!label) throw MalformedLine(line_no, "bad label '" + std::string(tok) + "'");

    std::uint32_t prev = 0;
    while (!(tok = next_token()).empty()) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw MalformedLine(line_no, "missing ':' in '" + std::string(tok) + "'");
      }
      const auto idx = detail::parse_index(tok.substr(0, colon));
      const auto val = detail::parse_real(tok.substr(colon + 1));
      if (!idx || !val) throw MalformedLine(line_no, "bad feature '" + std::string(tok) + "'");
      if (*idx <= prev) throw MalformedLine(line_no, "feature indices not increasing");
      prev = *idx;
      features.push_back({*idx, *val});
      if (*idx > max_index) max_index = *idx;
    }
    offsets.push_back(features.size());
    raw_labels.push_back(*label);
  }
  if (in.bad()) throw Error(Errc::io_error, "read failure");
  if (raw_labels.empty()) throw Error(Errc::empty_input, "no samples");

  const std::set<double> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() > 2) {
    throw Error(Errc::too_many_classes, std::to_string(distinct.size()) + " distinct labels");
  }
  std::vector<double> labels;
  labels.reserve(raw_labels.size());
  const double low = *distinct.begin();
  for (const double raw : raw_labels) {
    if (distinct.size() == 2) {
      labels.push_back(raw == low ? -1.0 : 1.0);
    } else {
      labels.push_back(raw > 0.0 ? 1.0 : -1.0);
    }
  }
  return SparseDataset(std::max(max_index, opts.min_features), std::move(offsets),
                       std::move(features), std::move(labels));
}

inline SparseDataset load_libsvm(const std::string& path, const LibsvmOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  return parse_libsvm(in, opts);
}

/// Labels as +1 / -1, values in shortest round-trip form.
inline void write_libsvm(std::ostream& out, const SparseDataset& data) {
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    out << (data.label(i) > 0.0 ? "+1" : "-1");
    for (const Feature& f : data.row(i)) out << fmt::format(" {}:{}", f.index, f.value);
    out << '\n';
  }
  if (!out) throw Error(Errc::io_error, "write failure");
}

inline void save_libsvm(const std::string& path, const SparseDataset& data) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot open " + path + " for writing");
  write_libsvm(out, data);
}

}  // namespace geod
