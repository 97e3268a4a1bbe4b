#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geod/error.hpp"

namespace geod {

/// One nonzero of a sample. `index` is 1-based, as in LIBSVM files.
struct Feature {
  std::uint32_t index = 0;
  double value = 0.0;

  friend bool operator==(const Feature&, const Feature&) = default;
};

/// Binary-labelled sparse samples in CSR layout. Labels are +1 or -1; the
/// feature indices of each row are strictly increasing and lie in
/// [1, n_features].
class SparseDataset {
 public:
  SparseDataset() = default;

  SparseDataset(std::size_t n_features, std::vector<std::size_t> row_offsets,
                std::vector<Feature> features, std::vector<double> labels)
      : n_features_(n_features),
        row_offsets_(std::move(row_offsets)),
        features_(std::move(features)),
        labels_(std::move(labels)) {
    validate();
  }

  [[nodiscard]] std::size_t n_samples() const noexcept { return labels_.size(); }
  [[nodiscard]] std::size_t n_features() const noexcept { return n_features_; }
  [[nodiscard]] std::size_t nnz() const noexcept { return features_.size(); }
  [[nodiscard]] double label(std::size_t i) const { return labels_.at(i); }
  [[nodiscard]] std::span<const double> labels() const noexcept { return labels_; }

  [[nodiscard]] std::span<const Feature> row(std::size_t i) const {
    const std::size_t begin = row_offsets_.at(i);
    const std::size_t end = row_offsets_.at(i + 1);
    return std::span<const Feature>(features_).subspan(begin, end - begin);
  }

  /// Same data with n_features raised to at least `n` (never lowered).
  [[nodiscard]] SparseDataset with_min_features(std::size_t n) const {
    SparseDataset copy = *this;
    if (n > copy.n_features_) copy.n_features_ = n;
    return copy;
  }

  friend bool operator==(const SparseDataset&, const SparseDataset&) = default;

 private:
  void validate() const {
    if (labels_.empty()) throw Error(Errc::empty_dataset, "dataset has no samples");
    if (row_offsets_.size() != labels_.size() + 1 || row_offsets_.front() != 0 ||
        row_offsets_.back() != features_.size()) {
      throw Error(Errc::invalid_parameter, "row offsets inconsistent with rows");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] != 1.0 && labels_[i] != -1.0) {
        throw Error(Errc::invalid_parameter, "label of row " + std::to_string(i) + " not +-1");
      }
      if (row_offsets_[i] > row_offsets_[i + 1]) {
        throw Error(Errc::invalid_parameter, "row offsets decrease");
      }
      std::uint32_t prev = 0;
      for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
        const std::uint32_t idx = features_[k].index;
        if (idx <= prev || idx > n_features_) {
          throw Error(Errc::invalid_parameter,
                      "row " + std::to_string(i) + " has bad feature index " + std::to_string(idx));
        }
        prev = idx;
      }
    }
  }

  std::size_t n_features_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<Feature> features_;
  std::vector<double> labels_;
};

/// Accumulates rows, then produces a validated SparseDataset.
class DatasetBuilder {
 public:
  void add_row(double label, std::span<const Feature> row) {
    features_.insert(features_.end(), row.begin(), row.end());
    offsets_.push_back(features_.size());
    labels_.push_back(label);
    for (const Feature& f : row) {
      if (f.index > n_features_) n_features_ = f.index;
    }
  }

  [[nodiscard]] SparseDataset build(std::size_t min_features = 0) && {
    return SparseDataset(std::max<std::size_t>(n_features_, min_features), std::move(offsets_),
                         std::move(features_), std::move(labels_));
  }

 private:
  std::size_t n_features_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Feature> features_;
  std::vector<double> labels_;
};

}  // namespace geod
