// Copyright 2026 The Netlens Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "netlens/embedding.hpp"
#include "netlens/error.hpp"

namespace netlens {

// Ordered, unique class names. Index order is fixed for a run.
class ClassCatalog {
 public:
  ClassCatalog() = default;
  // Throws Error on fewer than two names, duplicates, or names that are
  // empty or contain whitespace or commas.
  explicit ClassCatalog(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int index) const { return names_.at(index); }
  const std::vector<std::string>& names() const { return names_; }
  // -1 when absent.
  int index_of(const std::string& name) const;
  int require(const std::string& name) const;

  friend bool operator==(const ClassCatalog&, const ClassCatalog&) = default;

 private:
  std::vector<std::string> names_;
};

// Anything that maps a lens-size bit image to a hard class label.
// `sample_seed` identifies the walk that produced the image; deterministic
// classifiers ignore it.
class SignatureClassifier {
 public:
  virtual ~SignatureClassifier() = default;
  virtual int lens_size() const = 0;
  virtual int class_count() const = 0;
  virtual int predict(const BitImage& img, std::uint64_t sample_seed) const = 0;
};

// Per-class mean of flattened training images for one lens size.
template <typename Scalar>
class BasicCentroidModel {
 public:
  using Matrix =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  BasicCentroidModel() = default;
  BasicCentroidModel(ClassCatalog catalog, int lens_size, Matrix means,
                     std::vector<std::int64_t> sample_counts)
      : catalog_(std::move(catalog)),
        lens_size_(lens_size),
        means_(std::move(means)),
        sample_counts_(std::move(sample_counts)) {
    const auto features = static_cast<Eigen::Index>(lens_size_) * lens_size_;
    if (means_.rows() != catalog_.size() || means_.cols() != features ||
        static_cast<int>(sample_counts_.size()) != catalog_.size()) {
      throw Error("centroid model shape does not match catalog and lens size");
    }
  }

  const ClassCatalog& catalog() const { return catalog_; }
  int lens_size() const { return lens_size_; }
  int class_count() const { return catalog_.size(); }
  const Matrix& means() const { return means_; }
  const std::vector<std::int64_t>& sample_counts() const { return sample_counts_; }

  // Squared Euclidean distance from the flattened image to each centroid.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> distances(const BitImage& img) const {
    check_size(img);
    const auto x = img.flattened<Scalar>();
    return (means_.rowwise() - x.transpose()).rowwise().squaredNorm();
  }

  // Nearest centroid; exact ties go to the lowest class index.
  int predict(const BitImage& img) const {
    const auto d = distances(img);
    int best = 0;
    for (int c = 1; c < d.size(); ++c) {
      if (d(c) < d(best)) best = c;
    }
    return best;
  }

 private:
  void check_size(const BitImage& img) const {
    if (img.size() != lens_size_) {
      throw Error("image side " + std::to_string(img.size()) +
                  " does not match model lens size " + std::to_string(lens_size_));
    }
  }

  ClassCatalog catalog_;
  int lens_size_ = 0;
  Matrix means_;
  std::vector<std::int64_t> sample_counts_;
};

using CentroidModel = BasicCentroidModel<double>;

struct LabeledImage {
  BitImage image;
  int class_index = 0;
};

// Per-class arithmetic mean of flattened images. Throws Error when an image
// side differs from lens_size, a label is out of range, or a class has no
// samples.
template <typename Scalar = double>
BasicCentroidModel<Scalar> train_centroid_model(std::span<const LabeledImage> samples,
                                                const ClassCatalog& catalog,
                                                int lens_size) {
  using Model = BasicCentroidModel<Scalar>;
  const auto features = static_cast<Eigen::Index>(lens_size) * lens_size;
  typename Model::Matrix sums = Model::Matrix::Zero(catalog.size(), features);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(catalog.size()), 0);
  for (const auto& s : samples) {
    if (s.image.size() != lens_size) {
      throw Error("training image side " + std::to_string(s.image.size()) +
                  " does not match lens size " + std::to_string(lens_size));
    }
    if (s.class_index < 0 || s.class_index >= catalog.size()) {
      throw Error("training label out of range");
    }
    sums.row(s.class_index) += s.image.template flattened<Scalar>().transpose();
    ++counts[s.class_index];
  }
  for (int c = 0; c < catalog.size(); ++c) {
    if (counts[c] == 0) {
      throw Error("class '" + catalog.name(c) + "' has no training samples at lens size " +
                  std::to_string(lens_size));
    }
    sums.row(c) /= static_cast<Scalar>(counts[c]);
  }
  return Model(catalog, lens_size, std::move(sums), std::move(counts));
}

inline int predict_label(const CentroidModel& model, const BitImage& img) {
  return model.predict(img);
}

class CentroidClassifier final : public SignatureClassifier {
 public:
  explicit CentroidClassifier(CentroidModel model) : model_(std::move(model)) {}
  int lens_size() const override { return model_.lens_size(); }
  int class_count() const override { return model_.class_count(); }
  int predict(const BitImage& img, std::uint64_t) const override {
    return model_.predict(img);
  }
  const CentroidModel& model() const { return model_; }

 private:
  CentroidModel model_;
};

// Labels drawn uniformly from the catalog, keyed by the walk seed. Baseline
// for chance-level checks.
class UniformRandomClassifier final : public SignatureClassifier {
 public:
  UniformRandomClassifier(int lens_size, int class_count)
      : lens_size_(lens_size), class_count_(class_count) {}
  int lens_size() const override { return lens_size_; }
  int class_count() const override { return class_count_; }
  int predict(const BitImage& img, std::uint64_t sample_seed) const override;

 private:
  int lens_size_;
  int class_count_;
};

// Text model format, version 1:
//
//   netlens-centroid-model 1
//   lens_size <n>
//   classes <C> <name_0> ... <name_{C-1}>
//   counts <count_0> ... <count_{C-1}>
//   <name_c> <v_0> ... <v_{n*n-1}>        (one line per class, %.6g)
void write_model(std::ostream& out, const CentroidModel& model);
CentroidModel read_model(std::istream& in);

}  // namespace netlens
