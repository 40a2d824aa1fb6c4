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

#include "netlens/classifier.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "netlens/walk.hpp"

namespace netlens {

ClassCatalog::ClassCatalog(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() < 2) throw Error("class catalog needs at least two classes");
  for (const auto& name : names_) {
    if (name.empty() || name.find_first_of(" \t\r\n,;") != std::string::npos) {
      throw Error("invalid class name '" + name + "'");
    }
  }
  auto sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error("duplicate class name in catalog");
  }
}

int ClassCatalog::index_of(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

int ClassCatalog::require(const std::string& name) const {
  const int index = index_of(name);
  if (index < 0) throw Error("unknown class '" + name + "'");
  return index;
}

int UniformRandomClassifier::predict(const BitImage& img, std::uint64_t sample_seed) const {
  if (img.size() != lens_size_) throw Error("image side does not match lens size");
  return static_cast<int>(splitmix64(sample_seed ^ 0xA5A5A5A5A5A5A5A5ULL) %
                          static_cast<std::uint64_t>(class_count_));
}

void write_model(std::ostream& out, const CentroidModel& model) {
  const auto& catalog = model.catalog();
  out << "netlens-centroid-model 1\n";
  out << "lens_size " << model.lens_size() << '\n';
  out << "classes " << catalog.size();
  for (const auto& name : catalog.names()) out << ' ' << name;
  out << "\ncounts";
  for (auto c : model.sample_counts()) out << ' ' << c;
  out << '\n';
  for (int c = 0; c < catalog.size(); ++c) {
    out << catalog.name(c);
    for (Eigen::Index j = 0; j < model.means().cols(); ++j) {
      out << ' ' << fmt::format("{:.6g}", model.means()(c, j));
    }
    out << '\n';
  }
}

CentroidModel read_model(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  const auto next_line = [&]() -> std::istringstream {
    if (!std::getline(in, line)) throw ParseError(line_no + 1, "unexpected end of model file");
    ++line_no;
    return std::istringstream(line);
  };
  const auto expect_key = [&](std::istringstream& s, const char* key) {
    std::string word;
    if (!(s >> word) || word != key) {
      throw ParseError(line_no, std::string("expected '") + key + "'");
    }
  };

  auto header = next_line();
  expect_key(header, "netlens-centroid-model");
  int version = 0;
  if (!(header >> version) || version != 1) throw ParseError(line_no, "unsupported model version");

  auto size_line = next_line();
  expect_key(size_line, "lens_size");
  int lens_size = 0;
  if (!(size_line >> lens_size) || lens_size <= 0) throw ParseError(line_no, "bad lens size");

  auto class_line = next_line();
  expect_key(class_line, "classes");
  int class_count = 0;
  if (!(class_line >> class_count) || class_count < 2) throw ParseError(line_no, "bad class count");
  std::vector<std::string> names(class_count);
  for (auto& name : names) {
    if (!(class_line >> name)) throw ParseError(line_no, "missing class name");
  }
  ClassCatalog catalog;
  try {
    catalog = ClassCatalog(names);
  } catch (const Error& e) {
    throw ParseError(line_no, e.what());
  }

  auto count_line = next_line();
  expect_key(count_line, "counts");
  std::vector<std::int64_t> counts(class_count);
  for (auto& c : counts) {
    if (!(count_line >> c) || c < 0) throw ParseError(line_no, "bad sample count");
  }

  const auto features = static_cast<Eigen::Index>(lens_size) * lens_size;
  CentroidModel::Matrix means(class_count, features);
  for (int c = 0; c < class_count; ++c) {
    auto row = next_line();
    std::string name;
    if (!(row >> name) || name != catalog.name(c)) {
      throw ParseError(line_no, "centroid rows must follow catalog order");
    }
    for (Eigen::Index j = 0; j < features; ++j) {
      double v = 0;
      if (!(row >> v) || v < 0.0 || v > 1.0) throw ParseError(line_no, "bad centroid value");
      means(c, j) = v;
    }
  }
  return CentroidModel(std::move(catalog), lens_size, std::move(means), std::move(counts));
}

}  // namespace netlens
