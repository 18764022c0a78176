// Copyright 2026 The Outbreak Wiki Authors.
//
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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "outbreak/crf.h"
#include "outbreak/error.h"

namespace outbreak::crf {

namespace {

constexpr std::string_view kMagic = "outbreak-crf";

std::string format_weight(double w) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, end);
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string_view::npos ? line.npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

bool is_closed_label(std::string_view name) { return corpus::parse_label(name).has_value(); }

double parse_weight(std::string_view text, const std::string &where) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw LoadError(where + "malformed number '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) throw LoadError(where + "non-finite weight");
  return value;
}

long parse_int(std::string_view text, const std::string &where) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw LoadError(where + "malformed integer '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

CrfModel::CrfModel(std::vector<std::string> labels, std::vector<std::string> feature_names,
                   FeatureConfig config)
    : labels_(std::move(labels)), feature_names_(std::move(feature_names)), config_(config) {
  std::set<std::string_view> seen;
  for (const auto &l : labels_) {
    if (!seen.insert(l).second) throw DomainError("duplicate label '" + l + "'");
  }
  for (std::size_t i = 0; i < feature_names_.size(); ++i) {
    if (!feature_index_.emplace(feature_names_[i], static_cast<std::uint32_t>(i)).second) {
      throw DomainError("duplicate feature '" + feature_names_[i] + "'");
    }
  }
  weights_.assign(weight_count(feature_names_.size(), labels_.size()), 0.0);
}

std::int64_t CrfModel::feature_id(std::string_view name) const {
  auto it = feature_index_.find(std::string(name));
  return it == feature_index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::int64_t CrfModel::label_id(std::string_view name) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == name) return static_cast<std::int64_t>(i);
  }
  return -1;
}

std::vector<std::vector<std::uint32_t>> CrfModel::encode(std::span<const std::string> tokens,
                                                         std::span<const std::string> pos) const {
  std::vector<std::vector<std::uint32_t>> out(tokens.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    for (const auto &name : extract_features(tokens, pos, t, config_)) {
      auto it = feature_index_.find(name);
      if (it != feature_index_.end()) out[t].push_back(it->second);
    }
  }
  return out;
}

Lattice CrfModel::lattice(std::span<const std::string> tokens,
                          std::span<const std::string> pos) const {
  return build_lattice(weights_, feature_names_.size(), labels_.size(), encode(tokens, pos));
}

bool CrfModel::operator==(const CrfModel &other) const {
  return labels_ == other.labels_ && feature_names_ == other.feature_names_ &&
         config_ == other.config_ && weights_ == other.weights_;
}

void save_model(std::ostream &out, const CrfModel &model) {
  for (const auto &label : model.labels()) {
    if (!is_closed_label(label)) throw DomainError("label '" + label + "' is not savable");
  }
  const auto &c = model.config();
  out << kMagic << ' ' << kModelFormatVersion << '\n';
  out << "labels";
  for (const auto &label : model.labels()) out << '\t' << label;
  out << '\n';
  out << "config\tmax_ngram_len=" << c.max_ngram_len << "\twindow=" << c.window
      << "\tuse_pos=" << (c.use_pos ? 1 : 0) << "\tuse_shape=" << (c.use_shape ? 1 : 0)
      << "\tl2_lambda=" << format_weight(c.l2_lambda) << '\n';
  const std::size_t L = model.num_labels();
  auto weights = model.weights();
  for (std::size_t f = 0; f < model.num_features(); ++f) {
    const auto &name = model.feature_names()[f];
    if (name.empty() || name == "TRANS" || name.find_first_of("\t\n\r") != std::string::npos) {
      throw DomainError("feature name cannot be written: '" + name + "'");
    }
    for (std::size_t y = 0; y < L; ++y) {
      out << name << '\t' << model.labels()[y] << '\t' << format_weight(weights[f * L + y])
          << '\n';
    }
  }
  const std::size_t base = model.num_features() * L;
  for (std::size_t a = 0; a < L; ++a) {
    for (std::size_t b = 0; b < L; ++b) {
      out << "TRANS\t" << model.labels()[a] << '\t' << model.labels()[b] << '\t'
          << format_weight(weights[base + a * L + b]) << '\n';
    }
  }
}

void save_model(const std::filesystem::path &path, const CrfModel &model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  save_model(out, model);
  if (!out.flush()) throw Error("failed writing " + path.string());
}

CrfModel load_model(std::istream &in) {
  std::string line;
  std::size_t line_no = 0;
  auto where = [&line_no] { return "model line " + std::to_string(line_no) + ": "; };
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next()) throw LoadError("empty model file");
  {
    auto space = line.find(' ');
    if (space == std::string::npos || std::string_view(line).substr(0, space) != kMagic) {
      throw LoadError(where() + "not a model file");
    }
    long version = parse_int(std::string_view(line).substr(space + 1), where());
    if (version != kModelFormatVersion) {
      throw LoadError("unsupported model format version " + std::to_string(version) +
                      " (expected " + std::to_string(kModelFormatVersion) + ")");
    }
  }

  if (!next()) throw LoadError("missing label line");
  auto fields = split_tabs(line);
  if (fields.empty() || fields[0] != "labels" || fields.size() < 2) {
    throw LoadError(where() + "expected label list");
  }
  std::vector<std::string> labels;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    if (!is_closed_label(fields[i])) {
      throw LoadError(where() + "unknown label '" + std::string(fields[i]) + "'");
    }
    if (std::find(labels.begin(), labels.end(), fields[i]) != labels.end()) {
      throw LoadError(where() + "duplicate label '" + std::string(fields[i]) + "'");
    }
    labels.emplace_back(fields[i]);
  }

  if (!next()) throw LoadError("missing config line");
  fields = split_tabs(line);
  if (fields.size() != 6 || fields[0] != "config") throw LoadError(where() + "expected config");
  FeatureConfig config;
  std::set<std::string_view> keys;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    auto eq = fields[i].find('=');
    if (eq == std::string_view::npos) throw LoadError(where() + "malformed config entry");
    auto key = fields[i].substr(0, eq);
    auto value = fields[i].substr(eq + 1);
    keys.insert(key);
    if (key == "max_ngram_len") {
      config.max_ngram_len = static_cast<int>(parse_int(value, where()));
    } else if (key == "window") {
      config.window = static_cast<int>(parse_int(value, where()));
    } else if (key == "use_pos") {
      config.use_pos = parse_int(value, where()) != 0;
    } else if (key == "use_shape") {
      config.use_shape = parse_int(value, where()) != 0;
    } else if (key == "l2_lambda") {
      config.l2_lambda = parse_weight(value, where());
    } else {
      throw LoadError(where() + "unknown config key '" + std::string(key) + "'");
    }
  }
  if (keys.size() != 5) throw LoadError(where() + "incomplete config");
  try {
    config.validate();
  } catch (const DomainError &e) {
    throw LoadError(where() + e.what());
  }

  const std::size_t L = labels.size();
  auto label_of = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < L; ++i) {
      if (labels[i] == name) return i;
    }
    throw LoadError(where() + "unknown label '" + std::string(name) + "'");
  };

  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> name_ids;
  std::vector<double> emission;  // grows F * L
  std::vector<double> transition(L * L, 0.0);
  while (next()) {
    if (line.empty()) continue;
    fields = split_tabs(line);
    if (fields.size() == 4 && fields[0] == "TRANS") {
      transition[label_of(fields[1]) * L + label_of(fields[2])] = parse_weight(fields[3], where());
    } else if (fields.size() == 3) {
      auto [it, inserted] = name_ids.try_emplace(std::string(fields[0]), names.size());
      if (inserted) {
        names.emplace_back(fields[0]);
        emission.resize(names.size() * L, 0.0);
      }
      emission[it->second * L + label_of(fields[1])] = parse_weight(fields[2], where());
    } else {
      throw LoadError(where() + "expected 3 or 4 tab-separated fields");
    }
  }

  CrfModel model(std::move(labels), std::move(names), config);
  auto w = model.mutable_weights();
  std::copy(emission.begin(), emission.end(), w.begin());
  std::copy(transition.begin(), transition.end(), w.begin() + static_cast<long>(emission.size()));
  return model;
}

CrfModel load_model(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open model " + path.string());
  try {
    return load_model(in);
  } catch (const LoadError &e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

}  // namespace outbreak::crf
