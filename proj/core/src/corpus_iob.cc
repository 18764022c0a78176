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

#include <fstream>
#include <istream>
#include <ostream>

#include "outbreak/corpus.h"
#include "outbreak/error.h"

namespace outbreak::corpus {

namespace {

void check_field(std::string_view field, std::string_view what) {
  if (field.empty()) throw DomainError("empty " + std::string(what) + " field");
  if (field.find_first_of("\t\n\r") != std::string_view::npos) {
    throw DomainError(std::string(what) + " field contains a tab or line break: '" +
                      std::string(field) + "'");
  }
}

std::string_view label_kind(Label label) { return label_name(label).substr(2); }

bool is_inside(Label label) { return label_name(label).starts_with("I-"); }

}  // namespace

void write_iob_tsv(std::ostream &out, std::span<const LabeledSentence> sentences) {
  bool first = true;
  for (const auto &sentence : sentences) {
    if (sentence.empty()) throw DomainError("cannot write an empty sentence");
    if (!first) out << '\n';
    first = false;
    for (const auto &tok : sentence) {
      check_field(tok.token, "token");
      check_field(tok.pos, "pos");
      out << tok.token << '\t' << tok.pos << '\t' << label_name(tok.label) << '\n';
    }
  }
}

void write_iob_tsv(const std::filesystem::path &path,
                   std::span<const LabeledSentence> sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_iob_tsv(out, sentences);
  if (!out.flush()) throw Error("failed writing " + path.string());
}

std::vector<LabeledSentence> read_iob_tsv(std::istream &in, IobMode mode) {
  std::vector<LabeledSentence> sentences;
  LabeledSentence current;
  std::string line;
  std::size_t line_no = 0;
  auto where = [&line_no] { return "line " + std::to_string(line_no) + ": "; };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!current.empty()) sentences.push_back(std::move(current));
      current.clear();
      continue;
    }
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw ParseError(where() + "expected 3 tab-separated columns");
    }
    LabeledToken tok;
    tok.token = line.substr(0, t1);
    tok.pos = line.substr(t1 + 1, t2 - t1 - 1);
    std::string label_text = line.substr(t2 + 1);
    if (tok.token.empty() || tok.pos.empty()) throw ParseError(where() + "empty column");
    auto label = parse_label(label_text);
    if (!label) throw ParseError(where() + "unknown label '" + label_text + "'");
    if (is_inside(*label)) {
      bool continues = !current.empty() && current.back().label != Label::kO &&
                       label_kind(current.back().label) == label_kind(*label);
      if (!continues) {
        if (mode == IobMode::kStrict) {
          throw ParseError(where() + "'" + label_text + "' does not continue a span");
        }
        label = parse_label("B-" + std::string(label_kind(*label)));
      }
    }
    tok.label = *label;
    current.push_back(std::move(tok));
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

std::vector<LabeledSentence> read_iob_tsv(const std::filesystem::path &path, IobMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return read_iob_tsv(in, mode);
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace outbreak::corpus
