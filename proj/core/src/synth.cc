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

#include <array>
#include <random>
#include <string>

#include "outbreak/synth.h"
#include "rng.h"

namespace outbreak::synth {

namespace {

using corpus::Label;
using corpus::LabeledSentence;
using Words = std::vector<std::string_view>;

enum class Kind { kDeaths, kInfections, kHospitalizations };

constexpr std::array<std::string_view, 24> kCountries = {
    "Guinea",  "Liberia",     "Sierra Leone", "Nigeria",   "Senegal",     "Mali",
    "Spain",   "Kenya",       "Ghana",        "Uganda",    "Congo",       "Gabon",
    "Angola",  "Sudan",       "Cameroon",     "Chad",      "Niger",       "Benin",
    "Togo",    "Ivory Coast", "Gambia",       "Zambia",    "Tanzania",    "Ethiopia"};
constexpr std::array<std::string_view, 12> kCities = {
    "Conakry", "Monrovia", "Freetown", "Lagos",  "Kenema", "Gueckedou",
    "Kailahun", "Macenta", "Dakar",    "Bamako", "Lofa",   "Kissidougou"};
constexpr std::array<std::string_view, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};
constexpr std::array<std::string_view, 6> kOrganizations = {
    "WHO", "the World Health Organization", "MSF", "the CDC", "UNICEF", "the Red Cross"};
constexpr std::array<std::string_view, 19> kSmallNumbers = {
    "two",      "three",    "four",      "five",     "six",     "seven",   "eight",
    "nine",     "ten",      "eleven",    "twelve",   "fifteen", "sixteen", "eighteen",
    "nineteen", "dozens",   "hundreds",  "thousands", "several"};
constexpr std::array<std::string_view, 8> kTens = {"twenty", "thirty",  "forty",  "fifty",
                                                   "sixty",  "seventy", "eighty", "ninety"};
constexpr std::array<std::string_view, 9> kUnits = {"one", "two",   "three", "four", "five",
                                                    "six", "seven", "eight", "nine"};

template <typename Array>
std::string_view pick(std::mt19937_64 &rng, const Array &items) {
  return items[detail::uniform_below(rng, items.size())];
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    if (end > pos) out.emplace_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return out;
}

Label begin_label(Kind k) {
  switch (k) {
    case Kind::kDeaths: return Label::kBDeaths;
    case Kind::kInfections: return Label::kBInfections;
    case Kind::kHospitalizations: return Label::kBHospitalizations;
  }
  return Label::kO;
}

Label inside_label(Kind k) {
  switch (k) {
    case Kind::kDeaths: return Label::kIDeaths;
    case Kind::kInfections: return Label::kIInfections;
    case Kind::kHospitalizations: return Label::kIHospitalizations;
  }
  return Label::kO;
}

class Builder {
 public:
  explicit Builder(std::mt19937_64 &rng) : rng_(rng) {}

  Builder &text(std::string_view words) {
    for (auto &w : split_words(words)) push(std::move(w), Label::kO);
    return *this;
  }
  Builder &country() { return text(pick(rng_, kCountries)); }
  Builder &city() { return text(pick(rng_, kCities)); }
  Builder &organization() { return text(pick(rng_, kOrganizations)); }
  Builder &date() {
    push(std::to_string(1 + detail::uniform_below(rng_, 28)), Label::kO);
    push(std::string(pick(rng_, kMonths)), Label::kO);
    push(std::to_string(2000 + detail::uniform_below(rng_, 20)), Label::kO);
    return *this;
  }
  Builder &number() {
    push(numeral(), Label::kO);
    return *this;
  }

  // Numeral, optional modifier and head noun phrase of one entity.
  Builder &entity(Kind kind) {
    push(numeral(), begin_label(kind));
    static constexpr std::array<std::string_view, 5> kInfectionMods = {
        "new", "suspected", "confirmed", "probable", "additional"};
    static constexpr std::array<std::string_view, 3> kOtherMods = {"new", "additional",
                                                                   "confirmed"};
    if (detail::uniform_below(rng_, 3) == 0) {
      push(std::string(kind == Kind::kInfections ? pick(rng_, kInfectionMods)
                                                 : pick(rng_, kOtherMods)),
           inside_label(kind));
    }
    static constexpr std::array<std::string_view, 3> kDeathHeads = {"deaths", "fatalities",
                                                                    "deaths"};
    static constexpr std::array<std::string_view, 4> kInfectionHeads = {
        "cases", "infections", "cases", "people infected"};
    static constexpr std::array<std::string_view, 4> kHospitalHeads = {
        "hospitalizations", "hospital admissions", "people hospitalized",
        "patients hospitalized"};
    // Rare variants, so held-out folds see heads that training barely covers.
    static constexpr std::array<std::string_view, 8> kRareDeathHeads = {
        "casualties", "fatal cases", "lives lost",  "people dead",
        "victims",    "dead",        "fatal infections", "deceased patients"};
    static constexpr std::array<std::string_view, 8> kRareInfectionHeads = {
        "infected persons", "patients infected", "known infections", "infections recorded",
        "cases recorded",   "sick people",       "people sickened",  "infected residents"};
    static constexpr std::array<std::string_view, 8> kRareHospitalHeads = {
        "admissions",        "inpatients",   "people admitted", "hospitalised patients",
        "hospitalisations",  "hospital stays", "patients admitted", "ward admissions"};
    const bool rare = detail::uniform_below(rng_, 100) < 8;
    std::string_view head;
    switch (kind) {
      case Kind::kDeaths:
        head = rare ? pick(rng_, kRareDeathHeads) : pick(rng_, kDeathHeads);
        break;
      case Kind::kInfections:
        head = rare ? pick(rng_, kRareInfectionHeads) : pick(rng_, kInfectionHeads);
        break;
      case Kind::kHospitalizations:
        head = rare ? pick(rng_, kRareHospitalHeads) : pick(rng_, kHospitalHeads);
        break;
    }
    for (auto &w : split_words(head)) push(std::move(w), inside_label(kind));
    return *this;
  }

  LabeledSentence finish() {
    std::vector<std::string> tokens;
    for (const auto &t : sentence_) tokens.push_back(t.token);
    auto tags = corpus::pos_tag(tokens);
    for (std::size_t i = 0; i < sentence_.size(); ++i) sentence_[i].pos = tags[i];
    return std::move(sentence_);
  }

 private:
  void push(std::string token, Label label) {
    sentence_.push_back({std::move(token), {}, label});
  }

  std::string numeral() {
    switch (detail::uniform_below(rng_, 10)) {
      case 0:
      case 1:
      case 2:
      case 3:
        return std::to_string(1 + detail::uniform_below(rng_, 999));
      case 4:
      case 5:
      case 6: {
        auto v = 1000 + detail::uniform_below(rng_, 99000);
        std::string low = std::to_string(v % 1000);
        return std::to_string(v / 1000) + "," + std::string(3 - low.size(), '0') + low;
      }
      case 7:
        return std::string(pick(rng_, kTens)) + "-" + std::string(pick(rng_, kUnits));
      default:
        return std::string(pick(rng_, kSmallNumbers));
    }
  }

  std::mt19937_64 &rng_;
  LabeledSentence sentence_;
};

Kind pick_kind(std::mt19937_64 &rng) { return static_cast<Kind>(detail::uniform_below(rng, 3)); }

Kind other_kind(std::mt19937_64 &rng, Kind k) {
  return static_cast<Kind>((static_cast<int>(k) + 1 + detail::uniform_below(rng, 2)) % 3);
}

LabeledSentence entity_sentence(std::mt19937_64 &rng) {
  Builder b(rng);
  Kind k = pick_kind(rng);
  Kind k2 = other_kind(rng, k);
  switch (detail::uniform_below(rng, 10)) {
    case 0: b.text("As of").date().text(",").country().text("had reported").entity(k).text(".");
      break;
    case 1:
      b.text("As of").date().text(", there were").entity(k).text("and").entity(k2).text("in");
      b.country().text(".");
      break;
    case 2: b.country().text("reported").entity(k).text("on").date().text("."); break;
    case 3:
      b.text("The ministry of health confirmed").entity(k).text(", including").entity(k2);
      b.text(".");
      break;
    case 4:
      b.text("By").date().text(", the outbreak had caused").entity(k).text("in").country();
      b.text(".");
      break;
    case 5: b.text("Officials in").city().text("recorded").entity(k).text("over the past week .");
      break;
    case 6: b.text("The total rose to").entity(k).text(", with").entity(k2).text("."); break;
    case 7:
      b.text("In").country().text(",").entity(k).text("and").entity(k2).text("were reported by");
      b.organization().text(".");
      break;
    case 8:
      b.organization().text("said there were").entity(k).text("in").country().text("as of");
      b.date().text(".");
      break;
    default: b.text("Health workers accounted for").entity(k).text("in").city().text(".");
      break;
  }
  return b.finish();
}

LabeledSentence distractor_sentence(std::mt19937_64 &rng) {
  Builder b(rng);
  switch (detail::uniform_below(rng, 12)) {
    case 8: b.text("In most cases , symptoms appear within").number().text("days ."); break;
    case 9: b.text("Deaths from malaria remain common in").country().text("."); break;
    case 10: b.text("The clinic treated patients from").number().text("districts in");
      b.country().text(".");
      break;
    case 11: b.text("Hospital staff in").city().text("worked").number().text("hour shifts .");
      break;
    case 0:
      b.text("The outbreak began in").text(pick(rng, kMonths)).text(std::to_string(
          2000 + detail::uniform_below(rng, 20)));
      b.text("in").country().text(".");
      break;
    case 1: b.country().text("has a population of about").number().text("people ."); break;
    case 2: b.organization().text("deployed").number().text("staff to").country().text("on");
      b.date().text(".");
      break;
    case 3: b.text("The hospital in").city().text("has").number().text("beds ."); break;
    case 4: b.text("A total of").number().text("contacts were being traced in").country();
      b.text(".");
      break;
    case 5: b.text("The treatment centre in").city().text("opened on").date().text("."); break;
    case 6: b.number().text("tonnes of supplies arrived in").city().text("."); break;
    default: b.text("Schools in").country().text("closed for").number().text("weeks .");
      break;
  }
  return b.finish();
}

}  // namespace

std::vector<LabeledSentence> generate_ner_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<LabeledSentence> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(detail::uniform_below(rng, 10) < 7 ? entity_sentence(rng)
                                                     : distractor_sentence(rng));
  }
  return out;
}

}  // namespace outbreak::synth
