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

#ifndef OUTBREAK_SYNTH_H_
#define OUTBREAK_SYNTH_H_

#include <cstdint>
#include <vector>

#include "outbreak/corpus.h"

namespace outbreak::synth {

// Template generator for a labeled outbreak-report corpus. Sentences plant
// DEATHS, INFECTIONS and HOSPITALIZATIONS phrases with randomized numerals
// (digits, comma groups, spelled-out numbers), head nouns, countries and
// frames, mixed with distractor sentences carrying unlabeled numbers.
// Deterministic in (count, seed).
std::vector<corpus::LabeledSentence> generate_ner_corpus(std::size_t count,
                                                         std::uint64_t seed);

}  // namespace outbreak::synth

#endif  // OUTBREAK_SYNTH_H_
