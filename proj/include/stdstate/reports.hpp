// Copyright 2026 The stdstate Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * JSON encodings of specs, analysis results and measurement trees.
 *
 * Complex numbers are [re, im]; a pair is {"alpha": c, "beta": c}; a
 * pattern is a list of 0/1 bits, lowest qubit first. Malformed input
 * throws ParseError.
 */
#pragma once

#include "stdstate/classifier.hpp"
#include "stdstate/sequencer.hpp"
#include "stdstate/standard_state.hpp"
#include "stdstate/variant_locator.hpp"

#include <string>

#include "json.hpp"

namespace stdstate::io {

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json pair_to_json(const LevelPair &p);
LevelPair pair_from_json(const nlohmann::json &j);

nlohmann::json spec_to_json(const StandardStateSpec &spec);
StandardStateSpec spec_from_json(const nlohmann::json &j);

/// Accepts a bare array of variants or an object with a "variants" array.
std::vector<VariantSpec> variants_from_json(const nlohmann::json &j);

nlohmann::json procedure1_to_json(const Procedure1Report &r);
nlohmann::json posterior_to_json(const PosteriorReport &r);
nlohmann::json tree_to_json(const MeasurementTree &tree, const Localization &loc);

struct OrderAndPairs {
    std::vector<Qubit> order;
    std::vector<LevelPair> pairs;
};

/// Reads {"order", "pairs"} at the top level or under "procedure1".
OrderAndPairs order_and_pairs_from_json(const nlohmann::json &j);

} // namespace stdstate::io
