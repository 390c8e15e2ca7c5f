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
 * Uniform-prior posteriors on p, the per-trial failure probability of the
 * ordering procedure, and the resulting polynomial / not-polynomial call.
 *
 * After a first failure at trial N the density is proportional to
 * p (1-p)^(N-1); after N consecutive successes to (1-p)^N. Integrating
 * from 0 to p1 = K1 / 2^n gives
 *
 *     failure:  1 - (N p1 + 1)(1 - p1)^N
 *     success:  1 - (1 - p1)^(N+1)
 *
 * Powers go through log1p so p1 near 2^-50 is not rounded away.
 */
#pragma once

#include "stdstate/sequencer.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace stdstate {

double posterior_after_failure(double n_trials, double p1);
double posterior_after_success(double n_trials, double p1);

struct ClassifierConfig {
    int n = 0;
    /// Variant-count cutoff that defines "polynomial"; 1 <= K1 < 2^n.
    double k1 = 1.0;
    /// Planned trial budget; 0 selects the sequencing trial bound.
    std::int64_t n0 = 0;
    /// Optional c n^k for min_success_probability.
    std::optional<double> c;
    std::optional<double> k_exp;
    /// Successes below this yield Undecided.
    int min_successes = 10;

    [[nodiscard]] double p1() const;
    [[nodiscard]] std::int64_t budget() const;
};

void validate_config(const ClassifierConfig &config);

/// (1 - c n^k / 2^n)^N0. Throws ValidationError if c n^k >= 2^n or c, k are
/// not configured.
double min_success_probability(const ClassifierConfig &config);

enum class Verdict { LikelyPolynomial, UnlikelyPolynomial, Undecided };

std::string to_string(Verdict v);

struct PosteriorReport {
    Verdict verdict = Verdict::Undecided;
    /// Confidence that p <= p1 for LikelyPolynomial; the (small) posterior
    /// mass on p <= p1 for UnlikelyPolynomial; unset when Undecided.
    std::optional<double> probability;
    std::int64_t n_trials = 0;
    double p1 = 0.0;
    /// K1 / 2^n, a label only.
    double closeness_heuristic = 0.0;
};

PosteriorReport classify(const Procedure1Report &report, const ClassifierConfig &config);

} // namespace stdstate
