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
#include "stdstate/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace stdstate {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// N log(1 - p), exact at p = 1.
double log_pow_complement(double n_trials, double p) {
    if (p >= 1.0) {
        return n_trials == 0.0 ? 0.0 : -HUGE_VAL;
    }
    return n_trials * std::log1p(-p);
}

} // namespace

double posterior_after_failure(double n_trials, double p1) {
    if (p1 >= 1.0) {
        return 1.0;
    }
    if (p1 <= 0.0) {
        return 0.0;
    }
    // 1 - exp(N log(1-p1) + log(1 + N p1)); the sum is tiny and negative
    // for small p1, where expm1 keeps the leading p1^2 term.
    const double e = log_pow_complement(n_trials, p1) + std::log1p(n_trials * p1);
    return clamp01(-std::expm1(e));
}

double posterior_after_success(double n_trials, double p1) {
    if (p1 >= 1.0) {
        return 1.0;
    }
    if (p1 <= 0.0) {
        return 0.0;
    }
    return clamp01(-std::expm1(log_pow_complement(n_trials + 1.0, p1)));
}

double ClassifierConfig::p1() const { return k1 / std::ldexp(1.0, n); }

std::int64_t ClassifierConfig::budget() const {
    return n0 > 0 ? n0 : std::max(1, sequencing_trial_bound(n));
}

void validate_config(const ClassifierConfig &config) {
    if (config.n < 1) {
        throw ValidationError("classifier needs n >= 1");
    }
    if (!(config.k1 >= 1.0) || config.k1 >= std::ldexp(1.0, config.n)) {
        throw ValidationError("K1 must satisfy 1 <= K1 < 2^n");
    }
    if (config.n0 < 0) {
        throw ValidationError("N0 must be positive");
    }
}

double min_success_probability(const ClassifierConfig &config) {
    if (!config.c || !config.k_exp) {
        throw ValidationError("min_success_probability needs c and k");
    }
    const double cnk = *config.c * std::pow(static_cast<double>(config.n), *config.k_exp);
    const double ratio = cnk / std::ldexp(1.0, config.n);
    if (*config.c < 0.0 || !(ratio < 1.0)) {
        throw ValidationError("c n^k must lie in [0, 2^n)");
    }
    return std::exp(log_pow_complement(static_cast<double>(config.budget()), ratio));
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::LikelyPolynomial:
        return "likely-polynomial";
    case Verdict::UnlikelyPolynomial:
        return "unlikely-polynomial";
    case Verdict::Undecided:
        return "undecided";
    }
    return "?";
}

PosteriorReport classify(const Procedure1Report &report, const ClassifierConfig &config) {
    validate_config(config);
    PosteriorReport out;
    out.p1 = config.p1();
    out.closeness_heuristic = out.p1;
    using Outcome = Procedure1Report::Outcome;
    if (report.outcome == Outcome::FailureAtTrial && report.failure_trial >= 1) {
        out.n_trials = report.failure_trial;
        out.verdict = Verdict::UnlikelyPolynomial;
        out.probability =
            posterior_after_failure(static_cast<double>(out.n_trials), out.p1);
        return out;
    }
    if (report.outcome == Outcome::Success) {
        out.n_trials = report.successes;
        if (out.n_trials >= config.min_successes) {
            out.verdict = Verdict::LikelyPolynomial;
            out.probability =
                posterior_after_success(static_cast<double>(out.n_trials), out.p1);
        }
        return out;
    }
    // Ambiguous or degenerate runs carry no usable trial count.
    out.n_trials = report.trials_used;
    return out;
}

} // namespace stdstate
