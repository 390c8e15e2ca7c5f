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
#include "stdstate/sequencer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace stdstate {

namespace {

bool ratio_equal(Complex a, Complex b, const RatioTolerance &tol) {
    const double scale = std::max({std::abs(a), std::abs(b), tol.floor_abs});
    return std::abs(a - b) <= tol.rel * scale;
}

BasisIndex bit(Qubit q) { return BasisIndex{1} << q; }

} // namespace

std::string to_string(Middle m) {
    switch (m) {
    case Middle::J:
        return "j";
    case Middle::K:
        return "k";
    case Middle::M:
        return "m";
    case Middle::NoPattern:
        return "no-pattern";
    case Middle::Ambiguous:
        return "ambiguous";
    }
    return "?";
}

std::string to_string(Procedure1Report::Outcome o) {
    switch (o) {
    case Procedure1Report::Outcome::Success:
        return "success";
    case Procedure1Report::Outcome::FailureAtTrial:
        return "failure-at-trial";
    case Procedure1Report::Outcome::Ambiguous:
        return "ambiguous";
    case Procedure1Report::Outcome::Degenerate:
        return "degenerate";
    }
    return "?";
}

Qubit TrioVerdict::middle_qubit() const {
    switch (middle) {
    case Middle::J:
        return trio[0];
    case Middle::K:
        return trio[1];
    case Middle::M:
        return trio[2];
    default:
        throw ValidationError("trio verdict has no middle qubit");
    }
}

TrioVerdict trio_test(CoefficientOracle &oracle, Qubit j, Qubit k, Qubit m,
                      BasisIndex filler, const RatioTolerance &tol) {
    const int n = oracle.num_qubits();
    for (Qubit q : {j, k, m}) {
        if (q < 0 || q >= n) {
            throw SizeError("trio qubit out of range");
        }
    }
    if (j == k || k == m || j == m) {
        throw ValidationError("trio qubits must be distinct");
    }
    if (filler & (bit(j) | bit(k) | bit(m))) {
        throw ValidationError("filler must leave the trio qubits unset");
    }
    if (filler >> n) {
        throw SizeError("filler sets qubits outside the register");
    }

    TrioVerdict v{{j, k, m}, filler, Middle::NoPattern, {}, {}};
    const Complex c00 = oracle.retrieve(filler);
    const Complex c11 = oracle.retrieve(filler | bit(j) | bit(k));
    const Complex c01 = oracle.retrieve(filler | bit(k) | bit(m));
    const Complex c10 = oracle.retrieve(filler | bit(j) | bit(m));
    v.coeffs = {c00, c11, c01, c10};

    const std::array<std::pair<Complex, Complex>, 3> products = {{
        {c00 * c01, c11 * c10}, // j middle
        {c00 * c10, c11 * c01}, // k middle
        {c00 * c11, c10 * c01}, // m middle
    }};
    bool all_zero = true;
    for (const auto &[a, b] : products) {
        if (std::abs(a) > tol.floor_abs || std::abs(b) > tol.floor_abs) {
            all_zero = false;
        }
    }
    if (all_zero) {
        throw DegenerateError("degenerate trio: all cross products vanish");
    }

    int count = 0;
    for (std::size_t p = 0; p < 3; ++p) {
        v.holds[p] = ratio_equal(products[p].first, products[p].second, tol);
        count += v.holds[p] ? 1 : 0;
    }
    if (count == 0) {
        v.middle = Middle::NoPattern;
    } else if (count > 1) {
        v.middle = Middle::Ambiguous;
    } else {
        v.middle = v.holds[0] ? Middle::J : v.holds[1] ? Middle::K : Middle::M;
    }
    return v;
}

int sequencing_trial_bound(int n) {
    int total = 0;
    for (int h = 3; h <= n; ++h) {
        total += (h + 1) / 2;
    }
    return total;
}

Sequencer::Sequencer(CoefficientOracle &oracle, Procedure1Config config)
    : oracle_(oracle), config_(config), rng_(mix_seed(config.seed)) {}

BasisIndex Sequencer::random_filler(Qubit j, Qubit k, Qubit m) {
    const int n = oracle_.num_qubits();
    BasisIndex filler = 0;
    Qubit last_free = -1;
    for (Qubit q = 0; q < n; ++q) {
        if (q == j || q == k || q == m) {
            continue;
        }
        last_free = q;
        if (rng_() & 1U) {
            filler |= bit(q);
        }
    }
    if (last_free >= 0 && std::popcount(filler) % 2 == 1) {
        filler ^= bit(last_free);
    }
    return filler;
}

Sequencer::TrioOutcome Sequencer::test_trio(Qubit j, Qubit k, Qubit m, bool confirm) {
    ++trials_;
    const int attempts_allowed = 1 + std::max(0, config_.ambiguity_retries);
    std::optional<TrioVerdict> last;
    int attempts = 0;
    for (; attempts < attempts_allowed; ++attempts) {
        const BasisIndex filler = random_filler(j, k, m);
        try {
            last = trio_test(oracle_, j, k, m, filler, config_.tol);
        } catch (const DegenerateError &) {
            log_.push_back({{j, k, m}, filler, Middle::NoPattern, confirm});
            continue;
        }
        log_.push_back({{j, k, m}, filler, last->middle, confirm});
        if (last->middle != Middle::Ambiguous) {
            ++attempts;
            break;
        }
    }
    if (!last) {
        throw DegenerateError("trio (" + std::to_string(j) + "," +
                              std::to_string(k) + "," + std::to_string(m) +
                              ") is degenerate for every filler tried");
    }
    return {*last, attempts};
}

Sequencer::InsertOutcome Sequencer::insert_qubit(const std::vector<Qubit> &known,
                                                 Qubit qubit) {
    const int h = static_cast<int>(known.size());
    if (h < 3) {
        throw ValidationError("insertion needs a known sequence of 3 or more");
    }
    InsertOutcome out{std::nullopt, 0};
    // Invariant: `qubit` lies strictly between known[i-1] and known[h-i]
    // (sentinels at the ends when i = 0).
    for (int i = 0;; ++i) {
        const int interior = h - 2 * i;
        if (interior <= 0) {
            out.position = i;
            return out;
        }
        const bool single = interior == 1;
        const Qubit a = single ? known[i - 1] : known[i];
        const Qubit b = single ? known[i] : known[h - 1 - i];
        const auto res = test_trio(a, b, qubit);
        ++out.trials;
        const Middle mid = res.verdict.middle;
        if (mid == Middle::NoPattern || mid == Middle::Ambiguous) {
            out.failure = mid;
            return out;
        }
        ++successes_;
        if (single) {
            if (mid == Middle::M) {
                out.position = i;
            } else if (mid == Middle::K) {
                out.position = i + 1;
            } else {
                // Contradicts the earlier verdict that placed it inside.
                --successes_;
                out.failure = Middle::NoPattern;
            }
            return out;
        }
        if (mid == Middle::J) {
            out.position = i;
            return out;
        }
        if (mid == Middle::K) {
            out.position = h - i;
            return out;
        }
    }
}

Sequencer::SequenceOutcome Sequencer::sequence_all() {
    const int n = oracle_.num_qubits();
    if (n < 3) {
        throw ValidationError("sequencing needs at least 3 qubits");
    }
    SequenceOutcome out{std::nullopt, 0};
    const auto first = test_trio(0, 1, 2);
    ++out.trials;
    const Middle mid = first.verdict.middle;
    if (mid == Middle::NoPattern || mid == Middle::Ambiguous) {
        out.failure = mid;
        return out;
    }
    ++successes_;
    const Qubit middle = first.verdict.middle_qubit();
    std::vector<Qubit> seq;
    for (Qubit q : {0, 1, 2}) {
        if (q != middle) {
            seq.push_back(q);
        }
    }
    seq.insert(seq.begin() + 1, middle);

    for (Qubit q = 3; q < n; ++q) {
        const auto ins = insert_qubit(seq, q);
        out.trials += ins.trials;
        if (!ins.position) {
            out.failure = ins.failure;
            return out;
        }
        seq.insert(seq.begin() + *ins.position, q);
    }
    out.order = std::move(seq);
    return out;
}

std::vector<LevelPair> Sequencer::extract_pairs(const std::vector<Qubit> &order) {
    const int n = oracle_.num_qubits();
    if (static_cast<int>(order.size()) != n) {
        throw ValidationError("order must list every qubit");
    }
    // Flipping y_l alone flips the qubits at positions l-1 and l.
    const Complex c0 = oracle_.retrieve(0);
    std::vector<LevelPair> pairs;
    pairs.reserve(n - 1);
    for (int level = 1; level < n; ++level) {
        const Complex c1 = oracle_.retrieve(bit(order[level - 1]) | bit(order[level]));
        if (std::abs(c1) < kZeroAmplitude) {
            throw DegenerateError("zero denominator extracting level " +
                                  std::to_string(level));
        }
        const double norm = std::sqrt(std::norm(c0) + std::norm(c1));
        pairs.push_back(canonical_phase({c0 / norm, c1 / norm}));
    }
    return pairs;
}

Procedure1Report Sequencer::run() {
    const int n = oracle_.num_qubits();
    Procedure1Report report;
    const std::uint64_t retrievals_before = oracle_.retrievals();
    auto finish = [&]() -> Procedure1Report {
        report.trials_used = trials_;
        report.successes = successes_;
        report.retrievals_used = oracle_.retrievals() - retrievals_before;
        report.log = log_;
        return std::move(report);
    };

    try {
        const auto seq = sequence_all();
        if (!seq.order) {
            if (seq.failure == Middle::Ambiguous) {
                report.outcome = Procedure1Report::Outcome::Ambiguous;
                report.detail = "ratio patterns coincide for every filler tried";
            } else {
                report.outcome = Procedure1Report::Outcome::FailureAtTrial;
                report.failure_trial = trials_;
            }
            return finish();
        }
        report.order = *seq.order;
        report.pairs = extract_pairs(report.order);

        std::vector<int> position(n);
        for (int p = 0; p < n; ++p) {
            position[report.order[p]] = p;
        }
        std::uniform_int_distribution<int> pick(0, n - 1);
        for (int t = 0; t < config_.extra_confirm_trials; ++t) {
            std::array<Qubit, 3> trio{};
            trio[0] = pick(rng_);
            do {
                trio[1] = pick(rng_);
            } while (trio[1] == trio[0]);
            do {
                trio[2] = pick(rng_);
            } while (trio[2] == trio[0] || trio[2] == trio[1]);
            const auto res = test_trio(trio[0], trio[1], trio[2], true);
            if (res.verdict.middle == Middle::Ambiguous) {
                continue;
            }
            std::array<Qubit, 3> by_pos = trio;
            std::sort(by_pos.begin(), by_pos.end(),
                      [&](Qubit a, Qubit b) { return position[a] < position[b]; });
            if (res.verdict.middle == Middle::NoPattern ||
                res.verdict.middle_qubit() != by_pos[1]) {
                report.outcome = Procedure1Report::Outcome::FailureAtTrial;
                report.failure_trial = trials_;
                return finish();
            }
            ++successes_;
        }
        report.outcome = Procedure1Report::Outcome::Success;
    } catch (const DegenerateError &e) {
        report.outcome = Procedure1Report::Outcome::Degenerate;
        report.detail = e.what();
        report.order.clear();
        report.pairs.clear();
    }
    return finish();
}

Sequencer::InsertOutcome insert_qubit(CoefficientOracle &oracle,
                                      const std::vector<Qubit> &known, Qubit qubit,
                                      const Procedure1Config &config) {
    Sequencer s(oracle, config);
    return s.insert_qubit(known, qubit);
}

Sequencer::SequenceOutcome sequence_all(CoefficientOracle &oracle,
                                        const Procedure1Config &config) {
    Sequencer s(oracle, config);
    return s.sequence_all();
}

std::vector<LevelPair> extract_pairs(CoefficientOracle &oracle,
                                     const std::vector<Qubit> &order) {
    Sequencer s(oracle, {});
    return s.extract_pairs(order);
}

Procedure1Report run_procedure1(CoefficientOracle &oracle,
                                const Procedure1Config &config) {
    Sequencer s(oracle, config);
    return s.run();
}

GateScript reconstruction_script(const std::vector<Qubit> &order,
                                 const std::vector<LevelPair> &pairs) {
    const int n = static_cast<int>(order.size());
    return relabel_script(build_minimal(n, pairs).script, order);
}

} // namespace stdstate
