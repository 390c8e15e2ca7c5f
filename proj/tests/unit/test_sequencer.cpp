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
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

namespace stdstate {
namespace {

using testing::random_pairs;

bool same_or_reversed(const std::vector<Qubit> &got, const std::vector<Qubit> &want) {
    return got == want || std::equal(got.begin(), got.end(), want.rbegin(), want.rend());
}

// Order of the physical qubits after relabelling level position p -> perm[p].
std::vector<Qubit> true_order(const std::vector<int> &perm) { return perm; }

TEST(TrioTest, FiveQubitWorkedTrios) {
    std::mt19937_64 rng(1);
    const auto p = random_pairs(rng, 5);
    const auto s = build_minimal(5, p).state;
    StateOracle oracle(s);
    const Complex a1 = p[0].alpha, a2 = p[0].beta, b1 = p[1].alpha, b2 = p[1].beta;
    const Complex c1 = p[2].alpha, c2 = p[2].beta, d1 = p[3].alpha, d2 = p[3].beta;

    // (q4, q3, q1) with q2 q5 = 00.
    auto v = trio_test(oracle, 3, 2, 0, 0);
    EXPECT_EQ(v.middle, Middle::K);
    EXPECT_EQ(v.middle_qubit(), 2);
    EXPECT_NEAR(std::abs(v.coeffs[0] - a1 * b1 * c1 * d1), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(v.coeffs[1] - a1 * b1 * c2 * d1), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(v.coeffs[2] - a2 * b2 * c1 * d1), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(v.coeffs[3] - a2 * b2 * c2 * d1), 0.0, 1e-14);

    // (q4, q1, q2) with q3 q5 = 00.
    v = trio_test(oracle, 3, 0, 1, 0);
    EXPECT_EQ(v.middle_qubit(), 1);
    EXPECT_NEAR(std::abs(v.coeffs[1] - a2 * b2 * c2 * d1), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(v.coeffs[2] - a2 * b1 * c1 * d1), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(v.coeffs[3] - a1 * b2 * c2 * d1), 0.0, 1e-14);

    // (q4, q1, q5) with q2 q3 = 00.
    v = trio_test(oracle, 3, 0, 4, 0);
    EXPECT_EQ(v.middle_qubit(), 3);
    EXPECT_NEAR(std::abs(v.coeffs[3] - a1 * b1 * c1 * d2), 0.0, 1e-14);

    // (q1, q3, q2) with q4 q5 = 00.
    v = trio_test(oracle, 0, 2, 1, 0);
    EXPECT_EQ(v.middle_qubit(), 1);
    EXPECT_EQ(oracle.retrievals(), 16U);
}

TEST(TrioTest, EveryEvenFillerGivesTheSameVerdict) {
    std::mt19937_64 rng(2);
    const auto s = build_minimal(6, random_pairs(rng, 6)).state;
    StateOracle oracle(s);
    // Trio (5, 1, 3): positions 5, 1, 3, so 3 is in the middle.
    for (BasisIndex f = 0; f < 64; ++f) {
        if ((f & 0b101010) || std::popcount(f) % 2) {
            continue;
        }
        EXPECT_EQ(trio_test(oracle, 5, 1, 3, f).middle_qubit(), 3) << f;
    }
}

TEST(TrioTest, InputErrors) {
    std::mt19937_64 rng(3);
    const auto s = build_minimal(4, random_pairs(rng, 4)).state;
    StateOracle oracle(s);
    EXPECT_THROW(trio_test(oracle, 0, 0, 1, 0), ValidationError);
    EXPECT_THROW(trio_test(oracle, 0, 1, 2, 0b0001), ValidationError);
    EXPECT_THROW(trio_test(oracle, 0, 1, 4, 0), SizeError);
    const auto basis = StateVector::zero(4);
    StateOracle zero_oracle(basis);
    EXPECT_THROW(trio_test(zero_oracle, 0, 1, 2, 0), DegenerateError);
}

TEST(TrioTest, DenseStateShowsNoPattern) {
    std::mt19937_64 rng(4);
    const auto s = testing::random_state(rng, 5);
    StateOracle oracle(s);
    EXPECT_EQ(trio_test(oracle, 0, 1, 2, 0).middle, Middle::NoPattern);
}

TEST(TrioTest, SymmetricPairsAreAmbiguous) {
    const double h = std::sqrt(0.5);
    const std::vector<LevelPair> pairs(4, LevelPair{h, h});
    const auto s = build_minimal(5, pairs).state;
    StateOracle oracle(s);
    EXPECT_EQ(trio_test(oracle, 0, 1, 2, 0).middle, Middle::Ambiguous);
    const auto r = run_procedure1(oracle);
    EXPECT_EQ(r.outcome, Procedure1Report::Outcome::Ambiguous);
}

TEST(Insert, FiveQubitWorkedInsertions) {
    std::mt19937_64 rng(5);
    const auto s = build_minimal(5, random_pairs(rng, 5)).state;
    StateOracle oracle(s);
    // Known (q1, q2, q4); q5 goes to the right end after one trial.
    auto r = insert_qubit(oracle, {0, 1, 3}, 4);
    ASSERT_TRUE(r.position);
    EXPECT_EQ(*r.position, 3);
    EXPECT_EQ(r.trials, 1);
    // Known (q1, q2, q4, q5); q3 needs (q1, q5, q3) then (q2, q4, q3).
    r = insert_qubit(oracle, {0, 1, 3, 4}, 2);
    ASSERT_TRUE(r.position);
    EXPECT_EQ(*r.position, 2);
    EXPECT_EQ(r.trials, 2);
    // Left end and a reversed known sequence.
    r = insert_qubit(oracle, {1, 2, 3}, 0);
    EXPECT_EQ(*r.position, 0);
    r = insert_qubit(oracle, {4, 3, 1}, 2);
    EXPECT_EQ(*r.position, 2);
    EXPECT_THROW(insert_qubit(oracle, {0, 1}, 2), ValidationError);
}

TEST(Insert, TrialCountWithinBoundForEveryPosition) {
    std::mt19937_64 rng(6);
    const int n = 10;
    const auto s = build_minimal(n, random_pairs(rng, n)).state;
    StateOracle oracle(s);
    for (Qubit q = 0; q < n; ++q) {
        std::vector<Qubit> known;
        for (Qubit k = 0; k < n; ++k) {
            if (k != q) {
                known.push_back(k);
            }
        }
        const auto r = insert_qubit(oracle, known, q);
        ASSERT_TRUE(r.position);
        EXPECT_EQ(*r.position, q);
        EXPECT_LE(r.trials, (static_cast<int>(known.size()) + 1) / 2);
    }
}

TEST(Sequence, RecoversHiddenOrderUnderRelabeling) {
    std::mt19937_64 rng(7);
    for (int n = 3; n <= 12; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto perm = testing::random_permutation(rng, n);
            const auto s = build_minimal(n, random_pairs(rng, n)).state.permuted(perm);
            StateOracle oracle(s);
            Procedure1Config cfg;
            cfg.seed = rng();
            const auto r = sequence_all(oracle, cfg);
            ASSERT_TRUE(r.order) << n;
            EXPECT_TRUE(same_or_reversed(*r.order, true_order(perm)));
            EXPECT_LE(r.trials, sequencing_trial_bound(n));
        }
    }
}

TEST(Sequence, TrialBound) {
    EXPECT_EQ(sequencing_trial_bound(3), 2);
    EXPECT_EQ(sequencing_trial_bound(5), 2 + 2 + 3);
    EXPECT_EQ(sequencing_trial_bound(2), 0);
}

TEST(Extract, RecoversPairsAndReversal) {
    std::mt19937_64 rng(8);
    const int n = 7;
    const auto pairs = random_pairs(rng, n);
    const auto perm = testing::random_permutation(rng, n);
    const auto s = build_minimal(n, pairs).state.permuted(perm);
    StateOracle oracle(s);
    const auto got = extract_pairs(oracle, perm);
    ASSERT_EQ(got.size(), pairs.size());
    for (std::size_t l = 0; l < pairs.size(); ++l) {
        EXPECT_TRUE(pairs_equal_up_to_phase(got[l], pairs[l], 1e-12)) << l;
    }
    EXPECT_EQ(oracle.retrievals(), static_cast<std::uint64_t>(n));
    const std::vector<Qubit> reversed(perm.rbegin(), perm.rend());
    const auto rev = extract_pairs(oracle, reversed);
    for (std::size_t l = 0; l < pairs.size(); ++l) {
        EXPECT_TRUE(pairs_equal_up_to_phase(rev[l], pairs[pairs.size() - 1 - l], 1e-12)) << l;
    }
}

TEST(Extract, ZeroDenominatorIsDegenerate) {
    std::mt19937_64 rng(9);
    auto pairs = random_pairs(rng, 4);
    pairs[1] = {1.0, 0.0};
    const auto s = build_minimal(4, pairs).state;
    StateOracle oracle(s);
    EXPECT_THROW(extract_pairs(oracle, {0, 1, 2, 3}), DegenerateError);
}

TEST(Procedure1, MinimalStateSucceedsAndRebuilds) {
    std::mt19937_64 rng(10);
    for (int n = 3; n <= 10; ++n) {
        const auto perm = testing::random_permutation(rng, n);
        const auto s = build_minimal(n, random_pairs(rng, n)).state.permuted(perm);
        StateOracle oracle(s);
        Procedure1Config cfg;
        cfg.extra_confirm_trials = 25;
        cfg.seed = 99;
        const auto r = run_procedure1(oracle, cfg);
        ASSERT_EQ(r.outcome, Procedure1Report::Outcome::Success);
        EXPECT_EQ(r.successes, r.trials_used);
        EXPECT_EQ(r.retrievals_used, oracle.retrievals());
        EXPECT_GE(r.log.size(), static_cast<std::size_t>(r.trials_used));
        const auto rebuilt = simulate(n, reconstruction_script(r.order, r.pairs));
        EXPECT_GE(overlap_magnitude(rebuilt, s), 1.0 - 1e-10);
        EXPECT_EQ(reconstruction_script(r.order, r.pairs).size(),
                  static_cast<std::size_t>(2 * (n - 1)));
    }
}

TEST(Procedure1, DenseStateFailsEarly) {
    std::mt19937_64 rng(11);
    int first_trial = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = testing::random_state(rng, 8);
        StateOracle oracle(s);
        const auto r = run_procedure1(oracle);
        ASSERT_EQ(r.outcome, Procedure1Report::Outcome::FailureAtTrial);
        first_trial += r.failure_trial == 1 ? 1 : 0;
    }
    EXPECT_EQ(first_trial, 20);
}

TEST(Procedure1, DeterministicForSeed) {
    std::mt19937_64 rng(12);
    const auto s = build_minimal(9, random_pairs(rng, 9)).state;
    StateOracle o1(s), o2(s);
    Procedure1Config cfg;
    cfg.seed = 5;
    cfg.extra_confirm_trials = 10;
    const auto a = run_procedure1(o1, cfg);
    const auto b = run_procedure1(o2, cfg);
    ASSERT_EQ(a.log.size(), b.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i) {
        EXPECT_EQ(a.log[i].filler, b.log[i].filler);
        EXPECT_EQ(a.log[i].trio, b.log[i].trio);
    }
}

TEST(Procedure1, BlindToVariantAtUntouchedLocation) {
    std::mt19937_64 rng(13);
    const int n = 10;
    const auto pairs = random_pairs(rng, n);
    const auto minimal = build_minimal(n, pairs).state;
    Procedure1Config cfg;
    cfg.seed = 21;
    StateOracle o1(minimal);
    const auto before = run_procedure1(o1, cfg);
    ASSERT_EQ(before.outcome, Procedure1Report::Outcome::Success);

    // Basis states read during the run: four per attempt plus the pair reads.
    std::set<BasisIndex> seen = {0};
    for (const auto &t : before.log) {
        const BasisIndex j = BasisIndex{1} << t.trio[0], k = BasisIndex{1} << t.trio[1],
                         m = BasisIndex{1} << t.trio[2];
        for (BasisIndex x : {t.filler, t.filler | j | k, t.filler | k | m, t.filler | j | m}) {
            seen.insert(x);
        }
    }
    for (int l = 1; l < n; ++l) {
        seen.insert((BasisIndex{1} << before.order[l - 1]) | (BasisIndex{1} << before.order[l]));
    }
    // A level-1 location is the assignment of qubits 2..n-1.
    std::optional<BasisIndex> untouched;
    for (BasisIndex loc = 0; loc < (BasisIndex{1} << (n - 2)) && !untouched; ++loc) {
        bool hit = false;
        for (BasisIndex x : seen) {
            hit = hit || (x >> 2) == loc;
        }
        if (!hit) {
            untouched = loc;
        }
    }
    ASSERT_TRUE(untouched);
    StandardStateSpec spec{n, pairs, {{1, unpack_pattern(*untouched, n - 2), testing::random_pair(rng)}}};
    const auto varied = build_standard(spec).state;
    StateOracle o2(varied);
    const auto after = run_procedure1(o2, cfg);
    EXPECT_EQ(after.outcome, Procedure1Report::Outcome::Success);
    EXPECT_EQ(after.order, before.order);
    EXPECT_LT(overlap_magnitude(varied, minimal), 1.0 - 1e-6);
}

} // namespace
} // namespace stdstate
