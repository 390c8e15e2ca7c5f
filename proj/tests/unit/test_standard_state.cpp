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
#include "stdstate/standard_state.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

namespace stdstate {
namespace {

using testing::random_pair;
using testing::random_pairs;
using testing::random_pattern;

int count_cnots(const GateScript &s) {
    return static_cast<int>(std::count_if(s.begin(), s.end(), [](const Gate &g) {
        return std::holds_alternative<CnotGate>(g);
    }));
}

// Pair table where later spec entries overwrite earlier ones.
std::map<std::pair<int, BasisIndex>, LevelPair> pair_table(const StandardStateSpec &spec) {
    std::map<std::pair<int, BasisIndex>, LevelPair> t;
    for (const auto &v : spec.variants) {
        t[{v.level, pack_pattern(v.pattern)}] = v.pair;
    }
    return t;
}

void expect_matches_product_formula(const StandardStateSpec &spec, const StateVector &s,
                                    double tol) {
    const auto table = pair_table(spec);
    for (BasisIndex x = 0; x < s.dim(); ++x) {
        const Complex want = testing::product_formula_amplitude(
            spec.n, x, [&](int l, BasisIndex loc) {
                const auto it = table.find({l, loc});
                return it == table.end() ? spec.base_pairs[l - 1] : it->second;
            });
        ASSERT_NEAR(std::abs(s.amplitude(x) - want), 0.0, tol) << "x=" << x;
    }
}

StandardStateSpec random_spec(std::mt19937_64 &rng, int n, int k) {
    StandardStateSpec spec{n, random_pairs(rng, n), {}};
    for (int i = 0; i < k; ++i) {
        const int level = 1 + static_cast<int>(rng() % (n - 1));
        spec.variants.push_back({level, random_pattern(rng, n - 1 - level), random_pair(rng)});
    }
    return spec;
}

TEST(Patterns, PackUnpack) {
    EXPECT_EQ(pack_pattern({1, 0, 1, 1}), 0b1101U);
    EXPECT_EQ(unpack_pattern(0b1101, 4), (Pattern{1, 0, 1, 1}));
    EXPECT_EQ(unpack_pattern(0, 0), Pattern{});
}

TEST(Pairs, ValidationAndPhase) {
    EXPECT_NO_THROW(validate_pair({0.6, Complex(0.0, 0.8)}));
    EXPECT_THROW(validate_pair({0.6, 0.6}), ValidationError);
    const LevelPair p{Complex(0.0, 0.6), 0.8};
    const LevelPair c = canonical_phase(p);
    EXPECT_NEAR(c.alpha.imag(), 0.0, 1e-15);
    EXPECT_NEAR(c.alpha.real(), 0.6, 1e-15);
    EXPECT_TRUE(pairs_equal_up_to_phase(p, c, 1e-12));
    EXPECT_FALSE(pairs_equal_up_to_phase(p, {0.8, 0.6}, 1e-6));
}

TEST(VariantRotation, MapsBaseOntoTarget) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 100; ++i) {
        const auto base = random_pair(rng);
        const auto target = random_pair(rng);
        const Mat2 u = variant_rotation(base, target);
        EXPECT_TRUE(mat2::is_unitary(u));
        EXPECT_NEAR(std::abs(u[0] * base.alpha + u[1] * base.beta - target.alpha), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(u[2] * base.alpha + u[3] * base.beta - target.beta), 0.0, 1e-12);
    }
}

TEST(BuildMinimal, MatchesProductFormula) {
    std::mt19937_64 rng(2);
    for (int n = 2; n <= 9; ++n) {
        const StandardStateSpec spec{n, random_pairs(rng, n), {}};
        const auto r = build_minimal(spec);
        EXPECT_EQ(r.script.size(), static_cast<std::size_t>(2 * (n - 1)));
        EXPECT_EQ(count_cnots(r.script), n - 1);
        expect_matches_product_formula(spec, r.state, 1e-12);
    }
}

TEST(BuildMinimal, WorkedFiveQubitCoefficient) {
    // q1..q5 = 0,0,1,1,0 carries a1 b1 c2 d1.
    std::mt19937_64 rng(3);
    const auto pairs = random_pairs(rng, 5);
    const auto s = build_minimal(5, pairs).state;
    const std::vector<int> bits = {0, 0, 1, 1, 0};
    const Complex want = pairs[0].alpha * pairs[1].alpha * pairs[2].beta * pairs[3].alpha;
    EXPECT_NEAR(std::abs(s.amplitude(bits) - want), 0.0, 1e-14);
    // Odd parity basis states carry nothing.
    const std::vector<int> odd = {1, 0, 1, 1, 0};
    EXPECT_EQ(s.amplitude(odd), Complex(0.0));
}

TEST(BuildMinimal, ThreeQubitRegroupingInOrderOneThreeTwo) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_pairs(rng, 3);
        const Complex a1 = p[0].alpha, a2 = p[0].beta, b1 = p[1].alpha, b2 = p[1].beta;
        const auto s = build_minimal(3, p).state;
        auto amp = [&](int q1, int q3, int q2) {
            const std::vector<int> bits = {q1, q2, q3};
            return s.amplitude(bits);
        };
        const double A1 = std::sqrt(std::norm(a1 * b1) + std::norm(a2 * b2));
        const double A2 = std::sqrt(std::norm(a1 * b2) + std::norm(a2 * b1));
        EXPECT_NEAR(std::abs(amp(0, 0, 0) - (a1 * b1 / A1) * A1), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(amp(1, 1, 0) - (a2 * b2 / A1) * A1), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(amp(0, 1, 1) - (a1 * b2 / A2) * A2), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(amp(1, 0, 1) - (a2 * b1 / A2) * A2), 0.0, 1e-12);
        EXPECT_NEAR(A1 * A1 + A2 * A2, 1.0, 1e-12);
    }
}

TEST(BuildStandard, MatchesProductFormulaWithVariants) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 6);
        const int k = static_cast<int>(rng() % 7);
        const auto spec = random_spec(rng, n, k);
        const auto r = build_standard(spec);
        EXPECT_EQ(r.script.size(), static_cast<std::size_t>(2 * (n - 1) + 3 * k));
        expect_matches_product_formula(spec, r.state, 1e-12);
    }
}

TEST(BuildStandard, LaterVariantAtSameLocationWins) {
    std::mt19937_64 rng(6);
    StandardStateSpec spec{4, random_pairs(rng, 4), {}};
    spec.variants.push_back({1, {1, 0}, random_pair(rng)});
    spec.variants.push_back({2, {1}, random_pair(rng)});
    spec.variants.push_back({1, {1, 0}, random_pair(rng)});
    const auto r = build_standard(spec);
    expect_matches_product_formula(spec, r.state, 1e-12);
    const auto d = full_decompose(r.state);
    EXPECT_TRUE(pairs_equal_up_to_phase(*d.pairs[0][pack_pattern({1, 0})],
                                        spec.variants[2].pair, 1e-12));
}

TEST(BuildStandard, BuilderRejectsLowerLevelFirst) {
    std::mt19937_64 rng(7);
    StandardStateBuilder b(5, random_pairs(rng, 5));
    b.inject({1, {0, 1, 1}, random_pair(rng)});
    EXPECT_THROW(b.inject({3, {1}, random_pair(rng)}), ValidationError);
    EXPECT_NO_THROW(b.inject({1, {1, 1, 1}, random_pair(rng)}));
}

TEST(BuildStandard, InjectionEmitsCnotControlledCnot) {
    std::mt19937_64 rng(8);
    StandardStateBuilder b(5, random_pairs(rng, 5));
    const auto frag = b.inject({2, {1, 0}, random_pair(rng)});
    ASSERT_EQ(frag.size(), 3U);
    const auto &c1 = std::get<CnotGate>(frag[0]);
    const auto &cu = std::get<ControlledGate>(frag[1]);
    EXPECT_EQ(c1.control, 2);
    EXPECT_EQ(c1.target, 1);
    EXPECT_EQ(cu.target, 2);
    EXPECT_EQ(cu.controls, (std::vector<Control>{{3, 1}, {4, 0}}));
    EXPECT_TRUE(std::holds_alternative<CnotGate>(frag[2]));
}

TEST(BuildStandard, SpecValidation) {
    std::mt19937_64 rng(9);
    StandardStateSpec spec{4, random_pairs(rng, 4), {}};
    spec.variants.push_back({1, {1}, random_pair(rng)});
    EXPECT_THROW(validate_spec(spec), ValidationError);
    spec.variants = {{4, {}, random_pair(rng)}};
    EXPECT_THROW(validate_spec(spec), ValidationError);
    spec.variants = {{3, {}, {0.5, 0.5}}};
    EXPECT_THROW(validate_spec(spec), ValidationError);
    spec.variants = {{2, {0, 2}, random_pair(rng)}};
    EXPECT_THROW(validate_spec(spec), ValidationError);
    spec.variants.clear();
    spec.base_pairs.pop_back();
    EXPECT_THROW(validate_spec(spec), ValidationError);
}

TEST(HigherLevelVariant, ThreeQubitPrefixProbability) {
    // Five qubits, one variant {c3, c4} on level 3 where q5 = 0. The
    // q1 q2 q3 = 000 probability is |a1 b1|^2 (|c3 d1|^2 + |c1 d2|^2).
    std::mt19937_64 rng(10);
    StandardStateSpec spec{5, random_pairs(rng, 5), {}};
    const LevelPair v = random_pair(rng);
    spec.variants.push_back({3, {0}, v});
    const auto s = build_standard(spec).state;
    const auto &p = spec.base_pairs;
    const double a1b1 = std::norm(p[0].alpha * p[1].alpha);
    const double want =
        a1b1 * (std::norm(v.alpha * p[3].alpha) + std::norm(p[2].alpha * p[3].beta));
    const std::vector<BitAssign> prefix = {{0, 0}, {1, 0}, {2, 0}};
    EXPECT_NEAR(s.prefix_probability(prefix), want, 1e-14);
    // The alternative with c3 in both terms does not match.
    const double printed =
        a1b1 * (std::norm(v.alpha * p[3].alpha) + std::norm(v.alpha * p[3].beta));
    EXPECT_GT(std::abs(s.prefix_probability(prefix) - printed), 1e-6);
    // Shallower prefixes see the minimal-state values.
    const std::vector<BitAssign> two = {{0, 0}, {1, 0}};
    EXPECT_NEAR(s.prefix_probability(two), a1b1, 1e-14);
}

TEST(Theorem1, EmitsNCnotsAndEvenParity) {
    std::mt19937_64 rng(11);
    for (int n = 1; n <= 8; ++n) {
        const auto s = testing::random_state(rng, n);
        const auto r = theorem1_transform(s);
        EXPECT_EQ(r.state.num_qubits(), n + 1);
        EXPECT_EQ(static_cast<int>(r.script.size()), n);
        EXPECT_EQ(count_cnots(r.script), n);
        double odd = 0.0;
        for (BasisIndex x = 0; x < r.state.dim(); ++x) {
            if (std::popcount(x) % 2) {
                odd += std::norm(r.state.amplitude(x));
            }
        }
        EXPECT_NEAR(odd, 0.0, 1e-15);
        EXPECT_NEAR(r.state.norm_squared(), 1.0, 1e-12);
    }
}

TEST(Theorem1, SmallCases) {
    const auto zero = theorem1_transform(StateVector::zero(3)).state;
    EXPECT_EQ(zero.amplitude(0), Complex(1.0));
    const auto plus = StateVector::from_amplitudes({std::sqrt(0.5), std::sqrt(0.5)});
    const auto bell = theorem1_transform(plus).state;
    EXPECT_NEAR(std::abs(bell.amplitude(0b00)), std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(std::abs(bell.amplitude(0b11)), std::sqrt(0.5), 1e-15);
}

TEST(Decompose, RoundTripOnPlantedSpecs) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 8);
        const int k = n > 2 ? static_cast<int>(rng() % 6) : 0;
        const auto spec = random_spec(rng, n, k);
        const auto s = build_standard(spec).state;
        const auto d = full_decompose(s);
        ASSERT_TRUE(d.ok());
        EXPECT_NEAR(d.odd_parity_weight, 0.0, 1e-15);
        const auto table = pair_table(spec);
        for (int l = 1; l < n; ++l) {
            for (BasisIndex loc = 0; loc < (BasisIndex{1} << (n - 1 - l)); ++loc) {
                const auto it = table.find({l, loc});
                const LevelPair want = it == table.end() ? spec.base_pairs[l - 1] : it->second;
                const LevelPair got = *d.pairs[l - 1][loc];
                // Canonical planted pairs come back exactly.
                ASSERT_NEAR(std::abs(got.alpha - want.alpha), 0.0, 1e-10) << l << " " << loc;
                ASSERT_NEAR(std::abs(got.beta - want.beta), 0.0, 1e-10) << l << " " << loc;
            }
        }
        const auto rebuilt = build_standard(d.to_spec(1e-12)).state;
        EXPECT_GE(overlap_magnitude(rebuilt, s), 1.0 - 1e-10);
    }
}

TEST(Decompose, ReportsDegenerateLocations) {
    std::vector<Complex> amps(8, 0.0);
    amps[0] = 1.0; // every other even leaf is zero
    const auto d = full_decompose(StateVector::from_amplitudes(amps));
    EXPECT_FALSE(d.ok());
    EXPECT_THROW((void)d.to_spec(), DegenerateError);
    EXPECT_THROW(full_decompose(StateVector::zero(kMaxDecomposeQubits + 1)), SizeError);
}

TEST(Decompose, DeviatingLocationsMatchPlanted) {
    std::mt19937_64 rng(13);
    const auto spec = random_spec(rng, 7, 5);
    const auto d = full_decompose(build_standard(spec).state);
    std::set<std::pair<int, BasisIndex>> want;
    for (const auto &[key, pair] : pair_table(spec)) {
        want.insert(key);
    }
    const auto got = d.deviating_locations(spec.base_pairs, 1e-9);
    const std::set<std::pair<int, BasisIndex>> got_set(got.begin(), got.end());
    EXPECT_EQ(got_set, want);
}

TEST(Sparse, ScriptLengthAndFidelity) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const BasisIndex dim = BasisIndex{1} << n;
        const int m = 1 + static_cast<int>(rng() % std::min<BasisIndex>(dim, 16));
        std::set<BasisIndex> idx;
        while (static_cast<int>(idx.size()) < m) {
            idx.insert(rng() % dim);
        }
        std::vector<SparseEntry> target;
        std::vector<Complex> dense(dim, 0.0);
        double norm = 0.0;
        for (auto i : idx) {
            target.push_back({i, testing::gaussian(rng)});
            norm += std::norm(target.back().amp);
        }
        for (auto &e : target) {
            e.amp /= std::sqrt(norm);
            dense[e.index] = e.amp;
        }
        const auto r = sparse_synthesize(n, target);
        EXPECT_LE(static_cast<int>(r.script.size()), m);
        const auto want = StateVector::from_amplitudes(dense);
        EXPECT_GE(overlap_magnitude(simulate(n, r.script), want), 1.0 - 1e-12);
        EXPECT_GE(overlap_magnitude(r.state, want), 1.0 - 1e-12);
    }
    EXPECT_THROW(sparse_synthesize(3, {}), ValidationError);
}

TEST(Relabel, ScriptFollowsQubitPermutation) {
    std::mt19937_64 rng(15);
    const auto spec = random_spec(rng, 6, 3);
    const auto r = build_standard(spec);
    const auto order = testing::random_permutation(rng, 6);
    const auto moved = simulate(6, relabel_script(r.script, order));
    EXPECT_GE(overlap_magnitude(moved, r.state.permuted(order)), 1.0 - 1e-12);
}

} // namespace
} // namespace stdstate
