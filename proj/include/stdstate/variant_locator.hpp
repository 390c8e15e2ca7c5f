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
 * Locates variant pairs of a standard state by prefix projection
 * measurements, given the qubit order and base pairs from the sequencer.
 *
 * Positions refer to the recovered order: position p is physical qubit
 * order[p]. A node of depth d fixes the bits x_0..x_{d-1}, equivalently
 * y_1..y_d with y_j = x_0 ^ ... ^ x_{j-1}, and its probability only feels
 * variants on levels 1..d. Under the minimal state
 *
 *     P(prefix) = prod_{j=1}^{d} |pair_j[y_j]|^2.
 *
 * The tree starts at x_0 = 0 (the x_0 = 1 probability is its complement).
 * Both children of a flagged node are measured. A depth with nothing
 * flagged continues through the all-zero child of its lowest prefix, so
 * variants on higher levels are still reached. Depth n-1 fixes every y.
 *
 * The tree follows one branch below a clean depth, so a variant on a high
 * level and a few lower-level variants confined to that branch can fit it
 * equally well. locate_variants resolves such ties with probe leaves.
 */
#pragma once

#include "stdstate/standard_state.hpp"
#include "stdstate/statevector.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace stdstate {

struct PrefixMeasurement {
    double probability;
    std::uint64_t shots; ///< 0 for an exact value
};

/// Source of prefix probabilities on physical qubits.
class PrefixSource {
  public:
    virtual ~PrefixSource() = default;
    [[nodiscard]] virtual int num_qubits() const = 0;
    /// Shots each measurement will consume; 0 when exact.
    [[nodiscard]] virtual std::uint64_t shots_per_measurement() const = 0;
    virtual PrefixMeasurement measure(std::span<const BitAssign> prefix,
                                      std::uint64_t seed) = 0;
};

class ExactPrefixSource final : public PrefixSource {
  public:
    explicit ExactPrefixSource(const StateVector &state) : state_(&state) {}
    [[nodiscard]] int num_qubits() const override { return state_->num_qubits(); }
    [[nodiscard]] std::uint64_t shots_per_measurement() const override { return 0; }
    PrefixMeasurement measure(std::span<const BitAssign> prefix,
                              std::uint64_t seed) override;

  private:
    const StateVector *state_;
};

/// Binomial shot noise around the exact prefix probability.
class ShotPrefixSource final : public PrefixSource {
  public:
    ShotPrefixSource(const StateVector &state, std::uint64_t shots);
    [[nodiscard]] int num_qubits() const override { return state_->num_qubits(); }
    [[nodiscard]] std::uint64_t shots_per_measurement() const override { return shots_; }
    PrefixMeasurement measure(std::span<const BitAssign> prefix,
                              std::uint64_t seed) override;

  private:
    const StateVector *state_;
    std::uint64_t shots_;
};

/// Minimal-state probability of a depth-d prefix; bit p of `prefix` is the
/// value at position p. Requires 0 <= d <= base.size().
double expected_prefix_prob(const std::vector<LevelPair> &base, BasisIndex prefix,
                            int depth);

struct LocatorConfig {
    /// Shot mode flags |measured - expected| > threshold * sem.
    double flag_threshold = 5.0;
    /// Exact mode flags |measured - expected| > exact_tol.
    double exact_tol = 1e-11;
    std::uint64_t seed = 0;
    /// 0 means unlimited.
    std::uint64_t max_total_shots = 0;
    std::size_t max_nodes = std::size_t{1} << 16;
    /// Extra leaves locate_variants may measure to separate explanations
    /// that fit the tree equally well. 0 keeps the plain tree.
    int max_probes = 64;
};

struct MeasurementNode {
    int depth;
    BasisIndex prefix; ///< bit p = x at position p
    int parent;        ///< index into nodes, -1 for the root
    double expected_p;
    double measured_p;
    /// Binomial standard error of the minimal-state expectation; 0 if exact.
    double sem;
    std::uint64_t shots;
    bool flagged;
    /// Leaf measured to separate competing fits rather than by expansion.
    bool probe = false;
};

struct MeasurementTree {
    int n = 0;
    std::vector<Qubit> order;
    std::vector<MeasurementNode> nodes;
    bool truncated = false;
    std::uint64_t total_shots = 0;

    [[nodiscard]] int depth_reached() const;
    [[nodiscard]] std::size_t flagged_count() const;
};

MeasurementTree explore_tree(PrefixSource &source, const std::vector<Qubit> &order,
                             const std::vector<LevelPair> &base,
                             const LocatorConfig &config = {});

struct VariantFinding {
    int level;
    Pattern pattern; ///< x at positions level+1 .. n-1
    double abs_alpha;
    double abs_beta;
    BasisIndex leaf_prefix; ///< leaf whose probability fixed the magnitudes
};

struct Localization {
    std::vector<VariantFinding> findings;
    /// Deviating leaves that no single-variant explanation could absorb.
    std::vector<BasisIndex> unresolved;
};

/// Fits variant magnitudes to the measured tree. Starting from the minimal
/// model, repeatedly adds the (level, location, magnitude) hypothesis
/// taken from a mismatched leaf that leaves the fewest nodes mismatched.
Localization derive_variant_magnitudes(const MeasurementTree &tree,
                                       const std::vector<LevelPair> &base,
                                       const LocatorConfig &config = {});

struct LocatorResult {
    MeasurementTree tree;
    Localization localization;
};

/// Tree exploration, fit, then up to max_probes probe leaves: while the
/// fit has a rival that drops one of its variants and matches every
/// measured node as well, the leaf where the two disagree most is measured
/// and the fit repeated.
LocatorResult locate_variants(PrefixSource &source, const std::vector<Qubit> &order,
                              const std::vector<LevelPair> &base,
                              const LocatorConfig &config = {});

/// K (2n - 3).
std::int64_t node_count_bound(std::int64_t k, int n);

} // namespace stdstate
