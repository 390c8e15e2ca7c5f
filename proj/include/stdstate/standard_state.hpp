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
 * Standard states: the leveled construction (a 1-qubit unitary on qubit l
 * followed by CNOT l -> l-1, for l = 1 .. n-1), variant pairs injected at a
 * control-pattern location, the n-CNOT transform of an arbitrary state
 * into standard form, and a brute-force decomposition used as an oracle.
 *
 * Level l (1 <= l <= n-1) is the layer whose pair is introduced by the
 * rotation on qubit l. Its location is the assignment of qubits l+1..n-1.
 *
 * A standard state is supported on even-parity basis states. Writing
 * y_i = x_i ^ x_{i+1} ^ ... ^ x_{n-1} for basis bits x, its amplitude is
 *
 *     amp(x) = prod_{l=1}^{n-1} pair_l(location x_{l+1..n-1})[y_l]
 *
 * so component 0 of a pair is the one multiplying y_l = 0.
 */
#pragma once

#include "stdstate/gate.hpp"
#include "stdstate/statevector.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace stdstate {

constexpr double kPairNormTol = 1e-10;
constexpr double kZeroAmplitude = 1e-12;

struct LevelPair {
    Complex alpha;
    Complex beta;

    [[nodiscard]] Complex operator[](int y) const { return y ? beta : alpha; }
    [[nodiscard]] double norm_squared() const {
        return std::norm(alpha) + std::norm(beta);
    }
};

/// Throws ValidationError unless |alpha|^2 + |beta|^2 = 1 within 1e-10.
void validate_pair(const LevelPair &p);

/// Same pair up to a common phase: |<a|b>| >= 1 - tol.
bool pairs_equal_up_to_phase(const LevelPair &a, const LevelPair &b,
                             double tol);

/// Rotates the pair so alpha is real and non-negative (beta if alpha = 0).
LevelPair canonical_phase(const LevelPair &p);

/// Bits of qubits level+1 .. level+pattern.size(), lowest qubit first.
using Pattern = std::vector<int>;

/// Packs a pattern into an integer, bit m = pattern[m].
BasisIndex pack_pattern(const Pattern &p);
Pattern unpack_pattern(BasisIndex bits, int length);

struct VariantSpec {
    int level; ///< 1 .. n-1
    Pattern pattern;
    LevelPair pair;
};

struct StandardStateSpec {
    int n;
    std::vector<LevelPair> base_pairs; ///< base_pairs[l-1] is level l
    std::vector<VariantSpec> variants;
};

struct BuildResult {
    StateVector state;
    GateScript script;
};

/// U = V_target V_base^dagger with V_p = completion(p.alpha, p.beta).
Mat2 variant_rotation(const LevelPair &base, const LevelPair &target);

/// Leveled construction without variants: n-1 rotations and n-1 CNOTs.
BuildResult build_minimal(int n, const std::vector<LevelPair> &base_pairs);
BuildResult build_minimal(const StandardStateSpec &spec);

/// Incremental standard-state construction. Tracks the pair currently
/// present at every touched location so repeated injections compose.
class StandardStateBuilder {
  public:
    StandardStateBuilder(int n, std::vector<LevelPair> base_pairs);

    /// Emits CNOT l->l-1, the pattern-controlled rotation on qubit l, and
    /// CNOT l->l-1 again. Variants must arrive in non-increasing level
    /// order; a lower-level variant already present would be entangled
    /// with the target qubit. Returns the three emitted gates.
    GateScript inject(const VariantSpec &v);

    [[nodiscard]] const StateVector &state() const { return state_; }
    [[nodiscard]] const GateScript &script() const { return script_; }
    [[nodiscard]] LevelPair current_pair(int level, BasisIndex pattern) const;

    [[nodiscard]] BuildResult release() && {
        return {std::move(state_), std::move(script_)};
    }

  private:
    int n_;
    std::vector<LevelPair> base_;
    std::map<std::pair<int, BasisIndex>, LevelPair> current_;
    int lowest_injected_;
    StateVector state_;
    GateScript script_;
};

/// Single-injection helper on a builder; see StandardStateBuilder::inject.
GateScript inject_variant(StandardStateBuilder &builder, const VariantSpec &v);

/// Minimal construction followed by every variant, highest level first
/// (stable within a level, so later entries overwrite earlier ones at the
/// same location). Emits 2(n-1) + 3K gates.
BuildResult build_standard(const StandardStateSpec &spec);

/// Checks pair normalisation, level ranges and pattern lengths.
void validate_spec(const StandardStateSpec &spec);

/// Appends qubit n in |0>, then applies CNOT 0->n and CNOT l->l-1 for
/// l = 1..n-1: exactly n CNOTs. The output is supported on even parity.
BuildResult theorem1_transform(const StateVector &state);

/// Pair value at every level and location, read off all amplitudes.
struct FullDecomposition {
    int n = 0;
    /// pairs[l-1][packed location pattern] for level l.
    std::vector<std::vector<std::optional<LevelPair>>> pairs;
    /// Locations where both branches are below the zero threshold.
    std::vector<std::pair<int, BasisIndex>> degenerate;
    /// Probability carried by odd-parity basis states (zero if standard).
    double odd_parity_weight = 0.0;

    [[nodiscard]] bool ok() const { return degenerate.empty(); }

    /// Spec whose build reproduces the decomposed state up to global phase:
    /// base pairs from the all-zero location and one variant for every
    /// other location that differs. Throws DegenerateError if !ok().
    [[nodiscard]] StandardStateSpec to_spec(double tol = 1e-12) const;

    /// Locations (level, packed pattern) whose pair differs from the
    /// given base pairs up to phase.
    [[nodiscard]] std::vector<std::pair<int, BasisIndex>>
    deviating_locations(const std::vector<LevelPair> &base, double tol) const;
};

/// Exponential-cost oracle; requires n <= 14 and a nonzero state.
FullDecomposition full_decompose(const StateVector &state);

constexpr int kMaxDecomposeQubits = 14;

struct SparseEntry {
    BasisIndex index;
    Complex amp;
};

/// Prepares a sparse state with at most one two-level gate (always
/// involving entry 0) per nonzero entry outside index 0.
BuildResult sparse_synthesize(int n, const std::vector<SparseEntry> &target);

/// Renames qubits in a script: qubit q becomes order[q].
GateScript relabel_script(const GateScript &script, const std::vector<int> &order);

} // namespace stdstate
