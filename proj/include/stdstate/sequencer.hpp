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
 * Recovers the hidden qubit order of a minimal standard state from a few
 * retrieved coefficients, then reads off the pair on every level.
 *
 * A trio (j, k, m) with a filler assignment f on the other qubits is
 * tested with four coefficients
 *
 *     C00 = <00_jk 0_m f|psi>   C11 = <11_jk 0_m f|psi>
 *     C01 = <01_jk 1_m f|psi>   C10 = <10_jk 1_m f|psi>
 *
 * and the ratio pattern that holds names the qubit in the middle:
 *
 *     C00 C10 = C11 C01   ->  k is in the middle
 *     C00 C11 = C10 C01   ->  m is in the middle
 *     C00 C01 = C11 C10   ->  j is in the middle
 *
 * All four basis states have even parity on the trio, so the filler must
 * also have even parity or a standard state returns four zeros. There are
 * 2^(n-4) such fillers.
 */
#pragma once

#include "stdstate/standard_state.hpp"
#include "stdstate/statevector.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace stdstate {

/// Read access to the coefficients of an n-qubit state. Every call to
/// retrieve() is counted.
class CoefficientOracle {
  public:
    virtual ~CoefficientOracle() = default;

    [[nodiscard]] virtual int num_qubits() const = 0;

    Complex retrieve(BasisIndex index) {
        ++retrievals_;
        return fetch(index);
    }

    [[nodiscard]] std::uint64_t retrievals() const { return retrievals_; }

  protected:
    virtual Complex fetch(BasisIndex index) = 0;

  private:
    std::uint64_t retrievals_ = 0;
};

/// Oracle backed by a simulated state.
class StateOracle final : public CoefficientOracle {
  public:
    explicit StateOracle(const StateVector &state) : state_(&state) {}
    [[nodiscard]] int num_qubits() const override { return state_->num_qubits(); }

  protected:
    Complex fetch(BasisIndex index) override { return state_->amplitude(index); }

  private:
    const StateVector *state_;
};

/// Cross-multiplied equality |A - B| <= rel * max(|A|, |B|, floor_abs).
struct RatioTolerance {
    double rel = 1e-9;
    double floor_abs = 1e-24;
};

enum class Middle { J, K, M, NoPattern, Ambiguous };

std::string to_string(Middle m);

struct TrioVerdict {
    std::array<Qubit, 3> trio; ///< (j, k, m)
    BasisIndex filler;         ///< full basis index; trio bits are zero
    Middle middle;
    std::array<Complex, 4> coeffs; ///< C00, C11, C01, C10
    std::array<bool, 3> holds;     ///< pattern for j, k, m middle

    /// Qubit named by `middle`; only valid for J, K or M.
    [[nodiscard]] Qubit middle_qubit() const;
};

/// One trio evaluation with a given filler. Throws ValidationError on
/// repeated qubits or a filler that sets a trio bit, DegenerateError when
/// every cross product is zero.
TrioVerdict trio_test(CoefficientOracle &oracle, Qubit j, Qubit k, Qubit m,
                      BasisIndex filler, const RatioTolerance &tol = {});

/// Upper bound on sequencing trials: sum_{h=3}^{n} floor((h+1)/2).
int sequencing_trial_bound(int n);

struct TrialRecord {
    std::array<Qubit, 3> trio;
    BasisIndex filler;
    Middle middle;
    bool confirm; ///< true for post-sequencing confirmation trials
};

struct Procedure1Config {
    RatioTolerance tol;
    int extra_confirm_trials = 0;
    int ambiguity_retries = 8;
    std::uint64_t seed = 0;
};

struct Procedure1Report {
    enum class Outcome { Success, FailureAtTrial, Ambiguous, Degenerate };

    Outcome outcome = Outcome::Success;
    /// 1-based index of the failing trial (FailureAtTrial only).
    int failure_trial = 0;
    /// Physical qubits from the innermost level outward; valid up to reversal.
    std::vector<Qubit> order;
    std::vector<LevelPair> pairs;
    int trials_used = 0;
    /// Trials whose verdict agreed with a minimal standard state.
    int successes = 0;
    std::uint64_t retrievals_used = 0;
    std::string detail;
    std::vector<TrialRecord> log;
};

std::string to_string(Procedure1Report::Outcome o);

/// Stateful driver for the ordering procedure. Fillers are drawn uniformly
/// from the even-parity assignments of the non-trio qubits.
class Sequencer {
  public:
    Sequencer(CoefficientOracle &oracle, Procedure1Config config);

    struct TrioOutcome {
        TrioVerdict verdict;
        int attempts;
    };

    /// Tests a trio with a random filler, retrying on ambiguity or
    /// degeneracy. Counts one trial. Throws DegenerateError if every
    /// attempt was degenerate.
    TrioOutcome test_trio(Qubit j, Qubit k, Qubit m, bool confirm = false);

    struct InsertOutcome {
        std::optional<int> position; ///< empty on failure
        int trials;
        Middle failure = Middle::NoPattern;
    };

    /// Finds where `qubit` goes in `known` (correct up to reversal, h >= 3)
    /// with at most floor((h+1)/2) trials.
    InsertOutcome insert_qubit(const std::vector<Qubit> &known, Qubit qubit);

    struct SequenceOutcome {
        std::optional<std::vector<Qubit>> order;
        int trials;
        Middle failure = Middle::NoPattern;
    };

    /// Seeds with the trio (0, 1, 2) and inserts 3..n-1 in ascending order.
    SequenceOutcome sequence_all();

    /// Pair of every level from 1 + (n-1) retrievals. Throws
    /// DegenerateError on a zero denominator.
    std::vector<LevelPair> extract_pairs(const std::vector<Qubit> &order);

    Procedure1Report run();

    [[nodiscard]] int trials_used() const { return trials_; }
    [[nodiscard]] int successes() const { return successes_; }
    [[nodiscard]] const std::vector<TrialRecord> &log() const { return log_; }

  private:
    BasisIndex random_filler(Qubit j, Qubit k, Qubit m);

    CoefficientOracle &oracle_;
    Procedure1Config config_;
    std::mt19937_64 rng_;
    int trials_ = 0;
    int successes_ = 0;
    std::vector<TrialRecord> log_;
};

/// Convenience wrappers with a fresh Sequencer.
Sequencer::InsertOutcome insert_qubit(CoefficientOracle &oracle,
                                      const std::vector<Qubit> &known,
                                      Qubit qubit, const Procedure1Config &config = {});
Sequencer::SequenceOutcome sequence_all(CoefficientOracle &oracle,
                                        const Procedure1Config &config = {});
std::vector<LevelPair> extract_pairs(CoefficientOracle &oracle,
                                     const std::vector<Qubit> &order);
Procedure1Report run_procedure1(CoefficientOracle &oracle,
                                const Procedure1Config &config = {});

/// Minimal-state circuit for a recovered order and pair list, expressed on
/// the physical qubits.
GateScript reconstruction_script(const std::vector<Qubit> &order,
                                 const std::vector<LevelPair> &pairs);

} // namespace stdstate
