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
 * Dense state vector with exact gate application and projection
 * measurement probabilities.
 *
 * Index convention: bit j (least significant first) of a basis index is
 * the value of qubit j. Qubit 0 is the first qubit of the register.
 */
#pragma once

#include "stdstate/gate.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#ifndef STDSTATE_MAX_QUBITS
#define STDSTATE_MAX_QUBITS 30
#endif

namespace stdstate {

constexpr int kMaxQubits = STDSTATE_MAX_QUBITS;

/// One (qubit, bit) pair of a partial basis assignment.
struct BitAssign {
    Qubit qubit;
    int bit;
};

class StateVector {
  public:
    /// |0...0> on n qubits. Throws SizeError unless 1 <= n <= kMaxQubits.
    static StateVector zero(int n);

    /// Takes ownership of 2^n amplitudes. Throws SizeError on a length that
    /// is not a power of two in range, ValidationError on non-finite values.
    static StateVector from_amplitudes(std::vector<Complex> amps);

    [[nodiscard]] int num_qubits() const { return n_; }
    [[nodiscard]] BasisIndex dim() const { return BasisIndex{1} << n_; }

    [[nodiscard]] std::span<const Complex> amplitudes() const { return amps_; }
    [[nodiscard]] Complex amplitude(BasisIndex index) const;
    /// Amplitude of the basis state given by one bit per qubit.
    [[nodiscard]] Complex amplitude(std::span<const int> bits) const;

    [[nodiscard]] double norm_squared() const;
    void normalize();

    /// Applies g in place after validating it against this register.
    void apply(const Gate &g);
    void apply(const GateScript &script);

    /// Sum of |amp|^2 over basis states consistent with `assign`.
    /// Throws ValidationError on a repeated qubit, SizeError on a bad index.
    [[nodiscard]] double prefix_probability(std::span<const BitAssign> assign) const;

    /// Returns a copy of this state with `extra` fresh |0> qubits appended
    /// at the high end of the register.
    [[nodiscard]] StateVector with_appended_qubits(int extra) const;

    /// Relabels qubits: qubit j of this state becomes qubit perm[j].
    [[nodiscard]] StateVector permuted(std::span<const int> perm) const;

  private:
    StateVector(int n, std::vector<Complex> amps)
        : n_(n), amps_(std::move(amps)) {}

    int n_;
    std::vector<Complex> amps_;
};

/// Functional form of StateVector::apply.
StateVector apply_gate(StateVector state, const Gate &g);

/// Simulates a script from |0...0>.
StateVector simulate(int n, const GateScript &script);

/// |<a|b>|; throws ValidationError on a qubit-count mismatch.
double overlap_magnitude(const StateVector &a, const StateVector &b);

/// True iff |<a|b>| >= 1 - tol.
bool equal_up_to_global_phase(const StateVector &a, const StateVector &b,
                              double tol);

/// Packs one bit per qubit into a basis index.
BasisIndex basis_index(std::span<const int> bits);

/// Estimate of a prefix probability from a counted Bernoulli model.
struct SampledProbability {
    double estimate;
    double sem; ///< sqrt(p_hat (1 - p_hat) / shots)
    std::uint64_t hits;
    std::uint64_t shots;
};

/// Draws `shots` Bernoulli outcomes with success probability `p`.
/// Deterministic for a fixed seed.
SampledProbability sample_bernoulli(double p, std::uint64_t shots,
                                    std::uint64_t seed);

SampledProbability sample_prefix_probability(const StateVector &state,
                                             std::span<const BitAssign> assign,
                                             std::uint64_t shots,
                                             std::uint64_t seed);

/// SplitMix64 finaliser; used to derive independent per-batch seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Worker count for internal parallel loops, from STDSTATE_THREADS.
int configured_threads();

} // namespace stdstate
