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
 * Elementary gate vocabulary: 1-qubit unitaries, CNOT, pattern-controlled
 * unitaries and two-level unitaries acting on a pair of basis entries.
 */
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace stdstate {

using Complex = std::complex<double>;

/// Row-major 2x2 matrix: {m00, m01, m10, m11}.
using Mat2 = std::array<Complex, 4>;

/// Qubit index, 0-based. Qubit q_{j+1} in the usual 1-based labelling is
/// index j, and bit j of a basis index holds its value.
using Qubit = int;

/// Basis-state index under the LSB = first qubit convention.
using BasisIndex = std::uint64_t;

constexpr double kUnitaryTol = 1e-10;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Qubit count or index out of range.
class SizeError : public Error {
  public:
    using Error::Error;
};

/// Malformed input that violates a documented precondition.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Input that is structurally valid but carries zero amplitude where a
/// ratio or normalisation is needed.
class DegenerateError : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

namespace mat2 {

inline Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
inline Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }

inline Mat2 multiply(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 adjoint(const Mat2 &a) {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]),
            std::conj(a[3])};
}

/// Max-abs deviation of U^dagger U from the identity.
double unitarity_defect(const Mat2 &u);

inline bool is_unitary(const Mat2 &u, double tol = kUnitaryTol) {
    return unitarity_defect(u) <= tol;
}

/// Unitary whose first column is (alpha, beta) and whose second column is
/// (-conj(beta), conj(alpha)). Requires |alpha|^2 + |beta|^2 = 1.
inline Mat2 completion(Complex alpha, Complex beta) {
    return {alpha, -std::conj(beta), beta, std::conj(alpha)};
}

} // namespace mat2

struct SingleQubitGate {
    Qubit target;
    Mat2 u;
};

struct CnotGate {
    Qubit control;
    Qubit target;
};

struct Control {
    Qubit qubit;
    int bit; ///< required value, 0 or 1

    friend bool operator==(const Control &, const Control &) = default;
};

/// Applies `u` to `target` on the subspace where every control matches.
struct ControlledGate {
    std::vector<Control> controls;
    Qubit target;
    Mat2 u;
};

/// Mixes basis entries i and j: (a_i, a_j)^T <- u (a_i, a_j)^T.
struct TwoLevelGate {
    BasisIndex index_i;
    BasisIndex index_j;
    Mat2 u;
};

using Gate =
    std::variant<SingleQubitGate, CnotGate, ControlledGate, TwoLevelGate>;

using GateScript = std::vector<Gate>;

/// Checks unitarity, distinct qubits and index ranges for an n-qubit
/// register. Throws ValidationError or SizeError.
void validate_gate(const Gate &g, int n);

/// Inverse gate (u replaced by its adjoint).
Gate inverse(const Gate &g);

/// Short mnemonic: "U", "CNOT", "CU" or "TL".
std::string gate_name(const Gate &g);

} // namespace stdstate
