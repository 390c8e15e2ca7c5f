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
#include "stdstate/gate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stdstate {

namespace mat2 {

double unitarity_defect(const Mat2 &u) {
    const Mat2 p = multiply(adjoint(u), u);
    const Mat2 id = identity();
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (!std::isfinite(p[i].real()) || !std::isfinite(p[i].imag())) {
            return INFINITY;
        }
        worst = std::max(worst, std::abs(p[i] - id[i]));
    }
    return worst;
}

} // namespace mat2

namespace {

void check_qubit(Qubit q, int n, const char *what) {
    if (q < 0 || q >= n) {
        throw SizeError(std::string(what) + " qubit " + std::to_string(q) +
                        " out of range for " + std::to_string(n) + " qubits");
    }
}

void check_unitary(const Mat2 &u) {
    if (!mat2::is_unitary(u)) {
        throw ValidationError("gate matrix is not unitary within 1e-10");
    }
}

template <class... Ts> struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

} // namespace

void validate_gate(const Gate &g, int n) {
    std::visit(
        Overloaded{
            [&](const SingleQubitGate &s) {
                check_qubit(s.target, n, "target");
                check_unitary(s.u);
            },
            [&](const CnotGate &c) {
                check_qubit(c.control, n, "control");
                check_qubit(c.target, n, "target");
                if (c.control == c.target) {
                    throw ValidationError("CNOT control equals target");
                }
            },
            [&](const ControlledGate &c) {
                check_qubit(c.target, n, "target");
                check_unitary(c.u);
                for (std::size_t i = 0; i < c.controls.size(); ++i) {
                    const auto &ctl = c.controls[i];
                    check_qubit(ctl.qubit, n, "control");
                    if (ctl.bit != 0 && ctl.bit != 1) {
                        throw ValidationError("control bit must be 0 or 1");
                    }
                    if (ctl.qubit == c.target) {
                        throw ValidationError("control qubit equals target");
                    }
                    for (std::size_t j = 0; j < i; ++j) {
                        if (c.controls[j].qubit == ctl.qubit) {
                            throw ValidationError("repeated control qubit");
                        }
                    }
                }
            },
            [&](const TwoLevelGate &t) {
                const BasisIndex dim = BasisIndex{1} << n;
                if (t.index_i >= dim || t.index_j >= dim) {
                    throw SizeError("two-level index out of range");
                }
                if (t.index_i == t.index_j) {
                    throw ValidationError("two-level indices must differ");
                }
                check_unitary(t.u);
            },
        },
        g);
}

Gate inverse(const Gate &g) {
    return std::visit(
        Overloaded{
            [](const SingleQubitGate &s) -> Gate {
                return SingleQubitGate{s.target, mat2::adjoint(s.u)};
            },
            [](const CnotGate &c) -> Gate { return c; },
            [](const ControlledGate &c) -> Gate {
                return ControlledGate{c.controls, c.target,
                                      mat2::adjoint(c.u)};
            },
            [](const TwoLevelGate &t) -> Gate {
                return TwoLevelGate{t.index_i, t.index_j, mat2::adjoint(t.u)};
            },
        },
        g);
}

std::string gate_name(const Gate &g) {
    static constexpr const char *kNames[] = {"U", "CNOT", "CU", "TL"};
    return kNames[g.index()];
}

} // namespace stdstate
