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
#include "stdstate/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

namespace stdstate {

namespace {

// Below this many loop iterations the kernels run on the calling thread.
constexpr BasisIndex kParallelThreshold = BasisIndex{1} << 18;

template <class Fn> void parallel_for(BasisIndex count, Fn &&fn) {
    const int threads = configured_threads();
    if (threads <= 1 || count < kParallelThreshold) {
        for (BasisIndex k = 0; k < count; ++k) {
            fn(k);
        }
        return;
    }
    // Each worker owns a contiguous block; every k writes disjoint entries,
    // so results do not depend on the thread count.
    std::vector<std::thread> pool;
    const BasisIndex block = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const BasisIndex lo = block * t;
        const BasisIndex hi = std::min(count, lo + block);
        if (lo >= hi) {
            break;
        }
        pool.emplace_back([lo, hi, &fn] {
            for (BasisIndex k = lo; k < hi; ++k) {
                fn(k);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
}

/// Inserts a zero bit at position `pos` of `k`.
inline BasisIndex insert_zero_bit(BasisIndex k, int pos) {
    const BasisIndex low = k & ((BasisIndex{1} << pos) - 1);
    return ((k >> pos) << (pos + 1)) | low;
}

inline void rotate(Complex &a0, Complex &a1, const Mat2 &u) {
    const Complex v0 = a0;
    const Complex v1 = a1;
    a0 = u[0] * v0 + u[1] * v1;
    a1 = u[2] * v0 + u[3] * v1;
}

void check_n(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw SizeError("qubit count " + std::to_string(n) +
                        " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
}

} // namespace

int configured_threads() {
    if (const char *env = std::getenv("STDSTATE_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) {
            return v;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

StateVector StateVector::zero(int n) {
    check_n(n);
    std::vector<Complex> amps(BasisIndex{1} << n);
    amps[0] = 1.0;
    return StateVector(n, std::move(amps));
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amps) {
    const std::size_t len = amps.size();
    if (len < 2 || !std::has_single_bit(len)) {
        throw SizeError("amplitude count " + std::to_string(len) +
                        " is not 2^n for n >= 1");
    }
    const int n = std::countr_zero(len);
    check_n(n);
    for (const auto &a : amps) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw ValidationError("non-finite amplitude");
        }
    }
    return StateVector(n, std::move(amps));
}

Complex StateVector::amplitude(BasisIndex index) const {
    if (index >= dim()) {
        throw SizeError("basis index out of range");
    }
    return amps_[index];
}

Complex StateVector::amplitude(std::span<const int> bits) const {
    if (static_cast<int>(bits.size()) != n_) {
        throw SizeError("basis assignment must cover all qubits");
    }
    return amps_[basis_index(bits)];
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

void StateVector::normalize() {
    const double norm = std::sqrt(norm_squared());
    if (norm == 0.0) {
        throw DegenerateError("cannot normalize the zero vector");
    }
    for (auto &a : amps_) {
        a /= norm;
    }
}

void StateVector::apply(const Gate &g) {
    validate_gate(g, n_);
    Complex *amps = amps_.data();
    const BasisIndex half = dim() >> 1;

    if (const auto *s = std::get_if<SingleQubitGate>(&g)) {
        const int t = s->target;
        const Mat2 u = s->u;
        parallel_for(half, [=](BasisIndex k) {
            const BasisIndex i0 = insert_zero_bit(k, t);
            rotate(amps[i0], amps[i0 | (BasisIndex{1} << t)], u);
        });
    } else if (const auto *c = std::get_if<CnotGate>(&g)) {
        const BasisIndex cmask = BasisIndex{1} << c->control;
        const int t = c->target;
        parallel_for(half, [=](BasisIndex k) {
            const BasisIndex i0 = insert_zero_bit(k, t);
            if (i0 & cmask) {
                std::swap(amps[i0], amps[i0 | (BasisIndex{1} << t)]);
            }
        });
    } else if (const auto *cu = std::get_if<ControlledGate>(&g)) {
        BasisIndex mask = 0;
        BasisIndex value = 0;
        for (const auto &ctl : cu->controls) {
            mask |= BasisIndex{1} << ctl.qubit;
            value |= static_cast<BasisIndex>(ctl.bit) << ctl.qubit;
        }
        const int t = cu->target;
        const Mat2 u = cu->u;
        parallel_for(half, [=](BasisIndex k) {
            const BasisIndex i0 = insert_zero_bit(k, t);
            if ((i0 & mask) == value) {
                rotate(amps[i0], amps[i0 | (BasisIndex{1} << t)], u);
            }
        });
    } else {
        const auto &tl = std::get<TwoLevelGate>(g);
        rotate(amps[tl.index_i], amps[tl.index_j], tl.u);
    }
}

void StateVector::apply(const GateScript &script) {
    for (const auto &g : script) {
        apply(g);
    }
}

double StateVector::prefix_probability(std::span<const BitAssign> assign) const {
    BasisIndex mask = 0;
    BasisIndex value = 0;
    for (const auto &a : assign) {
        if (a.qubit < 0 || a.qubit >= n_) {
            throw SizeError("assigned qubit out of range");
        }
        if (a.bit != 0 && a.bit != 1) {
            throw ValidationError("assigned bit must be 0 or 1");
        }
        const BasisIndex bit = BasisIndex{1} << a.qubit;
        if (mask & bit) {
            throw ValidationError("qubit assigned twice");
        }
        mask |= bit;
        value |= static_cast<BasisIndex>(a.bit) << a.qubit;
    }
    double p = 0.0;
    for (BasisIndex i = 0; i < dim(); ++i) {
        if ((i & mask) == value) {
            p += std::norm(amps_[i]);
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

StateVector StateVector::with_appended_qubits(int extra) const {
    check_n(n_ + extra);
    std::vector<Complex> amps(BasisIndex{1} << (n_ + extra));
    std::copy(amps_.begin(), amps_.end(), amps.begin());
    return StateVector(n_ + extra, std::move(amps));
}

StateVector StateVector::permuted(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != n_) {
        throw SizeError("permutation length must equal qubit count");
    }
    std::vector<bool> seen(n_, false);
    for (int p : perm) {
        if (p < 0 || p >= n_ || seen[p]) {
            throw ValidationError("not a permutation of the qubits");
        }
        seen[p] = true;
    }
    std::vector<Complex> out(dim());
    for (BasisIndex i = 0; i < dim(); ++i) {
        BasisIndex j = 0;
        for (int q = 0; q < n_; ++q) {
            j |= ((i >> q) & 1U) << perm[q];
        }
        out[j] = amps_[i];
    }
    return StateVector(n_, std::move(out));
}

StateVector apply_gate(StateVector state, const Gate &g) {
    state.apply(g);
    return state;
}

StateVector simulate(int n, const GateScript &script) {
    StateVector s = StateVector::zero(n);
    s.apply(script);
    return s;
}

double overlap_magnitude(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw ValidationError("states have different qubit counts");
    }
    Complex acc = 0.0;
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(x[i]) * y[i];
    }
    return std::abs(acc);
}

bool equal_up_to_global_phase(const StateVector &a, const StateVector &b,
                              double tol) {
    return overlap_magnitude(a, b) >= 1.0 - tol;
}

BasisIndex basis_index(std::span<const int> bits) {
    BasisIndex idx = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
        if (bits[q] != 0 && bits[q] != 1) {
            throw ValidationError("basis bits must be 0 or 1");
        }
        idx |= static_cast<BasisIndex>(bits[q]) << q;
    }
    return idx;
}

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SampledProbability sample_bernoulli(double p, std::uint64_t shots,
                                    std::uint64_t seed) {
    if (shots == 0) {
        throw ValidationError("shots must be at least 1");
    }
    p = std::clamp(p, 0.0, 1.0);
    std::uint64_t hits = 0;
    if (p >= 1.0) {
        hits = shots;
    } else if (p > 0.0) {
        // The hit count of independent Bernoulli draws is binomial.
        std::mt19937_64 rng(mix_seed(seed));
        std::binomial_distribution<std::uint64_t> draw(shots, p);
        hits = draw(rng);
    }
    const double est = static_cast<double>(hits) / static_cast<double>(shots);
    return {est, std::sqrt(est * (1.0 - est) / static_cast<double>(shots)),
            hits, shots};
}

SampledProbability sample_prefix_probability(const StateVector &state,
                                             std::span<const BitAssign> assign,
                                             std::uint64_t shots,
                                             std::uint64_t seed) {
    if (shots == 0) {
        throw ValidationError("shots must be at least 1");
    }
    return sample_bernoulli(state.prefix_probability(assign), shots, seed);
}

} // namespace stdstate
