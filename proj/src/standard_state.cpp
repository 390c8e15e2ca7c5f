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

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace stdstate {

void validate_pair(const LevelPair &p) {
    if (!(std::abs(p.norm_squared() - 1.0) <= kPairNormTol)) {
        throw ValidationError("level pair is not normalized");
    }
}

bool pairs_equal_up_to_phase(const LevelPair &a, const LevelPair &b,
                             double tol) {
    const Complex ip = std::conj(a.alpha) * b.alpha + std::conj(a.beta) * b.beta;
    return std::abs(ip) >= 1.0 - tol;
}

LevelPair canonical_phase(const LevelPair &p) {
    const Complex ref = std::abs(p.alpha) > 0.0 ? p.alpha : p.beta;
    if (std::abs(ref) == 0.0) {
        return p;
    }
    const Complex phase = std::conj(ref) / std::abs(ref);
    return {p.alpha * phase, p.beta * phase};
}

BasisIndex pack_pattern(const Pattern &p) {
    BasisIndex bits = 0;
    for (std::size_t m = 0; m < p.size(); ++m) {
        if (p[m] != 0 && p[m] != 1) {
            throw ValidationError("pattern bits must be 0 or 1");
        }
        bits |= static_cast<BasisIndex>(p[m]) << m;
    }
    return bits;
}

Pattern unpack_pattern(BasisIndex bits, int length) {
    Pattern p(length);
    for (int m = 0; m < length; ++m) {
        p[m] = static_cast<int>((bits >> m) & 1U);
    }
    return p;
}

Mat2 variant_rotation(const LevelPair &base, const LevelPair &target) {
    validate_pair(base);
    validate_pair(target);
    return mat2::multiply(mat2::completion(target.alpha, target.beta),
                          mat2::adjoint(mat2::completion(base.alpha, base.beta)));
}

namespace {

void check_base(int n, const std::vector<LevelPair> &base_pairs) {
    if (n < 2 || n > kMaxQubits) {
        throw SizeError("standard states need 2 <= n <= " +
                        std::to_string(kMaxQubits));
    }
    if (static_cast<int>(base_pairs.size()) != n - 1) {
        throw ValidationError("expected n-1 base pairs");
    }
    for (const auto &p : base_pairs) {
        validate_pair(p);
    }
}

void check_variant(int n, const VariantSpec &v) {
    if (v.level < 1 || v.level > n - 1) {
        throw ValidationError("variant level " + std::to_string(v.level) +
                              " outside [1, n-1]");
    }
    if (static_cast<int>(v.pattern.size()) != n - 1 - v.level) {
        throw ValidationError("variant pattern must cover qubits level+1..n-1");
    }
    pack_pattern(v.pattern);
    validate_pair(v.pair);
}

} // namespace

BuildResult build_minimal(int n, const std::vector<LevelPair> &base_pairs) {
    check_base(n, base_pairs);
    GateScript script;
    script.reserve(2 * (n - 1));
    for (int level = 1; level < n; ++level) {
        const LevelPair &p = base_pairs[level - 1];
        script.push_back(SingleQubitGate{level, mat2::completion(p.alpha, p.beta)});
        script.push_back(CnotGate{level, level - 1});
    }
    StateVector state = simulate(n, script);
    return {std::move(state), std::move(script)};
}

BuildResult build_minimal(const StandardStateSpec &spec) {
    if (!spec.variants.empty()) {
        throw ValidationError("build_minimal takes a spec without variants");
    }
    return build_minimal(spec.n, spec.base_pairs);
}

StandardStateBuilder::StandardStateBuilder(int n, std::vector<LevelPair> base_pairs)
    : n_(n), base_(std::move(base_pairs)), lowest_injected_(n),
      state_(StateVector::zero(1)) {
    auto built = build_minimal(n_, base_);
    state_ = std::move(built.state);
    script_ = std::move(built.script);
}

LevelPair StandardStateBuilder::current_pair(int level, BasisIndex pattern) const {
    if (auto it = current_.find({level, pattern}); it != current_.end()) {
        return it->second;
    }
    return base_.at(level - 1);
}

GateScript StandardStateBuilder::inject(const VariantSpec &v) {
    check_variant(n_, v);
    if (v.level > lowest_injected_) {
        throw ValidationError("variants must be injected from the highest "
                              "level down");
    }
    const BasisIndex key = pack_pattern(v.pattern);
    Mat2 u = variant_rotation(current_pair(v.level, key), v.pair);
    // In an odd-parity branch the disentangled qubit carries the pair with
    // its components swapped.
    if (std::popcount(key) % 2 == 1) {
        u = mat2::multiply(mat2::pauli_x(), mat2::multiply(u, mat2::pauli_x()));
    }
    ControlledGate cu{{}, v.level, u};
    for (std::size_t m = 0; m < v.pattern.size(); ++m) {
        cu.controls.push_back({v.level + 1 + static_cast<int>(m), v.pattern[m]});
    }
    GateScript fragment{CnotGate{v.level, v.level - 1}, std::move(cu),
                        CnotGate{v.level, v.level - 1}};
    state_.apply(fragment);
    script_.insert(script_.end(), fragment.begin(), fragment.end());
    current_[{v.level, key}] = v.pair;
    lowest_injected_ = v.level;
    return fragment;
}

GateScript inject_variant(StandardStateBuilder &builder, const VariantSpec &v) {
    return builder.inject(v);
}

void validate_spec(const StandardStateSpec &spec) {
    check_base(spec.n, spec.base_pairs);
    for (const auto &v : spec.variants) {
        check_variant(spec.n, v);
    }
}

BuildResult build_standard(const StandardStateSpec &spec) {
    validate_spec(spec);
    std::vector<const VariantSpec *> order;
    order.reserve(spec.variants.size());
    for (const auto &v : spec.variants) {
        order.push_back(&v);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const VariantSpec *a, const VariantSpec *b) {
                         return a->level > b->level;
                     });
    StandardStateBuilder builder(spec.n, spec.base_pairs);
    for (const auto *v : order) {
        builder.inject(*v);
    }
    return std::move(builder).release();
}

BuildResult theorem1_transform(const StateVector &state) {
    const int n = state.num_qubits();
    StateVector out = state.with_appended_qubits(1);
    GateScript script;
    script.reserve(n);
    script.push_back(CnotGate{0, n});
    for (int q = 1; q < n; ++q) {
        script.push_back(CnotGate{q, q - 1});
    }
    out.apply(script);
    return {std::move(out), std::move(script)};
}

FullDecomposition full_decompose(const StateVector &state) {
    const int n = state.num_qubits();
    if (n < 2 || n > kMaxDecomposeQubits) {
        throw SizeError("full_decompose supports 2 <= n <= " +
                        std::to_string(kMaxDecomposeQubits));
    }
    if (state.norm_squared() == 0.0) {
        throw DegenerateError("cannot decompose the zero vector");
    }

    FullDecomposition out;
    out.n = n;
    out.pairs.resize(n - 1);

    // Gather even-parity amplitudes indexed by t, bit (i-1) of t = y_i.
    const BasisIndex leaves = BasisIndex{1} << (n - 1);
    std::vector<double> normsq(leaves);
    std::vector<std::optional<Complex>> ref(leaves);
    for (BasisIndex x = 0; x < state.dim(); ++x) {
        if (std::popcount(x) % 2 == 1) {
            out.odd_parity_weight += std::norm(state.amplitude(x));
            continue;
        }
        // y_i is the parity of x_i..x_{n-1}; build it from the top down.
        BasisIndex y = 0;
        int parity = 0;
        for (int i = n - 1; i >= 1; --i) {
            parity ^= static_cast<int>((x >> i) & 1U);
            y |= static_cast<BasisIndex>(parity) << (i - 1);
        }
        const Complex a = state.amplitude(x);
        normsq[y] = std::norm(a);
        if (std::abs(a) >= kZeroAmplitude) {
            ref[y] = a / std::abs(a);
        }
    }

    // Level l merges sibling groups that differ in y_l into their parent.
    for (int level = 1; level <= n - 1; ++level) {
        const BasisIndex parents = normsq.size() / 2;
        std::vector<double> pnorm(parents);
        std::vector<std::optional<Complex>> pref(parents);
        auto &slots = out.pairs[level - 1];
        slots.assign(parents, std::nullopt);
        for (BasisIndex loc = 0; loc < parents; ++loc) {
            const BasisIndex c0 = 2 * loc;
            const BasisIndex c1 = 2 * loc + 1;
            const BasisIndex raw = loc ^ (loc >> 1);
            const bool z0 = !ref[c0].has_value();
            const bool z1 = !ref[c1].has_value();
            pnorm[loc] = normsq[c0] + normsq[c1];
            if (z0 && z1) {
                out.degenerate.emplace_back(level, raw);
                continue;
            }
            const Complex parent_ref = z0 ? *ref[c1] : *ref[c0];
            pref[loc] = parent_ref;
            const double total = (z0 ? 0.0 : normsq[c0]) + (z1 ? 0.0 : normsq[c1]);
            const double norm = std::sqrt(total);
            LevelPair p{0.0, 0.0};
            if (!z0) {
                p.alpha = std::sqrt(normsq[c0]) / norm * (*ref[c0] / parent_ref);
            }
            if (!z1) {
                p.beta = std::sqrt(normsq[c1]) / norm * (*ref[c1] / parent_ref);
            }
            slots[raw] = p;
        }
        normsq = std::move(pnorm);
        ref = std::move(pref);
    }
    return out;
}

StandardStateSpec FullDecomposition::to_spec(double tol) const {
    if (!ok()) {
        throw DegenerateError("decomposition has degenerate locations");
    }
    StandardStateSpec spec{n, {}, {}};
    for (int level = 1; level <= n - 1; ++level) {
        const auto &slots = pairs[level - 1];
        const LevelPair base = *slots[0];
        spec.base_pairs.push_back(base);
        for (BasisIndex raw = 1; raw < slots.size(); ++raw) {
            const LevelPair &p = *slots[raw];
            if (std::abs(p.alpha - base.alpha) > tol ||
                std::abs(p.beta - base.beta) > tol) {
                spec.variants.push_back(
                    {level, unpack_pattern(raw, n - 1 - level), p});
            }
        }
    }
    return spec;
}

std::vector<std::pair<int, BasisIndex>>
FullDecomposition::deviating_locations(const std::vector<LevelPair> &base,
                                       double tol) const {
    std::vector<std::pair<int, BasisIndex>> out;
    for (int level = 1; level <= n - 1; ++level) {
        const auto &slots = pairs[level - 1];
        for (BasisIndex raw = 0; raw < slots.size(); ++raw) {
            if (slots[raw] &&
                !pairs_equal_up_to_phase(*slots[raw], base.at(level - 1), tol)) {
                out.emplace_back(level, raw);
            }
        }
    }
    return out;
}

BuildResult sparse_synthesize(int n, const std::vector<SparseEntry> &target) {
    if (n < 1 || n > kMaxQubits) {
        throw SizeError("qubit count out of range");
    }
    if (target.empty()) {
        throw ValidationError("sparse target needs at least one entry");
    }
    const BasisIndex dim = BasisIndex{1} << n;
    double total = 0.0;
    Complex amp0 = 0.0;
    std::vector<SparseEntry> others;
    std::vector<BasisIndex> seen;
    for (const auto &e : target) {
        if (e.index >= dim) {
            throw SizeError("sparse index out of range");
        }
        if (std::find(seen.begin(), seen.end(), e.index) != seen.end()) {
            throw ValidationError("repeated sparse index");
        }
        seen.push_back(e.index);
        total += std::norm(e.amp);
        if (e.index == 0) {
            amp0 = e.amp;
        } else if (std::abs(e.amp) > 0.0) {
            others.push_back(e);
        }
    }
    if (std::abs(total - 1.0) > kPairNormTol) {
        throw ValidationError("sparse target is not normalized");
    }

    // Peel weight off entry 0 one entry at a time; entry 0 stays real until
    // the final step sets its target value.
    GateScript script;
    Complex current = 1.0;
    double remaining = 1.0;
    for (std::size_t k = 0; k < others.size(); ++k) {
        const auto &e = others[k];
        remaining -= std::norm(e.amp);
        const bool last = k + 1 == others.size();
        const Complex next = last ? amp0 : Complex(std::sqrt(std::max(remaining, 0.0)));
        const Complex alpha = next / current;
        const Complex beta = e.amp / current;
        // Renormalise away rounding so the gate passes the unitarity check.
        const double s = std::sqrt(std::norm(alpha) + std::norm(beta));
        script.push_back(TwoLevelGate{0, e.index, mat2::completion(alpha / s, beta / s)});
        current = next;
    }
    StateVector state = simulate(n, script);
    return {std::move(state), std::move(script)};
}

GateScript relabel_script(const GateScript &script, const std::vector<int> &order) {
    const auto map_index = [&](BasisIndex idx) {
        BasisIndex out = 0;
        for (std::size_t q = 0; q < order.size(); ++q) {
            out |= ((idx >> q) & 1U) << order[q];
        }
        return out;
    };
    GateScript out;
    out.reserve(script.size());
    for (const auto &g : script) {
        if (const auto *s = std::get_if<SingleQubitGate>(&g)) {
            out.push_back(SingleQubitGate{order.at(s->target), s->u});
        } else if (const auto *c = std::get_if<CnotGate>(&g)) {
            out.push_back(CnotGate{order.at(c->control), order.at(c->target)});
        } else if (const auto *cu = std::get_if<ControlledGate>(&g)) {
            ControlledGate r{{}, order.at(cu->target), cu->u};
            for (const auto &ctl : cu->controls) {
                r.controls.push_back({order.at(ctl.qubit), ctl.bit});
            }
            out.push_back(std::move(r));
        } else {
            const auto &tl = std::get<TwoLevelGate>(g);
            out.push_back(TwoLevelGate{map_index(tl.index_i), map_index(tl.index_j), tl.u});
        }
    }
    return out;
}

} // namespace stdstate
