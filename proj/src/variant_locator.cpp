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
#include "stdstate/variant_locator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <tuple>

namespace stdstate {

namespace {

using Mag2 = std::array<double, 2>; // |pair[0]|^2, |pair[1]|^2

// y_1..y_d packed at bits 0..d-1 from an x prefix.
BasisIndex y_of_prefix(BasisIndex prefix, int depth) {
    BasisIndex y = 0;
    int parity = 0;
    for (int j = 1; j <= depth; ++j) {
        parity ^= static_cast<int>((prefix >> (j - 1)) & 1U);
        y |= static_cast<BasisIndex>(parity) << (j - 1);
    }
    return y;
}

int ybit(BasisIndex y, int level) { return static_cast<int>((y >> (level - 1)) & 1U); }

std::uint64_t node_seed(std::uint64_t root, int depth, BasisIndex prefix) {
    return mix_seed(root ^ mix_seed((static_cast<std::uint64_t>(depth) << 32) + prefix));
}

std::vector<BitAssign> assignment(const std::vector<Qubit> &order, BasisIndex prefix,
                                  int depth) {
    std::vector<BitAssign> out;
    out.reserve(depth);
    for (int p = 0; p < depth; ++p) {
        out.push_back({order[p], static_cast<int>((prefix >> p) & 1U)});
    }
    return out;
}

// Squared-magnitude model of a standard state in y coordinates. Bit
// (j-1) of a full y index Y is y_j, and level j sits at location Y >> j.
class Model {
  public:
    Model(int n, const std::vector<LevelPair> &base) : n_(n) {
        for (const auto &p : base) {
            base_.push_back({std::norm(p.alpha), std::norm(p.beta)});
        }
    }

    [[nodiscard]] Mag2 at(int level, BasisIndex y) const {
        const auto it = variants_.find({level, y >> level});
        return it == variants_.end() ? base_[level - 1] : it->second;
    }

    void set(int level, BasisIndex loc, Mag2 m) { variants_[{level, loc}] = m; }

    [[nodiscard]] const std::map<std::pair<int, BasisIndex>, Mag2> &variants() const {
        return variants_;
    }

    /// Probability of y_1..y_d, summing y_{d+1}..y_{n-1} from the top
    /// level down. A branch collapses to the base product as soon as no
    /// variant location can still match it, so the cost grows with the
    /// number of variants rather than with 2^(n-1-d).
    [[nodiscard]] double marginal(BasisIndex y_prefix, int depth) const {
        return sum_from(n_ - 1, y_prefix, depth, 1.0);
    }

  private:
    // Bits y_{j+1}..y_{n-1} of `y` are fixed; `w` is their factor product.
    [[nodiscard]] double sum_from(int j, BasisIndex y, int depth, double w) const {
        if (j == depth) {
            for (int l = 1; l <= depth; ++l) {
                w *= at(l, y)[ybit(y, l)];
            }
            return w;
        }
        const BasisIndex high = y >> j;
        bool live = false;
        for (const auto &[key, mag] : variants_) {
            if (key.first <= j && (key.second >> (j - key.first)) == high) {
                live = true;
                break;
            }
        }
        if (!live) {
            // Free levels depth+1..j sum to one; fixed levels are base.
            for (int l = 1; l <= depth; ++l) {
                w *= base_[l - 1][ybit(y, l)];
            }
            return w;
        }
        const Mag2 q = at(j, y);
        const BasisIndex one = BasisIndex{1} << (j - 1);
        return sum_from(j - 1, y & ~one, depth, w * q[0]) +
               sum_from(j - 1, y | one, depth, w * q[1]);
    }

    int n_;
    std::vector<Mag2> base_;
    std::map<std::pair<int, BasisIndex>, Mag2> variants_;
};

// Measures one prefix into the tree; false once a budget is exhausted.
bool measure_node(PrefixSource &source, const std::vector<LevelPair> &base,
                  const LocatorConfig &config, MeasurementTree &tree, int depth,
                  BasisIndex prefix, int parent) {
    const std::uint64_t shots = source.shots_per_measurement();
    if (tree.nodes.size() >= config.max_nodes ||
        (config.max_total_shots && tree.total_shots + shots > config.max_total_shots)) {
        tree.truncated = true;
        return false;
    }
    const auto assign = assignment(tree.order, prefix, depth);
    const auto m = source.measure(assign, node_seed(config.seed, depth, prefix));
    MeasurementNode node{depth, prefix, parent, expected_prefix_prob(base, prefix, depth),
                         m.probability, 0.0, m.shots, false};
    const double dev = std::abs(node.measured_p - node.expected_p);
    if (m.shots == 0) {
        node.flagged = dev > config.exact_tol;
    } else {
        const double e = node.expected_p;
        node.sem = std::sqrt(std::max(0.0, e * (1.0 - e)) / static_cast<double>(m.shots));
        node.flagged = node.sem > 0.0 ? dev > config.flag_threshold * node.sem : dev > 0.0;
    }
    tree.total_shots += m.shots;
    tree.nodes.push_back(node);
    return true;
}

} // namespace

PrefixMeasurement ExactPrefixSource::measure(std::span<const BitAssign> prefix,
                                             std::uint64_t) {
    return {state_->prefix_probability(prefix), 0};
}

ShotPrefixSource::ShotPrefixSource(const StateVector &state, std::uint64_t shots)
    : state_(&state), shots_(shots) {
    if (shots == 0) {
        throw ValidationError("shot source needs at least one shot");
    }
}

PrefixMeasurement ShotPrefixSource::measure(std::span<const BitAssign> prefix,
                                            std::uint64_t seed) {
    const auto s = sample_prefix_probability(*state_, prefix, shots_, seed);
    return {s.estimate, shots_};
}

double expected_prefix_prob(const std::vector<LevelPair> &base, BasisIndex prefix,
                            int depth) {
    if (depth < 0 || depth > static_cast<int>(base.size())) {
        throw SizeError("prefix depth out of range");
    }
    const BasisIndex y = y_of_prefix(prefix, depth);
    double p = 1.0;
    for (int j = 1; j <= depth; ++j) {
        p *= std::norm(base[j - 1][ybit(y, j)]);
    }
    return p;
}

int MeasurementTree::depth_reached() const {
    int d = 0;
    for (const auto &node : nodes) {
        d = std::max(d, node.depth);
    }
    return d;
}

std::size_t MeasurementTree::flagged_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const auto &x) { return x.flagged; }));
}

MeasurementTree explore_tree(PrefixSource &source, const std::vector<Qubit> &order,
                             const std::vector<LevelPair> &base,
                             const LocatorConfig &config) {
    const int n = source.num_qubits();
    if (n < 2) {
        throw ValidationError("locating variants needs at least 2 qubits");
    }
    if (static_cast<int>(order.size()) != n ||
        static_cast<int>(base.size()) != n - 1) {
        throw ValidationError("order and base pairs do not match the state");
    }
    MeasurementTree tree;
    tree.n = n;
    tree.order = order;

    auto measure = [&](int depth, BasisIndex prefix, int parent) {
        return measure_node(source, base, config, tree, depth, prefix, parent);
    };

    if (!measure(1, 0, -1)) {
        return tree;
    }
    std::size_t level_begin = 0;
    for (int depth = 1; depth < n - 1; ++depth) {
        const std::size_t level_end = tree.nodes.size();
        std::vector<std::pair<BasisIndex, int>> children;
        for (std::size_t i = level_begin; i < level_end; ++i) {
            const auto &node = tree.nodes[i];
            if (node.flagged) {
                children.push_back({node.prefix, static_cast<int>(i)});
                children.push_back({node.prefix | (BasisIndex{1} << depth), static_cast<int>(i)});
            }
        }
        if (children.empty()) {
            std::size_t rep = level_begin;
            for (std::size_t i = level_begin; i < level_end; ++i) {
                if (tree.nodes[i].prefix < tree.nodes[rep].prefix) {
                    rep = i;
                }
            }
            children.push_back({tree.nodes[rep].prefix, static_cast<int>(rep)});
        }
        std::sort(children.begin(), children.end());
        for (const auto &[prefix, parent] : children) {
            if (!measure(depth + 1, prefix, parent)) {
                return tree;
            }
        }
        level_begin = level_end;
    }
    return tree;
}

namespace {

using VariantKey = std::pair<int, BasisIndex>;

struct Fit {
    Model model;
    std::map<VariantKey, BasisIndex> source_leaf;
    std::vector<double> pred;
    int mismatches = 0;
};

struct NodeView {
    std::vector<BasisIndex> ys;
    std::vector<double> tol;
    std::vector<std::size_t> leaves;
};

NodeView view_of(const MeasurementTree &tree, const LocatorConfig &config) {
    NodeView v;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto &node = tree.nodes[i];
        v.ys.push_back(y_of_prefix(node.prefix, node.depth));
        v.tol.push_back(node.shots == 0 ? config.exact_tol
                                        : std::max(config.flag_threshold * node.sem, 1e-15));
        if (node.depth == tree.n - 1) {
            v.leaves.push_back(i);
        }
    }
    return v;
}

// Fits a sparse variant set to the measured nodes. Each variant is tied to
// a source leaf that pins its magnitude; a leaf is linear in the one
// factor of that variant it selects.
class Fitter {
  public:
    Fitter(const MeasurementTree &tree, const NodeView &view,
           const std::vector<LevelPair> &base, const std::set<VariantKey> &banned)
        : tree_(tree), view_(view), base_(base), banned_(banned) {}

    /// Greedy descent from the minimal model. If it stalls with nodes
    /// still mismatched, it is restarted from each of the best few
    /// first steps and the best end point is kept.
    Fit run(bool restarts) const {
        State start{Model(tree_.n, base_), {}, 0, 0.0};
        score(start);
        State best = descend(start);
        if (restarts && best.bad > 0) {
            auto firsts = candidates(start);
            const std::size_t tries = std::min<std::size_t>(firsts.size(), 12);
            for (std::size_t i = 0; i < tries && best.bad > 0; ++i) {
                State s = descend(std::move(firsts[i]));
                if (s.bad < best.bad ||
                    (s.bad == best.bad && s.sources.size() < best.sources.size())) {
                    best = std::move(s);
                }
            }
        }
        Fit fit{best.model, {}, std::vector<double>(tree_.nodes.size()), best.bad};
        predict(best.model, fit.pred);
        for (const auto &[key, leaf] : best.sources) {
            fit.source_leaf[key] = tree_.nodes[leaf].prefix;
        }
        return fit;
    }

  private:
    struct State {
        Model model;
        std::map<VariantKey, std::size_t> sources;
        int bad;
        double resid;
    };

    std::pair<int, double> predict(const Model &m, std::vector<double> &pred) const {
        int bad = 0;
        double resid = 0.0;
        for (std::size_t i = 0; i < tree_.nodes.size(); ++i) {
            pred[i] = m.marginal(view_.ys[i], tree_.nodes[i].depth);
            const double r = std::abs(tree_.nodes[i].measured_p - pred[i]);
            bad += r > view_.tol[i] ? 1 : 0;
            resid += r;
        }
        return {bad, resid};
    }

    void score(State &s) const {
        std::vector<double> pred(tree_.nodes.size());
        std::tie(s.bad, s.resid) = predict(s.model, pred);
    }

    // Gauss-Seidel over the source leaves. False if a magnitude leaves [0, 1].
    bool resolve(State &s) const {
        const int n = tree_.n;
        for (int sweep = 0; sweep < 60; ++sweep) {
            double change = 0.0;
            for (const auto &[key, leaf] : s.sources) {
                const BasisIndex y = view_.ys[leaf];
                const int yl = ybit(y, key.first);
                const Mag2 old = s.model.at(key.first, key.second << key.first);
                Mag2 unit{};
                unit[yl] = 1.0;
                s.model.set(key.first, key.second, unit);
                const double f = s.model.marginal(y, n - 1);
                if (!(f > 1e-300)) {
                    return false;
                }
                double v = tree_.nodes[leaf].measured_p / f;
                const double slack = view_.tol[leaf] / f + 1e-12;
                if (v < -slack || v > 1.0 + slack) {
                    return false;
                }
                v = std::clamp(v, 0.0, 1.0);
                Mag2 mag{};
                mag[yl] = v;
                mag[1 - yl] = 1.0 - v;
                s.model.set(key.first, key.second, mag);
                change = std::max(change, std::abs(v - old[yl]));
            }
            if (change < 1e-15) {
                break;
            }
        }
        return true;
    }

    // Every state one variant larger, best first.
    std::vector<State> candidates(const State &s) const {
        const int n = tree_.n;
        std::vector<double> pred(tree_.nodes.size());
        predict(s.model, pred);
        std::vector<State> out;
        for (std::size_t leaf : view_.leaves) {
            if (std::abs(tree_.nodes[leaf].measured_p - pred[leaf]) <= view_.tol[leaf]) {
                continue;
            }
            for (int level = 1; level < n; ++level) {
                const VariantKey key{level, view_.ys[leaf] >> level};
                if (banned_.count(key) || s.sources.count(key)) {
                    continue;
                }
                State next = s;
                next.sources[key] = leaf;
                if (!resolve(next)) {
                    continue;
                }
                score(next);
                out.push_back(std::move(next));
            }
        }
        std::stable_sort(out.begin(), out.end(),
                         [](const State &a, const State &b) { return a.bad < b.bad; });
        return out;
    }

    State descend(State s) const {
        const int max_rounds = 4 * static_cast<int>(view_.leaves.size()) + tree_.n;
        for (int round = 0; round < max_rounds && s.bad > 0; ++round) {
            auto next = candidates(s);
            if (next.empty()) {
                break;
            }
            State &best = next.front();
            if (best.bad > s.bad || (best.bad == s.bad && !(best.resid < 0.5 * s.resid))) {
                break;
            }
            s = std::move(best);
        }
        return s;
    }

    const MeasurementTree &tree_;
    const NodeView &view_;
    const std::vector<LevelPair> &base_;
    const std::set<VariantKey> &banned_;
};

Fit fit_model(const MeasurementTree &tree, const NodeView &view,
              const std::vector<LevelPair> &base, const std::set<VariantKey> &banned = {},
              bool restarts = true) {
    return Fitter(tree, view, base, banned).run(restarts);
}

Localization localization_of(const MeasurementTree &tree, const NodeView &view,
                             const std::vector<LevelPair> &base, const Fit &fit) {
    const int n = tree.n;
    Localization out;
    for (const auto &[key, mag] : fit.model.variants()) {
        const auto [level, loc] = key;
        const Mag2 b = {std::norm(base[level - 1].alpha), std::norm(base[level - 1].beta)};
        if (std::abs(mag[0] - b[0]) <= 1e-15) {
            continue;
        }
        const int len = n - 1 - level;
        out.findings.push_back({level, unpack_pattern(loc ^ (loc >> 1), len),
                                std::sqrt(mag[0]), std::sqrt(mag[1]),
                                fit.source_leaf.at(key)});
    }
    for (std::size_t i : view.leaves) {
        if (std::abs(tree.nodes[i].measured_p - fit.pred[i]) > view.tol[i]) {
            out.unresolved.push_back(tree.nodes[i].prefix);
        }
    }
    return out;
}

// x prefix of a full y index (y_1 = x_0, x_{j-1} = y_j ^ y_{j-1}).
BasisIndex x_of_y(BasisIndex y, int depth) {
    return (y ^ (y << 1)) & ((BasisIndex{1} << depth) - 1);
}

// Leaf tolerance for a fresh measurement, as used when flagging.
double leaf_tol(const std::vector<LevelPair> &base, const LocatorConfig &config,
                std::uint64_t shots, BasisIndex y, int depth) {
    if (shots == 0) {
        return config.exact_tol;
    }
    const double e = expected_prefix_prob(base, x_of_y(y, depth), depth);
    return config.flag_threshold * std::sqrt(e * (1.0 - e) / static_cast<double>(shots));
}

// The unmeasured leaf on which two fits disagree most beyond tolerance.
// Candidates sit at the location of a variant of either fit, with y_2 and
// one further y bit free to move.
std::optional<BasisIndex> find_probe(const MeasurementTree &tree, const NodeView &view,
                                     const std::vector<LevelPair> &base,
                                     const LocatorConfig &config, std::uint64_t shots,
                                     const Fit &a, const Fit &b) {
    const int n = tree.n;
    std::set<BasisIndex> measured;
    for (std::size_t i : view.leaves) {
        measured.insert(view.ys[i]);
    }
    std::optional<BasisIndex> best;
    double best_margin = 1.0;
    for (const Fit *f : {&a, &b}) {
        for (const auto &entry : f->model.variants()) {
            const BasisIndex y0 = entry.first.second << entry.first.first;
            for (int bit = 0; bit < n - 1; ++bit) {
                for (BasisIndex y2 : {BasisIndex{0}, BasisIndex{2}}) {
                    const BasisIndex flip = bit == 0 ? 0 : BasisIndex{1} << bit;
                    const BasisIndex y = (y0 ^ flip ^ y2) & ~BasisIndex{1};
                    if (measured.count(y)) {
                        continue;
                    }
                    const double gap =
                        std::abs(a.model.marginal(y, n - 1) - b.model.marginal(y, n - 1));
                    const double margin = gap / leaf_tol(base, config, shots, y, n - 1);
                    if (margin > best_margin) {
                        best_margin = margin;
                        best = y;
                    }
                }
            }
        }
    }
    return best;
}

} // namespace

Localization derive_variant_magnitudes(const MeasurementTree &tree,
                                       const std::vector<LevelPair> &base,
                                       const LocatorConfig &config) {
    if (tree.nodes.empty()) {
        return {};
    }
    const auto view = view_of(tree, config);
    return localization_of(tree, view, base, fit_model(tree, view, base, {}));
}

LocatorResult locate_variants(PrefixSource &source, const std::vector<Qubit> &order,
                              const std::vector<LevelPair> &base,
                              const LocatorConfig &config) {
    LocatorResult r;
    r.tree = explore_tree(source, order, base, config);
    if (r.tree.nodes.empty()) {
        return r;
    }
    const int n = r.tree.n;
    auto view = view_of(r.tree, config);
    auto fit = fit_model(r.tree, view, base, {});
    for (int probes = 0; probes < config.max_probes && !r.tree.truncated;) {
        std::optional<BasisIndex> next;
        for (const auto &[key, mag] : fit.model.variants()) {
            const auto rival = fit_model(r.tree, view, base, {key}, false);
            if (rival.mismatches > fit.mismatches ||
                rival.model.variants().size() > fit.model.variants().size()) {
                continue;
            }
            next = find_probe(r.tree, view, base, config, source.shots_per_measurement(),
                              fit, rival);
            if (next) {
                break;
            }
        }
        if (!next) {
            break;
        }
        if (!measure_node(source, base, config, r.tree, n - 1, x_of_y(*next, n - 1), -1)) {
            break;
        }
        r.tree.nodes.back().probe = true;
        ++probes;
        view = view_of(r.tree, config);
        fit = fit_model(r.tree, view, base, {});
    }
    r.localization = localization_of(r.tree, view, base, fit);
    return r;
}

std::int64_t node_count_bound(std::int64_t k, int n) {
    if (k < 1 || n < 2) {
        throw ValidationError("node bound needs K >= 1 and n >= 2");
    }
    return k * (2 * static_cast<std::int64_t>(n) - 3);
}

} // namespace stdstate
