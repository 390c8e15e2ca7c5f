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
#include "stdstate/reports.hpp"

namespace stdstate::io {

namespace {

using nlohmann::json;

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json &j) {
    if (!j.is_array() || j.size() != 2) {
        throw ParseError("complex value must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

std::string bitstring(BasisIndex bits, int len) {
    std::string s;
    for (int p = 0; p < len; ++p) {
        s += ((bits >> p) & 1U) ? '1' : '0';
    }
    return s;
}

// Wraps json library errors so callers see a single error type.
template <class F> auto guarded(const char *what, F &&f) {
    try {
        return f();
    } catch (const json::exception &e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

} // namespace

json pair_to_json(const LevelPair &p) {
    return {{"alpha", complex_to_json(p.alpha)}, {"beta", complex_to_json(p.beta)}};
}

LevelPair pair_from_json(const json &j) {
    return guarded("pair", [&] {
        return LevelPair{complex_from_json(j.at("alpha")), complex_from_json(j.at("beta"))};
    });
}

json spec_to_json(const StandardStateSpec &spec) {
    json base = json::array();
    for (const auto &p : spec.base_pairs) {
        base.push_back(pair_to_json(p));
    }
    json vars = json::array();
    for (const auto &v : spec.variants) {
        vars.push_back({{"level", v.level}, {"pattern", v.pattern}, {"pair", pair_to_json(v.pair)}});
    }
    return {{"n", spec.n}, {"base_pairs", std::move(base)}, {"variants", std::move(vars)}};
}

std::vector<VariantSpec> variants_from_json(const json &j) {
    return guarded("variants", [&] {
        const json &arr = j.is_object() ? j.at("variants") : j;
        if (!arr.is_array()) {
            throw ParseError("variants must be an array");
        }
        std::vector<VariantSpec> out;
        for (const auto &v : arr) {
            out.push_back({v.at("level").get<int>(), v.at("pattern").get<Pattern>(),
                           pair_from_json(v.at("pair"))});
        }
        return out;
    });
}

StandardStateSpec spec_from_json(const json &j) {
    return guarded("spec", [&] {
        StandardStateSpec spec;
        spec.n = j.at("n").get<int>();
        for (const auto &p : j.at("base_pairs")) {
            spec.base_pairs.push_back(pair_from_json(p));
        }
        if (j.contains("variants")) {
            spec.variants = variants_from_json(j.at("variants"));
        }
        return spec;
    });
}

json procedure1_to_json(const Procedure1Report &r) {
    json pairs = json::array();
    for (const auto &p : r.pairs) {
        pairs.push_back(pair_to_json(p));
    }
    json log = json::array();
    for (const auto &t : r.log) {
        log.push_back({{"trio", t.trio},
                       {"filler", t.filler},
                       {"verdict", to_string(t.middle)},
                       {"confirm", t.confirm}});
    }
    json out = {{"outcome", to_string(r.outcome)},
                {"order", r.order},
                {"pairs", std::move(pairs)},
                {"trials_used", r.trials_used},
                {"successes", r.successes},
                {"retrievals", r.retrievals_used},
                {"log", std::move(log)}};
    if (r.outcome == Procedure1Report::Outcome::FailureAtTrial) {
        out["failure_trial"] = r.failure_trial;
    }
    if (!r.detail.empty()) {
        out["detail"] = r.detail;
    }
    return out;
}

json posterior_to_json(const PosteriorReport &r) {
    json out = {{"verdict", to_string(r.verdict)},
                {"trials", r.n_trials},
                {"p1", r.p1},
                {"closeness_heuristic", r.closeness_heuristic}};
    out["probability"] = r.probability ? json(*r.probability) : json(nullptr);
    return out;
}

json tree_to_json(const MeasurementTree &tree, const Localization &loc) {
    json nodes = json::array();
    for (const auto &node : tree.nodes) {
        nodes.push_back({{"depth", node.depth},
                         {"prefix", bitstring(node.prefix, node.depth)},
                         {"expected_p", node.expected_p},
                         {"measured_p", node.measured_p},
                         {"sem", node.sem},
                         {"flagged", node.flagged},
                         {"probe", node.probe}});
    }
    json findings = json::array();
    for (const auto &f : loc.findings) {
        std::vector<Qubit> qubits;
        for (std::size_t m = 0; m < f.pattern.size(); ++m) {
            qubits.push_back(tree.order[f.level + 1 + m]);
        }
        findings.push_back({{"level", f.level},
                            {"pattern", f.pattern},
                            {"qubits", qubits},
                            {"abs_alpha", f.abs_alpha},
                            {"abs_beta", f.abs_beta},
                            {"leaf", bitstring(f.leaf_prefix, tree.n - 1)}});
    }
    json unresolved = json::array();
    for (auto p : loc.unresolved) {
        unresolved.push_back(bitstring(p, tree.n - 1));
    }
    return {{"schema_version", kReportSchemaVersion},
            {"n", tree.n},
            {"order", tree.order},
            {"nodes", std::move(nodes)},
            {"findings", std::move(findings)},
            {"unresolved", std::move(unresolved)},
            {"totals",
             {{"nodes", tree.nodes.size()},
              {"flagged", tree.flagged_count()},
              {"shots", tree.total_shots},
              {"truncated", tree.truncated}}}};
}

OrderAndPairs order_and_pairs_from_json(const json &j) {
    return guarded("pairs file", [&] {
        const json &src = j.contains("procedure1") ? j.at("procedure1") : j;
        OrderAndPairs out;
        out.order = src.at("order").get<std::vector<Qubit>>();
        for (const auto &p : src.at("pairs")) {
            out.pairs.push_back(pair_from_json(p));
        }
        if (out.pairs.empty() || out.order.size() != out.pairs.size() + 1) {
            throw ParseError("pairs file needs n-1 pairs for an order of n qubits");
        }
        return out;
    });
}

} // namespace stdstate::io
