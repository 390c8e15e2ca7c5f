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
//
// stdstate: generate, analyze, locate, transform and verify standard states.
//
// Exit codes: 0 ok, 1 verification failed, 2 usage, 3 I/O or parse error.

#include "stdstate/classifier.hpp"
#include "stdstate/io.hpp"
#include "stdstate/reports.hpp"
#include "stdstate/sequencer.hpp"
#include "stdstate/standard_state.hpp"
#include "stdstate/variant_locator.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <string>

#include "CLI11.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stdstate;

namespace {

struct UsageError : Error {
    using Error::Error;
};

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

fs::path sibling(const fs::path &out, const std::string &suffix) {
    fs::path p = out;
    p.replace_extension();
    return p.string() + suffix;
}

Complex gaussian(std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const double re = g(rng);
    return {re, g(rng)};
}

LevelPair random_pair(std::mt19937_64 &rng) {
    const Complex a = gaussian(rng);
    const Complex b = gaussian(rng);
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    return canonical_phase({a / norm, b / norm});
}

void emit_json(const std::string &out, const json &j) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        io::write_json(out, j);
    }
}

// ---- generate ---------------------------------------------------------------

struct GenerateArgs {
    int n = 0;
    std::string mode = "minimal";
    std::string spec;
    std::string variants;
    std::uint64_t seed = 0;
    int nonzeros = 0;
    std::string out;
};

int cmd_generate(const GenerateArgs &a) {
    if (!a.variants.empty() && a.mode != "standard") {
        throw UsageError("--variants only applies to --mode standard");
    }
    if (!a.spec.empty() && (a.mode == "sparse" || a.mode == "random")) {
        throw UsageError("--spec only applies to minimal or standard mode");
    }
    if (!a.spec.empty() && !a.variants.empty()) {
        throw UsageError("--spec and --variants are mutually exclusive");
    }
    if (a.nonzeros && a.mode != "sparse") {
        throw UsageError("--nonzeros only applies to --mode sparse");
    }
    if (a.spec.empty() && a.n <= 0) {
        throw UsageError("--n is required unless --spec is given");
    }
    std::mt19937_64 rng(mix_seed(a.seed));

    if (a.mode == "minimal" || a.mode == "standard") {
        StandardStateSpec spec;
        if (!a.spec.empty()) {
            spec = io::spec_from_json(io::read_json(a.spec));
            if (a.n > 0 && a.n != spec.n) {
                throw UsageError("--n disagrees with the spec file");
            }
            if (a.mode == "minimal") {
                spec.variants.clear();
            }
        } else {
            spec.n = a.n;
            for (int l = 1; l < a.n; ++l) {
                spec.base_pairs.push_back(random_pair(rng));
            }
            if (!a.variants.empty()) {
                spec.variants = io::variants_from_json(io::read_json(a.variants));
            }
        }
        validate_spec(spec);
        const BuildResult r = a.mode == "minimal" ? build_minimal(spec) : build_standard(spec);
        io::write_state(a.out, r.state);
        io::write_json(sibling(a.out, ".spec.json"), io::spec_to_json(spec));
        io::write_script(sibling(a.out, ".gates"), r.script);
        std::cout << "wrote " << a.out << " (" << r.script.size() << " gates)\n";
        return kExitOk;
    }
    if (a.mode == "sparse") {
        const int m = a.nonzeros > 0 ? a.nonzeros : 4;
        const BasisIndex dim = BasisIndex{1} << a.n;
        if (static_cast<BasisIndex>(m) > dim) {
            throw UsageError("--nonzeros exceeds 2^n");
        }
        std::set<BasisIndex> chosen;
        std::uniform_int_distribution<BasisIndex> pick(0, dim - 1);
        while (static_cast<int>(chosen.size()) < m) {
            chosen.insert(pick(rng));
        }
        std::vector<SparseEntry> target;
        double norm = 0.0;
        for (BasisIndex idx : chosen) {
            target.push_back({idx, gaussian(rng)});
            norm += std::norm(target.back().amp);
        }
        for (auto &e : target) {
            e.amp /= std::sqrt(norm);
        }
        const BuildResult r = sparse_synthesize(a.n, target);
        io::write_state(a.out, r.state);
        io::write_script(sibling(a.out, ".gates"), r.script);
        std::cout << "wrote " << a.out << " (" << r.script.size() << " gates)\n";
        return kExitOk;
    }
    if (a.mode == "random") {
        if (a.n > kMaxQubits) {
            throw UsageError("--n exceeds the simulator limit");
        }
        std::vector<Complex> amps(std::size_t{1} << a.n);
        for (auto &c : amps) {
            c = gaussian(rng);
        }
        StateVector s = StateVector::from_amplitudes(std::move(amps));
        s.normalize();
        io::write_state(a.out, s);
        std::cout << "wrote " << a.out << "\n";
        return kExitOk;
    }
    throw UsageError("unknown mode '" + a.mode + "'");
}

// ---- analyze ----------------------------------------------------------------

struct AnalyzeArgs {
    std::string state;
    std::string k1;
    int trials = 0;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::string out;
    std::string script_out;
};

double parse_k1(const std::string &text) {
    try {
        std::size_t used = 0;
        if (const auto caret = text.find('^'); caret != std::string::npos) {
            const double base = std::stod(text.substr(0, caret), &used);
            if (used != caret) {
                throw UsageError("");
            }
            const std::string exp_text = text.substr(caret + 1);
            const double e = std::stod(exp_text, &used);
            if (used != exp_text.size()) {
                throw UsageError("");
            }
            return std::pow(base, e);
        }
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw UsageError("");
        }
        return v;
    } catch (const std::exception &) {
        throw UsageError("--k1 must be a number or an expression like 2^30");
    }
}

int cmd_analyze(const AnalyzeArgs &a) {
    const StateVector state = io::read_state(a.state);
    const int n = state.num_qubits();
    if (n < 3) {
        throw UsageError("analyze needs at least 3 qubits");
    }
    ClassifierConfig cc;
    cc.n = n;
    cc.k1 = parse_k1(a.k1);
    try {
        validate_config(cc);
    } catch (const ValidationError &e) {
        throw UsageError(e.what());
    }

    StateOracle oracle(state);
    Procedure1Config pc;
    pc.tol.rel = a.tol;
    pc.extra_confirm_trials = a.trials;
    pc.seed = a.seed;
    const Procedure1Report p1 = run_procedure1(oracle, pc);
    const PosteriorReport post = classify(p1, cc);

    json report = {{"schema_version", io::kReportSchemaVersion},
                   {"input", {{"state", a.state}, {"n", n}}},
                   {"procedure1", io::procedure1_to_json(p1)},
                   {"posterior", io::posterior_to_json(post)},
                   {"parameters",
                    {{"dense_free_real", (std::int64_t{2} << n) - 2},
                     {"minimal_pairs", n - 1},
                     {"k1", cc.k1}}}};

    report["script"] = nullptr;
    if (post.verdict == Verdict::LikelyPolynomial) {
        std::string path = a.script_out;
        if (path.empty() && !a.out.empty()) {
            path = sibling(a.out, ".gates").string();
        }
        if (!path.empty()) {
            io::write_script(path, reconstruction_script(p1.order, p1.pairs));
            report["script"] = path;
        }
    }
    emit_json(a.out, report);
    if (!a.out.empty()) {
        std::cout << to_string(post.verdict) << " after " << p1.trials_used << " trials\n";
    }
    return kExitOk;
}

// ---- locate -----------------------------------------------------------------

struct LocateArgs {
    std::string state;
    std::string pairs;
    std::string shots = "exact";
    double threshold = 5.0;
    std::uint64_t seed = 0;
    std::uint64_t max_shots = 0;
    std::string out;
};

int cmd_locate(const LocateArgs &a) {
    if (a.pairs.empty()) {
        throw UsageError("--pairs is required");
    }
    const StateVector state = io::read_state(a.state);
    const auto op = io::order_and_pairs_from_json(io::read_json(a.pairs));
    if (static_cast<int>(op.order.size()) != state.num_qubits()) {
        throw UsageError("pairs file does not match the state size");
    }
    LocatorConfig cfg;
    cfg.flag_threshold = a.threshold;
    cfg.seed = a.seed;
    cfg.max_total_shots = a.max_shots;

    std::optional<ExactPrefixSource> exact;
    std::optional<ShotPrefixSource> noisy;
    PrefixSource *source = nullptr;
    if (a.shots == "exact") {
        source = &exact.emplace(state);
    } else {
        std::uint64_t shots = 0;
        try {
            std::size_t used = 0;
            shots = std::stoull(a.shots, &used);
            if (used != a.shots.size() || shots == 0) {
                throw UsageError("");
            }
        } catch (const std::exception &) {
            throw UsageError("--shots must be 'exact' or a positive integer");
        }
        source = &noisy.emplace(state, shots);
    }
    const LocatorResult r = locate_variants(*source, op.order, op.pairs, cfg);
    emit_json(a.out, io::tree_to_json(r.tree, r.localization));
    if (!a.out.empty()) {
        std::cout << r.localization.findings.size() << " findings, " << r.tree.nodes.size()
                  << " nodes\n";
    }
    return kExitOk;
}

// ---- transform / verify -----------------------------------------------------

int cmd_transform(const std::string &state_path, const std::string &out) {
    const StateVector state = io::read_state(state_path);
    if (state.num_qubits() + 1 > kMaxQubits) {
        throw UsageError("transform would exceed the simulator limit");
    }
    const BuildResult r = theorem1_transform(state);
    io::write_state(out, r.state);
    io::write_script(sibling(out, ".gates"), r.script);
    std::cout << "wrote " << out << " (" << r.script.size() << " CNOTs)\n";
    return kExitOk;
}

int cmd_verify(const std::string &state_path, const std::string &script_path, double tol) {
    const StateVector target = io::read_state(state_path);
    const GateScript script = io::read_script(script_path);
    for (const auto &g : script) {
        try {
            validate_gate(g, target.num_qubits());
        } catch (const Error &e) {
            throw ParseError(std::string("script: ") + e.what());
        }
    }
    const StateVector got = simulate(target.num_qubits(), script);
    const bool ok = equal_up_to_global_phase(got, target, tol);
    std::cout << (ok ? "PASS" : "FAIL") << " overlap=" << io::format_double(overlap_magnitude(got, target))
              << "\n";
    return ok ? kExitOk : kExitVerifyFailed;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Standard-state analysis toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto *g = app.add_subcommand("generate", "write a state (and its spec and gate script)");
    g->add_option("--n", gen.n, "qubit count");
    g->add_option("--mode", gen.mode, "minimal | standard | sparse | random")
        ->check(CLI::IsMember({"minimal", "standard", "sparse", "random"}));
    g->add_option("--spec", gen.spec, "spec JSON with base pairs and variants");
    g->add_option("--variants", gen.variants, "variant list JSON (standard mode)");
    g->add_option("--seed", gen.seed);
    g->add_option("--nonzeros", gen.nonzeros, "nonzero count (sparse mode)");
    g->add_option("--out", gen.out)->required();

    AnalyzeArgs an;
    auto *a = app.add_subcommand("analyze", "order the qubits and classify the state");
    a->add_option("--state", an.state)->required();
    a->add_option("--k1", an.k1, "variant-count cutoff, e.g. 1000 or 2^30")->required();
    a->add_option("--trials", an.trials, "extra confirmation trials")->check(CLI::NonNegativeNumber);
    a->add_option("--tol", an.tol, "relative ratio tolerance");
    a->add_option("--seed", an.seed);
    a->add_option("--out", an.out);
    a->add_option("--script-out", an.script_out);

    LocateArgs lo;
    auto *l = app.add_subcommand("locate", "find variant pairs by prefix measurements");
    l->add_option("--state", lo.state)->required();
    l->add_option("--pairs", lo.pairs, "analysis report or {order, pairs}");
    l->add_option("--shots", lo.shots, "'exact' or shots per node");
    l->add_option("--threshold", lo.threshold, "flag threshold in standard errors");
    l->add_option("--seed", lo.seed);
    l->add_option("--max-shots", lo.max_shots, "total shot budget, 0 = unlimited");
    l->add_option("--out", lo.out);

    std::string t_state, t_out;
    auto *t = app.add_subcommand("transform", "append a qubit and make the state standard");
    t->add_option("--state", t_state)->required();
    t->add_option("--out", t_out)->required();

    std::string v_state, v_script;
    double v_tol = 1e-9;
    auto *v = app.add_subcommand("verify", "simulate a gate script against a target state");
    v->add_option("--state", v_state)->required();
    v->add_option("--script", v_script)->required();
    v->add_option("--tol", v_tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*g) {
            return cmd_generate(gen);
        }
        if (*a) {
            return cmd_analyze(an);
        }
        if (*l) {
            return cmd_locate(lo);
        }
        if (*t) {
            return cmd_transform(t_state, t_out);
        }
        return cmd_verify(v_state, v_script, v_tol);
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
