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
#include "stdstate/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace stdstate::io {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T> T parse_number(std::string_view s, const char *what) {
    s = trim(s);
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError(std::string("bad ") + what + " '" + std::string(s) +
                         "'");
    }
    return value;
}

Mat2 parse_matrix(std::string_view s) {
    const auto entries = split(s, ';');
    if (entries.size() != 4) {
        throw ParseError("matrix needs 4 entries separated by ';'");
    }
    Mat2 m;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto parts = split(entries[i], ',');
        if (parts.size() != 2) {
            throw ParseError("matrix entry must be re,im");
        }
        m[i] = {parse_number<double>(parts[0], "real part"),
                parse_number<double>(parts[1], "imaginary part")};
    }
    return m;
}

std::string format_matrix(const Mat2 &m) {
    std::string out;
    for (std::size_t i = 0; i < 4; ++i) {
        if (i) {
            out += ';';
        }
        out += format_double(m[i].real());
        out += ',';
        out += format_double(m[i].imag());
    }
    return out;
}

Gate parse_line(std::string_view line) {
    std::vector<std::string_view> tokens;
    for (auto tok : split(line, ' ')) {
        tok = trim(tok);
        if (!tok.empty()) {
            tokens.push_back(tok);
        }
    }
    const std::string_view op = tokens.front();

    std::string_view t, c, m, ctrl, i, j;
    bool has_ctrl = false;
    for (std::size_t k = 1; k < tokens.size(); ++k) {
        const auto eq = tokens[k].find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected key=value, got '" +
                             std::string(tokens[k]) + "'");
        }
        const auto key = tokens[k].substr(0, eq);
        const auto val = tokens[k].substr(eq + 1);
        if (key == "t") {
            t = val;
        } else if (key == "c") {
            c = val;
        } else if (key == "m") {
            m = val;
        } else if (key == "ctrl") {
            ctrl = val;
            has_ctrl = true;
        } else if (key == "i") {
            i = val;
        } else if (key == "j") {
            j = val;
        } else {
            throw ParseError("unknown key '" + std::string(key) + "'");
        }
    }
    auto require = [](std::string_view v, const char *key) {
        if (v.empty()) {
            throw ParseError(std::string("missing ") + key + "=");
        }
        return v;
    };

    if (op == "U") {
        return SingleQubitGate{parse_number<int>(require(t, "t"), "qubit"),
                               parse_matrix(require(m, "m"))};
    }
    if (op == "CNOT") {
        return CnotGate{parse_number<int>(require(c, "c"), "qubit"),
                        parse_number<int>(require(t, "t"), "qubit")};
    }
    if (op == "CU") {
        if (!has_ctrl) {
            throw ParseError("missing ctrl=");
        }
        ControlledGate g{{}, parse_number<int>(require(t, "t"), "qubit"),
                         parse_matrix(require(m, "m"))};
        if (!ctrl.empty()) {
            for (auto item : split(ctrl, ',')) {
                const auto colon = item.find(':');
                if (colon == std::string_view::npos) {
                    throw ParseError("control must be qubit:bit");
                }
                g.controls.push_back(
                    {parse_number<int>(item.substr(0, colon), "qubit"),
                     parse_number<int>(item.substr(colon + 1), "bit")});
            }
        }
        return g;
    }
    if (op == "TL") {
        return TwoLevelGate{
            parse_number<BasisIndex>(require(i, "i"), "index"),
            parse_number<BasisIndex>(require(j, "j"), "index"),
            parse_matrix(require(m, "m"))};
    }
    throw ParseError("unknown gate '" + std::string(op) + "'");
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string serialize_gate(const Gate &g) {
    std::ostringstream out;
    if (const auto *s = std::get_if<SingleQubitGate>(&g)) {
        out << "U t=" << s->target << " m=" << format_matrix(s->u);
    } else if (const auto *c = std::get_if<CnotGate>(&g)) {
        out << "CNOT c=" << c->control << " t=" << c->target;
    } else if (const auto *cu = std::get_if<ControlledGate>(&g)) {
        out << "CU ctrl=";
        for (std::size_t k = 0; k < cu->controls.size(); ++k) {
            if (k) {
                out << ',';
            }
            out << cu->controls[k].qubit << ':' << cu->controls[k].bit;
        }
        out << " t=" << cu->target << " m=" << format_matrix(cu->u);
    } else {
        const auto &tl = std::get<TwoLevelGate>(g);
        out << "TL i=" << tl.index_i << " j=" << tl.index_j
            << " m=" << format_matrix(tl.u);
    }
    return out.str();
}

std::string serialize_script(const GateScript &script) {
    std::string out;
    for (const auto &g : script) {
        out += serialize_gate(g);
        out += '\n';
    }
    return out;
}

GateScript parse_script(std::string_view text) {
    GateScript script;
    int lineno = 0;
    for (auto line : split(text, '\n')) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        try {
            script.push_back(parse_line(line));
        } catch (const ParseError &e) {
            throw ParseError("line " + std::to_string(lineno) + ": " +
                             e.what());
        }
    }
    return script;
}

nlohmann::json state_to_json(const StateVector &state) {
    nlohmann::json amps = nlohmann::json::array();
    for (const auto &a : state.amplitudes()) {
        amps.push_back({a.real(), a.imag()});
    }
    return {{"n", state.num_qubits()}, {"amplitudes", std::move(amps)}};
}

StateVector state_from_json(const nlohmann::json &j) {
    try {
        const int n = j.at("n").get<int>();
        const auto &arr = j.at("amplitudes");
        if (!arr.is_array()) {
            throw ParseError("amplitudes must be an array");
        }
        if (n < 1 || n > kMaxQubits || arr.size() != (std::size_t{1} << n)) {
            throw ParseError("amplitude count does not match 2^n");
        }
        std::vector<Complex> amps;
        amps.reserve(arr.size());
        for (const auto &pair : arr) {
            if (!pair.is_array() || pair.size() != 2) {
                throw ParseError("each amplitude must be [re, im]");
            }
            amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
        return StateVector::from_amplitudes(std::move(amps));
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("state file: ") + e.what());
    } catch (const ValidationError &e) {
        throw ParseError(std::string("state file: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path &path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
}

nlohmann::json read_json(const std::filesystem::path &path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path &path, const nlohmann::json &j) {
    write_file(path, j.dump(2) + "\n");
}

StateVector read_state(const std::filesystem::path &path) {
    return state_from_json(read_json(path));
}

void write_state(const std::filesystem::path &path, const StateVector &state) {
    write_json(path, state_to_json(state));
}

GateScript read_script(const std::filesystem::path &path) {
    return parse_script(read_file(path));
}

void write_script(const std::filesystem::path &path, const GateScript &script) {
    write_file(path, serialize_script(script));
}

} // namespace stdstate::io
