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
 * Text gate scripts and JSON state files.
 *
 * Gate script grammar, one gate per line, `#` starts a comment:
 *
 *     U    t=<q> m=<re,im;re,im;re,im;re,im>
 *     CNOT c=<q> t=<q>
 *     CU   ctrl=<q>:<bit>,<q>:<bit>,... t=<q> m=<...>
 *     TL   i=<index> j=<index> m=<...>
 *
 * Matrices are row-major (m00, m01, m10, m11). Qubits are 0-based.
 * Doubles are printed in shortest round-trip form.
 */
#pragma once

#include "stdstate/gate.hpp"
#include "stdstate/statevector.hpp"

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace stdstate::io {

std::string format_double(double v);

std::string serialize_gate(const Gate &g);
std::string serialize_script(const GateScript &script);

/// Parses the whole text; throws ParseError with a line number.
GateScript parse_script(std::string_view text);

nlohmann::json state_to_json(const StateVector &state);
/// Throws ParseError on a schema violation.
StateVector state_from_json(const nlohmann::json &j);

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view text);

nlohmann::json read_json(const std::filesystem::path &path);
void write_json(const std::filesystem::path &path, const nlohmann::json &j);

StateVector read_state(const std::filesystem::path &path);
void write_state(const std::filesystem::path &path, const StateVector &state);

GateScript read_script(const std::filesystem::path &path);
void write_script(const std::filesystem::path &path, const GateScript &script);

} // namespace stdstate::io
