// Copyright 2026 The mufact Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON file formats and the `mufact` command-line entry point.
//
//   MatrixFile    {"rows", "cols", "entries": [[re, im], ...]} row-major
//   EnsembleFile  {"n", "weights", "unitaries": [MatrixFile]}
//                 or tuple form {"d", "k", "weights", "tuples": [[MatrixFile x k]]}
//   Certificate   {"ensemble": tuple form, "achieved", "target",
//                  "residual_fro", "residual_max"}
//
// Readers check structure and finiteness only (Malformed); the mathematical
// checks belong to the caller so that `verify` can report them separately.

#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "mufact/channels.hpp"
#include "mufact/error.hpp"
#include "mufact/factorise.hpp"
#include "mufact/numkit.hpp"

namespace mufact::cli {

using json = nlohmann::json;

enum ExitCode : int {
  kOk = 0,
  kMalformed = 2,
  kResidualAboveTol = 3,
  kVerificationFailed = 4,
  kNumericDomain = 5,
};

int exit_code_for(ErrorKind kind);

json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

json to_json(const channels::MixedUnitaryEnsemble& e);
channels::MixedUnitaryEnsemble mixed_from_json(const json& j);

json to_json(const factorise::UnitaryTupleEnsemble& e);
factorise::UnitaryTupleEnsemble tuples_from_json(const json& j);

json to_json(const factorise::GramCertificate& c);
factorise::GramCertificate certificate_from_json(const json& j);

bool is_tuple_form(const json& j);
bool is_certificate(const json& j);

json read_json(const std::string& path);
void write_json(const std::string& path, const json& j);

std::string sha256_hex(std::string_view bytes);
std::string file_sha256(const std::string& path);

/// v rounded to `digits` significant decimal digits.
double round_sig(double v, int digits = 12);

/// Runs the command line; returns the process exit code.
int run(int argc, char** argv);

}  // namespace mufact::cli
