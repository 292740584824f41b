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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <openssl/evp.h>

#include "mufact/cli.hpp"

namespace mufact::cli {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::Malformed, what); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) malformed(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

std::size_t size_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    malformed(std::string("field \"") + name + "\" is not a non-negative integer");
  }
  return v.get<std::size_t>();
}

double number(const json& v, const char* what) {
  if (!v.is_number()) malformed(std::string(what) + " is not a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) malformed(std::string(what) + " is not finite");
  return x;
}

std::vector<double> weights_from(const json& j) {
  const json& w = field(j, "weights");
  if (!w.is_array()) malformed("weights is not an array");
  std::vector<double> out;
  for (const auto& v : w) out.push_back(number(v, "weight"));
  return out;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NormTooLarge:
    case ErrorKind::NoConvergence:
      return kNumericDomain;
    case ErrorKind::NotHermitian:
    case ErrorKind::NotPSD:
    case ErrorKind::NotUnitary:
    case ErrorKind::NotCP:
    case ErrorKind::NotAFactorisation:
    case ErrorKind::NotBlockDiagonal:
      return kVerificationFailed;
    default:
      return kMalformed;
  }
}

json to_json(const ComplexMatrix& m) {
  json entries = json::array();
  for (const cplx& z : m.entries()) entries.push_back({z.real(), z.imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  const std::size_t rows = size_field(j, "rows"), cols = size_field(j, "cols");
  const json& entries = field(j, "entries");
  if (!entries.is_array() || entries.size() != rows * cols) {
    malformed("entries length is not rows * cols");
  }
  ComplexMatrix m(rows, cols);
  std::size_t at = 0;
  for (const auto& e : entries) {
    if (!e.is_array() || e.size() != 2) malformed("entry is not an [re, im] pair");
    m.entries()[at++] = cplx(number(e[0], "entry"), number(e[1], "entry"));
  }
  return m;
}

json to_json(const channels::MixedUnitaryEnsemble& e) {
  json us = json::array();
  for (const auto& u : e.unitaries) us.push_back(to_json(u));
  return {{"n", e.n}, {"weights", e.weights}, {"unitaries", std::move(us)}};
}

channels::MixedUnitaryEnsemble mixed_from_json(const json& j) {
  channels::MixedUnitaryEnsemble e{size_field(j, "n"), weights_from(j), {}};
  const json& us = field(j, "unitaries");
  if (!us.is_array() || us.size() != e.weights.size()) malformed("unitaries/weights count");
  for (const auto& u : us) {
    e.unitaries.push_back(matrix_from_json(u));
    if (e.unitaries.back().rows() != e.n || e.unitaries.back().cols() != e.n) {
      malformed("ensemble member is not n x n");
    }
  }
  return e;
}

json to_json(const factorise::UnitaryTupleEnsemble& e) {
  json tuples = json::array();
  for (const auto& t : e.tuples) {
    json members = json::array();
    for (const auto& u : t.unitaries) members.push_back(to_json(u));
    tuples.push_back(std::move(members));
  }
  return {{"d", e.d}, {"k", e.k}, {"weights", e.weights}, {"tuples", std::move(tuples)}};
}

factorise::UnitaryTupleEnsemble tuples_from_json(const json& j) {
  factorise::UnitaryTupleEnsemble e{size_field(j, "d"), size_field(j, "k"), weights_from(j), {}};
  const json& tuples = field(j, "tuples");
  if (!tuples.is_array() || tuples.size() != e.weights.size()) malformed("tuples/weights count");
  for (const auto& members : tuples) {
    if (!members.is_array() || members.size() != e.k) malformed("tuple length is not k");
    factorise::UnitaryTuple t{e.d, e.k, {}};
    for (const auto& u : members) {
      t.unitaries.push_back(matrix_from_json(u));
      if (t.unitaries.back().rows() != e.d || t.unitaries.back().cols() != e.d) {
        malformed("tuple member is not d x d");
      }
    }
    e.tuples.push_back(std::move(t));
  }
  return e;
}

json to_json(const factorise::GramCertificate& c) {
  return {{"ensemble", to_json(c.ensemble)},
          {"achieved", to_json(c.achieved)},
          {"target", to_json(c.target)},
          {"residual_fro", c.residual_fro},
          {"residual_max", c.residual_max}};
}

factorise::GramCertificate certificate_from_json(const json& j) {
  factorise::GramCertificate c{tuples_from_json(field(j, "ensemble")),
                               matrix_from_json(field(j, "achieved")),
                               matrix_from_json(field(j, "target")), 0.0, 0.0};
  c.residual_fro = number(field(j, "residual_fro"), "residual_fro");
  c.residual_max = number(field(j, "residual_max"), "residual_max");
  return c;
}

bool is_tuple_form(const json& j) { return j.is_object() && j.contains("tuples"); }
bool is_certificate(const json& j) { return j.is_object() && j.contains("ensemble"); }

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) malformed("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    malformed(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) malformed("cannot write " + path);
  out << j.dump(1) << '\n';
  if (!out) malformed("write failed for " + path);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::InvalidArgument, "SHA-256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) malformed("cannot open " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

double round_sig(double v, int digits) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

}  // namespace mufact::cli
