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

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>

#include "CLI11.hpp"

#include "mufact/cli.hpp"
#include "mufact/kernels.hpp"
#include "mufact/norms.hpp"

namespace mufact::cli {

namespace {

// Everything a command contributes to its report.
struct Job {
  json inputs = json::object();
  json results = json::object();
  std::optional<std::uint64_t> seed;

  json load(const std::string& path) {
    json j = read_json(path);
    inputs[path] = file_sha256(path);
    return j;
  }
};

// Input files that parse but fail their preconditions are malformed input,
// not failed verifications.
template <class Fn>
auto as_malformed(const std::string& what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Malformed) throw;
    throw Error(ErrorKind::Malformed, what + ": " + e.what());
  }
}

json rounded(const json& j) {
  if (j.is_number_float()) return round_sig(j.get<double>());
  if (j.is_array() || j.is_object()) {
    json out = j;
    for (auto& v : out) v = rounded(v);
    return out;
  }
  return j;
}

ComplexMatrix load_correlation(Job& job, const std::string& path) {
  return as_malformed(path, [&] {
    ComplexMatrix c = matrix_from_json(job.load(path));
    channels::require_correlation(c);
    return c;
  });
}

factorise::UnitaryTupleEnsemble load_tuples(Job& job, const std::string& path) {
  return as_malformed(path, [&] {
    json j = job.load(path);
    auto e = tuples_from_json(is_certificate(j) ? j.at("ensemble") : j);
    factorise::validate(e, 1e-9);
    return e;
  });
}

double choi_distance(const channels::LinearMap& a, const channels::LinearMap& b) {
  return max_abs(channels::choi_of(a).matrix - channels::choi_of(b).matrix);
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string kind, out, c_out;
  std::size_t k = 0, d = 1, atoms = 3, rank = 0;
  std::uint64_t seed = 0;
};

int cmd_gen(const GenArgs& a, Job& job) {
  job.seed = a.seed;
  if (a.k == 0 || a.d == 0) throw Error(ErrorKind::InvalidArgument, "--k and --d must be >= 1");
  const Seed seed{a.seed};
  if (a.kind == "correlation") {
    const ComplexMatrix c = random_correlation(a.k, seed, a.rank);
    write_json(a.out, to_json(c));
    job.results = {{"kind", a.kind}, {"k", a.k}, {"rank", a.rank}};
  } else if (a.kind == "tuple") {
    factorise::UnitaryTupleEnsemble e{a.d, a.k, {1.0}, {factorise::sample_fkd(a.d, a.k, seed)}};
    write_json(a.out, to_json(e));
    job.results = {{"kind", a.kind}, {"d", a.d}, {"k", a.k}};
  } else {
    if (a.atoms == 0) throw Error(ErrorKind::InvalidArgument, "--atoms must be >= 1");
    if (a.c_out.empty()) throw Error(ErrorKind::InvalidArgument, "fkd-convex needs --c-out");
    auto e = factorise::sample_fkd_convex(a.d, a.k, a.atoms, seed);
    const ComplexMatrix c = factorise::gram_average(e);
    const auto cert = factorise::make_certificate(std::move(e), c);
    write_json(a.out, to_json(cert));
    write_json(a.c_out, to_json(c));
    job.results = {{"kind", a.kind}, {"d", a.d}, {"k", a.k}, {"atoms", a.atoms},
                   {"residual_fro", cert.residual_fro}};
  }
  return kOk;
}

struct FactoriseArgs {
  std::string c_path, out, warm;
  std::size_t d = 1, atoms = 0, restarts = 20, max_iters = 500;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

int cmd_factorise(const FactoriseArgs& a, Job& job) {
  job.seed = a.seed;
  const ComplexMatrix c = load_correlation(job, a.c_path);
  factorise::SolverOptions opts;
  opts.atoms = a.atoms;
  opts.restarts = a.restarts;
  opts.max_iters = a.max_iters;
  opts.tol = a.tol;
  opts.seed = Seed{a.seed};
  if (!a.warm.empty()) opts.warm_start = load_tuples(job, a.warm);
  if (a.d == 0) throw Error(ErrorKind::InvalidArgument, "--d must be >= 1");

  const auto res = factorise::membership_solve(c, a.d, opts);
  const auto bound = factorise::bound_for_certificate(res.certificate);
  write_json(a.out, to_json(res.certificate));
  job.results = {{"d", a.d},
                 {"k", c.rows()},
                 {"atoms_used", res.certificate.ensemble.size()},
                 {"residual_fro", res.certificate.residual_fro},
                 {"residual_max", res.certificate.residual_max},
                 {"tol", a.tol},
                 {"best_restart", res.best_restart},
                 {"iterations", res.objective.size() - 1},
                 {"restart_objectives", res.restart_objectives},
                 {"dist_upper_bound", bound.upper},
                 {"cb_norm_lower", bound.cb.lower},
                 {"psd_split_bound", bound.psd_split}};
  return res.certificate.residual_fro <= a.tol ? kOk : kResidualAboveTol;
}

int cmd_mu(const std::string& tuples_path, const std::string& out, Job& job) {
  const auto tuples = load_tuples(job, tuples_path);
  const auto e = factorise::mu_ensemble_from_tuples(tuples);
  const ComplexMatrix c = factorise::gram_average(tuples);
  const double channel_error =
      choi_distance(channels::as_map(e), channels::lift_schur({c}, tuples.d));
  const double off = factorise::max_off_block(e, tuples.d, tuples.k);
  write_json(out, to_json(e));
  job.results = {{"d", tuples.d},         {"k", tuples.k},           {"terms", e.size()},
                 {"gram_average", to_json(c)}, {"channel_error", channel_error},
                 {"max_off_block", off}};
  const bool ok = channel_error <= 1e-9 && off <= 1e-10;
  job.results["verified"] = ok;
  return ok ? kOk : kVerificationFailed;
}

struct ExtractArgs {
  std::string ensemble, c_path, out;
  std::size_t d = 0, k = 0;
  double tol = 1e-9;
};

int cmd_extract(const ExtractArgs& a, Job& job) {
  const auto e = as_malformed(a.ensemble, [&] { return mixed_from_json(job.load(a.ensemble)); });
  const ComplexMatrix c = load_correlation(job, a.c_path);
  const auto tuples = factorise::tuples_from_ensemble(e, c, a.d, a.k, a.tol);
  write_json(a.out, to_json(tuples));
  job.results = {{"d", a.d},
                 {"k", a.k},
                 {"tuples", tuples.size()},
                 {"gram_error", max_abs(factorise::gram_average(tuples) - c)},
                 {"verified", true}};
  return kOk;
}

struct CorrectArgs {
  std::string c_path, phi, out, cert_out;
  double epsilon = 0.0;
  bool premise = true;
  std::uint64_t seed = 0;
};

int cmd_correct(const CorrectArgs& a, Job& job) {
  job.seed = a.seed;
  const ComplexMatrix c = load_correlation(job, a.c_path);
  // Structure only: a corrupt ensemble is the pipeline's NormTooLarge case.
  const auto phi = as_malformed(a.phi, [&] { return mixed_from_json(job.load(a.phi)); });
  factorise::CorrectionOptions opts;
  opts.premise_bound = a.premise;
  opts.ascent.seed = Seed{a.seed};
  const auto rep = factorise::correction_pipeline(c, phi, a.epsilon, opts);

  json summary = {{"max_abs_delta", rep.max_abs_delta},
                  {"epsilon_in", rep.epsilon_in},
                  {"bound_ok", rep.bound_ok},
                  {"max_diag_defect", rep.max_diag_defect},
                  {"cross_check_error", rep.cross_check_error},
                  {"certificate_dimension", rep.certificate.ensemble.d},
                  {"certificate_residual_max", rep.certificate.residual_max}};
  if (rep.premise_lower_bound) summary["premise_lower_bound"] = *rep.premise_lower_bound;

  json full = summary;
  full["c"] = to_json(rep.c);
  full["c_tilde"] = to_json(rep.c_tilde);
  full["c_hat"] = to_json(rep.c_hat);
  full["certificate"] = to_json(rep.certificate);
  write_json(a.out, full);
  if (!a.cert_out.empty()) write_json(a.cert_out, to_json(rep.certificate));

  job.results = summary;
  job.results["c_tilde"] = to_json(rep.c_tilde);
  job.results["c_hat"] = to_json(rep.c_hat);
  return kOk;
}

struct NormsArgs {
  std::string a_path;
  bool psd = false;
  std::size_t starts = 8;
  std::uint64_t seed = 0;
};

int cmd_norms(const NormsArgs& a, Job& job) {
  job.seed = a.seed;
  const ComplexMatrix m = as_malformed(a.a_path, [&] { return matrix_from_json(job.load(a.a_path)); });
  if (!m.is_square()) throw Error(ErrorKind::Malformed, "symbol is not square");
  if (a.psd) {
    const double v = norms::schur_norm_psd(m);
    job.results = {{"method", "psd-max-diagonal"}, {"lower", v}, {"upper", v}};
    return kOk;
  }
  const auto cb = norms::schur_cb_norm(m);
  norms::AscentOptions ascent;
  ascent.seed = Seed{a.seed};
  ascent.starts = a.starts;
  const double lb = norms::superop_norm_lb(
      norms::BasisActionTable::from_map(channels::schur_map({m})), ascent);
  job.results = {{"method", cb.method},
                 {"lower", cb.lower},
                 {"upper", cb.upper},
                 {"norm_lower_bound", lb}};
  return kOk;
}

// Per-file verification; returns a detail object with a "pass" flag.
json verify_one(const std::string& what, const json& j, double tol) {
  json detail = json::object();
  try {
    if (what == "correlation") {
      const ComplexMatrix c = matrix_from_json(j);
      detail["pass"] = channels::is_correlation(c, tol);
      if (c.is_square()) detail["min_eigenvalue"] = min_eigenvalue(0.5 * (c + c.adjoint()));
    } else if (what == "ensemble") {
      if (is_tuple_form(j)) {
        factorise::validate(tuples_from_json(j), 1e-9);
      } else {
        channels::validate(mixed_from_json(j), 1e-9);
      }
      detail["pass"] = true;
    } else if (what == "certificate") {
      const json& body = j.contains("certificate") ? j.at("certificate") : j;
      const auto check = factorise::verify_certificate(certificate_from_json(body), tol);
      detail = {{"pass", check.ok},
                {"achieved_error", check.achieved_error},
                {"residual_error", check.residual_error}};
      if (!check.message.empty()) detail["message"] = check.message;
    } else {
      channels::ChannelReport r;
      if (j.contains("unitaries")) {
        const auto e = mixed_from_json(j);
        channels::validate(e, 1e-9);
        r = channels::verify_channel(channels::as_map(e), tol);
      } else {
        const ComplexMatrix m = matrix_from_json(j);
        const auto n = static_cast<std::size_t>(std::llround(std::sqrt(double(m.rows()))));
        if (!m.is_square() || n * n != m.rows()) {
          throw Error(ErrorKind::Malformed, "Choi matrix side is not a square number");
        }
        r = channels::verify_channel(channels::ChoiMatrix{n, n, m}, tol);
      }
      detail = {{"pass", r.all()},
                {"cp", r.cp},
                {"tp", r.tp},
                {"unital", r.unital},
                {"min_choi_eigenvalue", r.min_choi_eigenvalue},
                {"tp_residual", r.tp_residual},
                {"unital_residual", r.unital_residual}};
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Malformed) throw;
    detail = {{"pass", false}, {"message", e.what()}};
  }
  return detail;
}

int cmd_verify(const std::string& what, const std::vector<std::string>& files, double tol,
               Job& job) {
  bool all = true;
  json per_file = json::array();
  for (const auto& path : files) {
    json detail = verify_one(what, job.load(path), tol);
    all = all && detail.at("pass").get<bool>();
    detail["path"] = path;
    per_file.push_back(std::move(detail));
  }
  job.results = {{"what", what}, {"tol", tol}, {"pass", all}, {"files", std::move(per_file)}};
  return all ? kOk : kVerificationFailed;
}

int cmd_biaverage(const std::string& path, const std::string& out, Job& job) {
  const ComplexMatrix m = as_malformed(path, [&] { return matrix_from_json(job.load(path)); });
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(double(m.rows()))));
  if (!m.is_square() || n * n != m.rows()) {
    throw Error(ErrorKind::Malformed, "Choi matrix side is not a square number");
  }
  const auto sym = channels::d_biaverage(channels::ChoiMatrix{n, n, m});
  if (!out.empty()) write_json(out, to_json(sym.matrix));
  job.results = {{"k", n},
                 {"symbol", to_json(sym.matrix)},
                 {"min_eigenvalue", min_eigenvalue(sym.matrix)}};
  return kOk;
}

int cmd_dilate(const std::string& path, const std::string& out, Job& job) {
  const ComplexMatrix x = as_malformed(path, [&] { return matrix_from_json(job.load(path)); });
  const ComplexMatrix w = factorise::halmos_dilate(x);
  if (!out.empty()) write_json(out, to_json(w));
  job.results = {{"op_norm", op_norm(x)},
                 {"dilation", to_json(w)},
                 {"unitarity_residual", unitarity_residual(w)}};
  return kOk;
}

void apply_thread_cap() {
  if (const char* env = std::getenv("MUFACT_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) kernels::set_max_threads(static_cast<int>(n));
  }
}

}  // namespace

int run(int argc, char** argv) {
  apply_thread_cap();
  CLI::App app{"Mixed-unitary factorisation of Schur multipliers"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string report_path;
  app.add_option("--report", report_path, "Also write the JSON report to this file");

  std::function<int(Job&)> action;

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a correlation matrix, tuple or planted instance");
  g->add_option("kind", gen.kind)->required()->check(
      CLI::IsMember({"correlation", "tuple", "fkd-convex"}));
  g->add_option("--k", gen.k)->required();
  g->add_option("--d", gen.d);
  g->add_option("--atoms", gen.atoms);
  g->add_option("--rank", gen.rank, "Rank of a generated correlation matrix (0 = full)");
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out)->required();
  g->add_option("--c-out", gen.c_out, "fkd-convex: where to write the Gram average");
  g->callback([&] { action = [&](Job& j) { return cmd_gen(gen, j); }; });

  FactoriseArgs fac;
  auto* f = app.add_subcommand("factorise", "Search conv(F_k(d)) for a correlation matrix");
  f->add_option("--C", fac.c_path)->required();
  f->add_option("--d", fac.d)->required();
  f->add_option("--atoms", fac.atoms, "0 selects k^2 + 1");
  f->add_option("--restarts", fac.restarts);
  f->add_option("--max-iters", fac.max_iters);
  f->add_option("--tol", fac.tol);
  f->add_option("--seed", fac.seed);
  f->add_option("--warm", fac.warm, "Tuple ensemble or certificate used as restart 0");
  f->add_option("--out", fac.out)->required();
  f->callback([&] { action = [&](Job& j) { return cmd_factorise(fac, j); }; });

  std::string mu_in, mu_out;
  auto* m = app.add_subcommand("mu", "Mixed-unitary ensemble realising a tuple ensemble");
  m->add_option("--tuples", mu_in)->required();
  m->add_option("--out", mu_out)->required();
  m->callback([&] { action = [&](Job& j) { return cmd_mu(mu_in, mu_out, j); }; });

  ExtractArgs ex;
  auto* x = app.add_subcommand("extract", "Read unitary tuples back out of an ensemble");
  x->add_option("--ensemble", ex.ensemble)->required();
  x->add_option("--C", ex.c_path)->required();
  x->add_option("--d", ex.d)->required();
  x->add_option("--k", ex.k)->required();
  x->add_option("--tol", ex.tol);
  x->add_option("--out", ex.out)->required();
  x->callback([&] { action = [&](Job& j) { return cmd_extract(ex, j); }; });

  CorrectArgs cor;
  auto* c = app.add_subcommand("correct", "Correct an approximate factorisation");
  c->add_option("--C", cor.c_path)->required();
  c->add_option("--phi", cor.phi)->required();
  c->add_option("--epsilon", cor.epsilon)->required();
  c->add_option("--seed", cor.seed);
  c->add_option("--out", cor.out)->required();
  c->add_option("--cert-out", cor.cert_out);
  c->add_flag("!--no-premise", cor.premise, "Skip the heuristic premise lower bound");
  c->callback([&] { action = [&](Job& j) { return cmd_correct(cor, j); }; });

  NormsArgs nrm;
  auto* n = app.add_subcommand("norms", "Norm bounds for a Schur multiplier");
  n->add_option("--A", nrm.a_path)->required();
  n->add_flag("--psd", nrm.psd);
  n->add_option("--starts", nrm.starts);
  n->add_option("--seed", nrm.seed);
  n->callback([&] { action = [&](Job& j) { return cmd_norms(nrm, j); }; });

  std::string what;
  std::vector<std::string> files;
  double vtol = 1e-10;
  auto* v = app.add_subcommand("verify", "Re-verify files from scratch");
  v->add_option("--what", what)->required()->check(
      CLI::IsMember({"correlation", "ensemble", "certificate", "channel"}));
  v->add_option("--tol", vtol);
  v->add_option("files", files)->required();
  v->callback([&] { action = [&](Job& j) { return cmd_verify(what, files, vtol, j); }; });

  std::string choi_path, bi_out;
  auto* b = app.add_subcommand("biaverage", "Diagonal biaverage of a channel given by its Choi matrix");
  b->add_option("--choi", choi_path)->required();
  b->add_option("--out", bi_out);
  b->callback([&] { action = [&](Job& j) { return cmd_biaverage(choi_path, bi_out, j); }; });

  std::string x_path, dil_out;
  auto* dl = app.add_subcommand("dilate", "Unitary dilation of a contraction");
  dl->add_option("--X", x_path)->required();
  dl->add_option("--out", dil_out);
  dl->callback([&] { action = [&](Job& j) { return cmd_dilate(x_path, dil_out, j); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kMalformed;
  }

  json command = json::array();
  for (int i = 0; i < argc; ++i) command.push_back(argv[i]);
  Job job;
  int code = kOk;
  std::string error;
  const auto start = std::chrono::steady_clock::now();
  try {
    code = action(job);
  } catch (const Error& e) {
    code = exit_code_for(e.kind());
    error = e.what();
  } catch (const std::exception& e) {
    code = kMalformed;
    error = e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json report = {{"command", command},
                 {"inputs", job.inputs},
                 {"results", rounded(job.results)},
                 {"exit_code", code}};
  if (job.seed) report["seed"] = *job.seed;
  if (!error.empty()) {
    report["error"] = error;
    std::cerr << "mufact: " << error << '\n';
  }
  report["timing"] = {{"wall_seconds", seconds}};
  std::cout << report.dump(2) << '\n';
  if (!report_path.empty()) {
    try {
      write_json(report_path, report);
    } catch (const Error& e) {
      std::cerr << "mufact: " << e.what() << '\n';
      return kMalformed;
    }
  }
  return code;
}

}  // namespace mufact::cli
