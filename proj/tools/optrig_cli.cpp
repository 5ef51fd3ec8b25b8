// Command-line front end: loads matrix files, runs one computation and writes
// a JSON report (stdout, or --out) plus CSV side files next to --out.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optrig/continuation.hpp"
#include "optrig/decomposition.hpp"
#include "optrig/io.hpp"
#include "optrig/iteration.hpp"
#include "optrig/pencil.hpp"
#include "optrig/settings.hpp"
#include "optrig/validate.hpp"

namespace fs = std::filesystem;
using optrig::io::Json;

namespace
{

enum ExitCode
{
  kOk = 0,
  kFailure = 1,
  kAtPi = 2,
  kParse = 3,
  kInconsistent = 4
};

struct Manifest
{
  std::string command;
  std::string matrix;
  std::string aux;
  std::string rhs;
  std::string dir;
  std::string out;
  std::uint64_t seed = optrig::OptimizerConfig{}.seed;
  std::vector<std::string> overrides;
  std::optional<int> theta_grid;
  std::optional<double> t0;
  std::optional<long> nmax;
};

Json manifest_json(const Manifest &m, const optrig::Settings &s)
{
  Json j{{"command", m.command}, {"seed", m.seed}};
  auto opt_str = [&](const char *key, const std::string &v) {
    if (!v.empty())
    {
      j[key] = v;
    }
  };
  opt_str("matrix", m.matrix);
  opt_str("aux", m.aux);
  opt_str("rhs", m.rhs);
  opt_str("dir", m.dir);
  if (m.theta_grid)
  {
    j["theta_grid"] = *m.theta_grid;
  }
  if (m.t0)
  {
    j["t0"] = optrig::io::number(*m.t0);
  }
  if (m.nmax)
  {
    j["nmax"] = *m.nmax;
  }
  j["overrides"] = m.overrides;
  j["output_path"] = m.out.empty() ? Json(nullptr) : Json(m.out);
  j["settings"] = optrig::settings_json(s);
  return j;
}

/// Side file next to the report: report.json -> report.<tag>.csv.
fs::path side_path(const std::string &out, const std::string &tag)
{
  fs::path p(out);
  return p.parent_path() / (p.stem().string() + "." + tag + ".csv");
}

struct Outcome
{
  Json result;
  std::string verdict;
  int code = kOk;
  std::vector<std::pair<std::string, std::string>> csv;  // tag, contents
};

optrig::OperatorOnSpace require_matrix(const std::string &path, const char *flag)
{
  if (path.empty())
  {
    throw optrig::ParseError(std::string("missing ") + flag);
  }
  return optrig::io::read_operator(path);
}

Outcome run_angle(const Manifest &m, const optrig::Settings &s)
{
  const auto a = require_matrix(m.matrix, "--matrix");
  const auto t = m.aux.empty() ? optrig::OperatorOnSpace::identity(a.space()) : require_matrix(m.aux, "--aux");
  const auto rep = optrig::angle(a, t, s.optimizer);
  return {optrig::io::to_json(rep), rep.degenerate ? "degenerate" : "cosine " + optrig::io::csv_number(rep.cosine),
          kOk, {}};
}

Outcome run_amplitude(const Manifest &m, optrig::Settings s)
{
  const auto a = require_matrix(m.matrix, "--matrix");
  if (m.theta_grid)
  {
    s.amplitude.n_theta = *m.theta_grid;
  }
  const auto rep = optrig::generalized_amplitude_upper(a, s.optimizer, s.amplitude);
  const bool below = rep.classification == optrig::Classification::BelowPi;
  return {optrig::io::to_json(rep), std::string(optrig::to_string(rep.classification)), below ? kOk : kAtPi,
          {{"rays", optrig::io::ray_csv(rep.ray_samples)}}};
}

Outcome run_decompose(const Manifest &m, const optrig::Settings &s)
{
  const auto a = require_matrix(m.matrix, "--matrix");
  const auto dec = optrig::complementarity_oracle(a, s.rank_tol_factor);
  return {optrig::io::to_json(dec), dec.complementary ? "complementary" : "not complementary", kOk, {}};
}

Outcome run_certify(const Manifest &m, const optrig::Settings &s)
{
  const auto a = require_matrix(m.matrix, "--matrix");
  const auto t = require_matrix(m.aux, "--aux");
  if (!m.t0)
  {
    throw optrig::ParseError("missing --t0");
  }
  if (m.rhs.empty())
  {
    throw optrig::ParseError("missing --rhs");
  }
  const auto y = optrig::io::read_vector(m.rhs);
  const auto [x, cert] = optrig::certify_invertible_by_continuation(a, t, *m.t0, y, s.continuation_safety, s.optimizer);
  const auto direct = optrig::solve(a, y);
  const double ref = optrig::lp_norm(direct);
  const double err = optrig::lp_norm(optrig::CVector(x.coords() - direct.coords()), a.p()) / (ref > 0.0 ? ref : 1.0);
  Json result{{"solution", optrig::io::to_json(x)},
              {"direct_solution", optrig::io::to_json(direct)},
              {"relative_error_vs_direct", optrig::io::number(err)},
              {"certificate", optrig::io::to_json(cert)}};
  std::string path = "t_from,t_to,contraction_factor,inner_iterations\n";
  for (std::size_t k = 0; k < cert.contraction_factors.size(); k++)
  {
    path += optrig::io::csv_number(cert.t_path[k]) + "," + optrig::io::csv_number(cert.t_path[k + 1]) + "," +
            optrig::io::csv_number(cert.contraction_factors[k]) + "," + std::to_string(cert.inner_iterations[k]) +
            "\n";
  }
  return {std::move(result), "certified", kOk, {{"steps", std::move(path)}}};
}

Outcome run_iterate(const Manifest &m, optrig::Settings s)
{
  const auto t = require_matrix(m.matrix, "--matrix");
  if (m.nmax)
  {
    s.iteration.n_max = *m.nmax;
  }
  const auto rep = optrig::iterate_to_limit(t, s.iteration);
  const auto reg = optrig::check_asymptotic_regularity(t, s.iteration.n_max, s.iteration.tol);
  const auto prim = optrig::is_primitive_contraction(t, s.optimizer);
  Json result = optrig::io::to_json(rep);
  result["asymptotic_regularity"] = std::string(optrig::to_string(reg.verdict));
  result["primitive_contraction"] = prim.primitive;
  result["norm_estimate"] = optrig::io::number(prim.norm_estimate);
  return {std::move(result), std::string(optrig::to_string(rep.status)), kOk,
          {{"iterations", optrig::io::iteration_csv(rep)}}};
}

Outcome run_validate(const Manifest &m, const optrig::Settings &s)
{
  if (m.dir.empty())
  {
    throw optrig::ParseError("missing --dir");
  }
  const auto summary = optrig::validate_suite(optrig::load_suite(m.dir), s);
  std::cerr << optrig::summary_table(summary);
  std::string csv = "name,oracle_complementary,classification,generalized_upper_bound,best_cosine,agrees\n";
  for (const auto &r : summary.rows)
  {
    csv += r.name + "," + (r.oracle_complementary ? "true" : "false") + "," +
           std::string(optrig::to_string(r.amplitude.classification)) + "," +
           optrig::io::csv_number(r.amplitude.generalized_upper_bound) + "," +
           optrig::io::csv_number(r.amplitude.best_cosine) + "," + (r.agrees ? "true" : "false") + "\n";
  }
  const bool ok = summary.disagreements == 0;
  return {optrig::to_json(summary),
          ok ? "all agree" : std::to_string(summary.disagreements) + " disagreements",
          ok ? kOk : kAtPi,
          {{"summary", std::move(csv)}}};
}

void emit(const Manifest &m, const Json &report)
{
  const std::string text = optrig::io::dump(report);
  if (m.out.empty())
  {
    std::cout << text;
  }
  else
  {
    optrig::io::write_text(m.out, text);
  }
}

int error_code(const std::exception &e)
{
  if (dynamic_cast<const optrig::ParseError *>(&e))
  {
    return kParse;
  }
  if (dynamic_cast<const optrig::InternalInconsistency *>(&e) || dynamic_cast<const optrig::StepStall *>(&e))
  {
    return kInconsistent;
  }
  return kFailure;
}

std::string error_type(const std::exception &e)
{
  if (dynamic_cast<const optrig::ParseError *>(&e)) return "ParseError";
  if (dynamic_cast<const optrig::InternalInconsistency *>(&e)) return "InternalInconsistency";
  if (dynamic_cast<const optrig::StepStall *>(&e)) return "StepStall";
  if (dynamic_cast<const optrig::PreconditionFailure *>(&e)) return "PreconditionFailure";
  if (dynamic_cast<const optrig::NontrivialKernel *>(&e)) return "NontrivialKernel";
  if (dynamic_cast<const optrig::SingularOperator *>(&e)) return "SingularOperator";
  if (dynamic_cast<const optrig::NearKernel *>(&e)) return "NearKernel";
  if (dynamic_cast<const optrig::NonHilbert *>(&e)) return "NonHilbert";
  if (dynamic_cast<const optrig::InvalidInput *>(&e)) return "InvalidInput";
  return "Error";
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Operator trigonometry toolkit: angles, amplitudes and range-kernel complementarity"};
  app.require_subcommand(1);
  Manifest m;
  app.add_option("--seed", m.seed, "Optimizer seed")->capture_default_str();
  app.add_option("--out", m.out, "Report path (default: stdout); CSV side files go next to it");
  app.add_option("--set", m.overrides, "Override a setting, key=value (repeatable)");

  auto *angle = app.add_subcommand("angle", "cos_T(A) and the angle; T defaults to the identity");
  angle->add_option("--matrix", m.matrix, "Matrix file for A")->required();
  angle->add_option("--aux", m.aux, "Matrix file for T");

  auto *amplitude = app.add_subcommand("amplitude", "Krein amplitude and generalized amplitude bound");
  amplitude->add_option("--matrix", m.matrix, "Matrix file for A")->required();
  amplitude->add_option("--theta-grid", m.theta_grid, "Number of ray directions");

  auto *decompose = app.add_subcommand("decompose", "Range-kernel complementarity and the S P factorization");
  decompose->add_option("--matrix", m.matrix, "Matrix file for A")->required();

  auto *certify = app.add_subcommand("certify-invertible", "Solve A x = y by continuation along A + tT");
  certify->add_option("--matrix", m.matrix, "Matrix file for A")->required();
  certify->add_option("--aux", m.aux, "Matrix file for T")->required();
  certify->add_option("--t0", m.t0, "Start of the continuation path")->required();
  certify->add_option("--rhs", m.rhs, "Vector file for y")->required();

  auto *iterate = app.add_subcommand("iterate", "Powers T^n, asymptotic regularity and the limit projection");
  iterate->add_option("--matrix", m.matrix, "Matrix file for T")->required();
  iterate->add_option("--nmax", m.nmax, "Maximum power");

  auto *validate = app.add_subcommand("validate-suite", "Classifier vs oracle over a directory of matrix files");
  validate->add_option("--dir", m.dir, "Suite directory")->required();

  for (auto *sub : {angle, amplitude, decompose, certify, iterate, validate})
  {
    sub->fallthrough();
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }
  m.command = app.get_subcommands().front()->get_name();

  optrig::Settings settings;
  Json report;
  int code = kOk;
  try
  {
    for (const auto &o : m.overrides)
    {
      optrig::apply_override(settings, o);
    }
    settings.optimizer.seed = m.seed;
    Outcome res;
    if (m.command == "angle")
      res = run_angle(m, settings);
    else if (m.command == "amplitude")
      res = run_amplitude(m, settings);
    else if (m.command == "decompose")
      res = run_decompose(m, settings);
    else if (m.command == "certify-invertible")
      res = run_certify(m, settings);
    else if (m.command == "iterate")
      res = run_iterate(m, settings);
    else
      res = run_validate(m, settings);

    report = Json{{"manifest", manifest_json(m, settings)}, {"result", std::move(res.result)}, {"verdict", res.verdict}};
    code = res.code;
    if (!m.out.empty())
    {
      for (const auto &[tag, contents] : res.csv)
      {
        optrig::io::write_text(side_path(m.out, tag), contents);
      }
    }
  }
  catch (const std::exception &e)
  {
    code = error_code(e);
    report = Json{{"manifest", manifest_json(m, settings)},
                  {"error", {{"type", error_type(e)}, {"message", e.what()}, {"exit_code", code}}},
                  {"verdict", "error"}};
    std::cerr << "error: " << e.what() << "\n";
  }
  try
  {
    emit(m, report);
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return code;
}
