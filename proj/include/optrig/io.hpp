#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "optrig/continuation.hpp"
#include "optrig/decomposition.hpp"
#include "optrig/iteration.hpp"
#include "optrig/pencil.hpp"
#include "optrig/space.hpp"

namespace optrig::io
{

/// Insertion-ordered JSON, so reports keep a fixed key order.
using Json = nlohmann::ordered_json;

/// Finite doubles are written as numbers (shortest round-trip form); the
/// non-finite ones as the strings "inf", "-inf" and "nan".
inline Json number(double v)
{
  if (std::isnan(v))
  {
    return "nan";
  }
  if (std::isinf(v))
  {
    return v > 0 ? "inf" : "-inf";
  }
  return v;
}

inline double read_number(const Json &j, const std::string &what)
{
  if (j.is_number())
  {
    return j.get<double>();
  }
  if (j.is_string())
  {
    const auto s = j.get<std::string>();
    if (s == "inf")
    {
      return std::numeric_limits<double>::infinity();
    }
    if (s == "-inf")
    {
      return -std::numeric_limits<double>::infinity();
    }
    if (s == "nan")
    {
      return std::numeric_limits<double>::quiet_NaN();
    }
  }
  throw ParseError(what + ": expected a number");
}

inline Json complex_json(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

inline Complex read_complex(const Json &j, const std::string &what)
{
  if (!j.is_array() || j.size() != 2)
  {
    throw ParseError(what + ": expected a [re, im] pair");
  }
  return {read_number(j[0], what), read_number(j[1], what)};
}

/// {"dim": n, "p": p, "entries": [[re, im], ...]} with row-major entries.
inline Json to_json(const OperatorOnSpace &a)
{
  Json entries = Json::array();
  for (Index i = 0; i < a.dim(); i++)
  {
    for (Index j = 0; j < a.dim(); j++)
    {
      entries.push_back(complex_json(a.entries()(i, j)));
    }
  }
  return Json{{"dim", a.dim()}, {"p", a.p()}, {"entries", std::move(entries)}};
}

/// {"dim": n, "p": p, "coords": [[re, im], ...]}.
inline Json to_json(const Vector &x)
{
  Json coords = Json::array();
  for (Index i = 0; i < x.coords().size(); i++)
  {
    coords.push_back(complex_json(x.coords()(i)));
  }
  return Json{{"dim", x.space().dim()}, {"p", x.space().p()}, {"coords", std::move(coords)}};
}

namespace detail
{

inline SpaceSpec read_space(const Json &j, const std::string &what)
{
  if (!j.is_object() || !j.contains("dim") || !j.contains("p"))
  {
    throw ParseError(what + ": expected an object with fields dim and p");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
  {
    throw ParseError(what + ": dim must be a positive integer");
  }
  const double p = read_number(j["p"], what);
  try
  {
    return SpaceSpec(static_cast<Index>(j["dim"].get<long long>()), p);
  }
  catch (const InvalidInput &e)
  {
    throw ParseError(what + ": " + e.what());
  }
}

inline CVector read_complex_array(const Json &j, Index expected, const std::string &what)
{
  if (!j.is_array() || static_cast<Index>(j.size()) != expected)
  {
    throw ParseError(what + ": expected " + std::to_string(expected) + " [re, im] pairs");
  }
  CVector out(expected);
  for (Index i = 0; i < expected; i++)
  {
    out(i) = read_complex(j[static_cast<std::size_t>(i)], what);
  }
  return out;
}

}  // namespace detail

inline OperatorOnSpace operator_from_json(const Json &j)
{
  const auto space = detail::read_space(j, "matrix");
  if (!j.contains("entries"))
  {
    throw ParseError("matrix: missing field entries");
  }
  const Index n = space.dim();
  const CVector flat = detail::read_complex_array(j["entries"], n * n, "matrix entries");
  CMatrix m(n, n);
  for (Index i = 0; i < n; i++)
  {
    for (Index c = 0; c < n; c++)
    {
      m(i, c) = flat(i * n + c);
    }
  }
  try
  {
    return OperatorOnSpace(space, std::move(m));
  }
  catch (const InvalidInput &e)
  {
    throw ParseError(std::string("matrix: ") + e.what());
  }
}

inline Vector vector_from_json(const Json &j)
{
  const auto space = detail::read_space(j, "vector");
  if (!j.contains("coords"))
  {
    throw ParseError("vector: missing field coords");
  }
  try
  {
    return Vector(space, detail::read_complex_array(j["coords"], space.dim(), "vector coords"));
  }
  catch (const InvalidInput &e)
  {
    throw ParseError(std::string("vector: ") + e.what());
  }
}

inline Json parse_text(const std::string &text, const std::string &what)
{
  try
  {
    return Json::parse(text);
  }
  catch (const nlohmann::json::parse_error &e)
  {
    throw ParseError(what + ": " + e.what());
  }
}

inline Json read_json_file(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path.string());
}

inline OperatorOnSpace read_operator(const std::filesystem::path &path) { return operator_from_json(read_json_file(path)); }

inline Vector read_vector(const std::filesystem::path &path) { return vector_from_json(read_json_file(path)); }

/// Two-space indentation and a trailing newline.
inline std::string dump(const Json &j) { return j.dump(2) + "\n"; }

inline void write_text(const std::filesystem::path &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw Error("cannot write " + path.string());
  }
  out << text;
}

inline void write_json(const std::filesystem::path &path, const Json &j) { write_text(path, dump(j)); }

// Report serialization. Field order follows the struct declarations.

inline Json to_json(const AngleReport &r)
{
  return Json{{"cosine", number(r.cosine)},   {"angle", number(r.angle)},   {"witness", to_json(r.witness)},
              {"n_starts", r.n_starts},       {"n_converged", r.n_converged}, {"spread", number(r.spread)},
              {"degenerate", r.degenerate}};
}

inline Json to_json(const SubspaceBasis &b)
{
  Json cols = Json::array();
  for (Index j = 0; j < b.size(); j++)
  {
    cols.push_back(to_json(b.vector(j)));
  }
  return Json{{"dimension", b.size()}, {"orthonormal", b.orthonormal}, {"vectors", std::move(cols)}};
}

inline Json to_json(const DecompositionResult &d)
{
  return Json{{"complementary", d.complementary},
              {"rank", d.rank},
              {"rank_squared", d.rank_squared},
              {"sum_dimension", d.sum_dimension},
              {"intersection_dimension", d.intersection_dimension},
              {"range_basis", to_json(d.range_basis)},
              {"kernel_basis", to_json(d.kernel_basis)},
              {"projection_P", d.projection_P ? to_json(*d.projection_P) : Json(nullptr)},
              {"factor_S", d.factor_S ? to_json(*d.factor_S) : Json(nullptr)}};
}

inline Json to_json(const AmplitudeReport &r)
{
  return Json{{"classification", std::string(to_string(r.classification))},
              {"krein_amplitude", number(r.krein_amplitude)},
              {"krein_theta", number(r.krein_theta)},
              {"generalized_upper_bound", number(r.generalized_upper_bound)},
              {"margin", number(r.margin)},
              {"best_cosine", number(r.best_cosine)},
              {"best_source", std::string(to_string(r.best_source))},
              {"best_pencil", r.best_pencil ? to_json(*r.best_pencil) : Json(nullptr)},
              {"candidates_tried", r.candidates_tried},
              {"members_evaluated", r.members_evaluated},
              {"complementary_by_oracle", r.complementary_by_oracle},
              {"n_ray_samples", r.ray_samples.size()}};
}

inline Json number_array(const std::vector<double> &v)
{
  Json out = Json::array();
  for (double x : v)
  {
    out.push_back(number(x));
  }
  return out;
}

inline Json to_json(const ContinuationCertificate &c)
{
  return Json{{"delta", number(c.delta)},
              {"c", number(c.c)},
              {"k_A", number(c.k_A)},
              {"mu", number(c.mu)},
              {"cosine", number(c.cosine)},
              {"n_steps", c.contraction_factors.size()},
              {"t_path", number_array(c.t_path)},
              {"contraction_factors", number_array(c.contraction_factors)},
              {"inner_iterations", c.inner_iterations},
              {"final_residual", number(c.final_residual)}};
}

inline Json to_json(const IterationReport &r)
{
  return Json{{"status", std::string(to_string(r.status))},
              {"converged", r.converged},
              {"divergence_detected", r.divergence_detected},
              {"n_iterations", r.n_iterations},
              {"limit_matrix", r.limit_matrix ? to_json(*r.limit_matrix) : Json(nullptr)},
              {"expected_limit", r.expected_limit ? to_json(*r.expected_limit) : Json(nullptr)},
              {"limit_is_projection", r.limit_is_projection},
              {"limit_matches_decomposition", r.limit_matches_decomposition},
              {"asymptotic_regularity_residuals", number_array(r.asymptotic_regularity_residuals)}};
}

/// Shortest round-trip text for CSV cells.
inline std::string csv_number(double v)
{
  const Json j = number(v);
  return j.is_string() ? j.get<std::string>() : j.dump();
}

inline std::string iteration_csv(const IterationReport &r)
{
  std::string out = "n,residual,iterate_max_norm\n";
  for (const auto &row : r.trace)
  {
    out += std::to_string(row.n) + "," + csv_number(row.residual) + "," + csv_number(row.iterate_max_norm) + "\n";
  }
  return out;
}

inline std::string ray_csv(const std::vector<RaySample> &samples)
{
  std::string out = "theta,cosine,angle\n";
  for (const auto &s : samples)
  {
    out += csv_number(s.theta) + "," + csv_number(s.report.cosine) + "," + csv_number(s.report.angle) + "\n";
  }
  return out;
}

}  // namespace optrig::io
