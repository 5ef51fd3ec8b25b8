#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "optrig/decomposition.hpp"
#include "optrig/fixtures.hpp"
#include "optrig/io.hpp"
#include "optrig/pencil.hpp"
#include "optrig/settings.hpp"

namespace optrig
{

/// A suite matrix together with its optional labels.
struct SuiteEntry
{
  std::string name;
  std::string family;
  OperatorOnSpace op;
  std::optional<bool> expected_complementary;
};

/// Matrix file with the optional extra fields "name", "family" and
/// "expected_complementary" used by suite directories.
inline io::Json suite_entry_json(const fixtures::NamedOperator &f)
{
  io::Json j = io::to_json(f.op());
  j["name"] = f.name;
  j["family"] = f.family;
  j["expected_complementary"] = f.expected_complementary;
  return j;
}

inline SuiteEntry suite_entry_from_json(const io::Json &j, const std::string &fallback_name)
{
  SuiteEntry e{fallback_name, "", io::operator_from_json(j), std::nullopt};
  if (j.contains("name") && j["name"].is_string())
  {
    e.name = j["name"].get<std::string>();
  }
  if (j.contains("family") && j["family"].is_string())
  {
    e.family = j["family"].get<std::string>();
  }
  if (j.contains("expected_complementary") && j["expected_complementary"].is_boolean())
  {
    e.expected_complementary = j["expected_complementary"].get<bool>();
  }
  return e;
}

/// Every *.json file of the directory, in lexicographic file-name order.
inline std::vector<SuiteEntry> load_suite(const std::filesystem::path &dir)
{
  if (!std::filesystem::is_directory(dir))
  {
    throw ParseError("suite directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto &ent : std::filesystem::directory_iterator(dir))
  {
    if (ent.is_regular_file() && ent.path().extension() == ".json")
    {
      files.push_back(ent.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<SuiteEntry> out;
  for (const auto &f : files)
  {
    out.push_back(suite_entry_from_json(io::read_json_file(f), f.stem().string()));
  }
  return out;
}

/// Writes one file per fixture, numbered to keep the listed order.
inline void write_suite(const std::filesystem::path &dir, const std::vector<fixtures::NamedOperator> &suite)
{
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < suite.size(); i++)
  {
    char prefix[8];
    std::snprintf(prefix, sizeof prefix, "%03zu-", i);
    io::write_json(dir / (prefix + suite[i].name + ".json"), suite_entry_json(suite[i]));
  }
}

struct SuiteRow
{
  std::string name;
  std::string family;
  Index dim = 0;
  double p = 2.0;
  bool oracle_complementary = false;
  std::optional<bool> expected_complementary;
  AmplitudeReport amplitude;
  bool agrees = false;  // classifier vs oracle
};

struct SuiteSummary
{
  std::vector<SuiteRow> rows;
  int agreements = 0;
  int disagreements = 0;
  int label_mismatches = 0;  // oracle vs the file's expected label
};

/// Classifies every entry and compares with the complementarity oracle.
/// Rows keep the input order, so the result depends only on the entries and
/// the settings.
inline SuiteSummary validate_suite(const std::vector<SuiteEntry> &entries, const Settings &s)
{
  SuiteSummary out;
  for (const auto &e : entries)
  {
    SuiteRow row;
    row.name = e.name;
    row.family = e.family;
    row.dim = e.op.dim();
    row.p = e.op.p();
    row.expected_complementary = e.expected_complementary;
    row.oracle_complementary = complementarity_oracle(e.op, s.rank_tol_factor).complementary;
    row.amplitude = generalized_amplitude_upper(e.op, s.optimizer, s.amplitude);
    row.agrees = (row.amplitude.classification == Classification::BelowPi) == row.oracle_complementary;
    (row.agrees ? out.agreements : out.disagreements)++;
    if (e.expected_complementary && *e.expected_complementary != row.oracle_complementary)
    {
      out.label_mismatches++;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

inline io::Json to_json(const SuiteSummary &s)
{
  io::Json rows = io::Json::array();
  for (const auto &r : s.rows)
  {
    rows.push_back(io::Json{{"name", r.name},
                            {"family", r.family},
                            {"dim", r.dim},
                            {"p", r.p},
                            {"oracle_complementary", r.oracle_complementary},
                            {"expected_complementary",
                             r.expected_complementary ? io::Json(*r.expected_complementary) : io::Json(nullptr)},
                            {"classification", std::string(to_string(r.amplitude.classification))},
                            {"generalized_upper_bound", io::number(r.amplitude.generalized_upper_bound)},
                            {"krein_amplitude", io::number(r.amplitude.krein_amplitude)},
                            {"best_cosine", io::number(r.amplitude.best_cosine)},
                            {"best_source", std::string(to_string(r.amplitude.best_source))},
                            {"agrees", r.agrees}});
  }
  return io::Json{{"total", s.rows.size()},
                  {"agreements", s.agreements},
                  {"disagreements", s.disagreements},
                  {"label_mismatches", s.label_mismatches},
                  {"rows", std::move(rows)}};
}

/// Fixed-width agreement table for terminals.
inline std::string summary_table(const SuiteSummary &s)
{
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-36s %3s %4s %-8s %-8s %9s %10s %s\n", "name", "n", "p", "oracle", "class",
                "Am<=", "best_cos", "agree");
  out += line;
  for (const auto &r : s.rows)
  {
    std::snprintf(line, sizeof line, "%-36s %3ld %4.1f %-8s %-8s %9.5f %10.6f %s\n", r.name.c_str(),
                  static_cast<long>(r.dim), r.p, r.oracle_complementary ? "comp" : "non-comp",
                  std::string(to_string(r.amplitude.classification)).c_str(), r.amplitude.generalized_upper_bound,
                  r.amplitude.best_cosine, r.agrees ? "yes" : "NO");
    out += line;
  }
  std::snprintf(line, sizeof line, "agreement %d/%zu\n", s.agreements, s.rows.size());
  out += line;
  return out;
}

}  // namespace optrig
