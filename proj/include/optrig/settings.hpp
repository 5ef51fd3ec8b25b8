#pragma once

#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "optrig/continuation.hpp"
#include "optrig/io.hpp"
#include "optrig/iteration.hpp"
#include "optrig/pencil.hpp"

namespace optrig
{

/// Every tunable of a run in one place. The key table below is the single
/// source of defaults for `--set key=value` overrides.
struct Settings
{
  OptimizerConfig optimizer;
  AmplitudeOptions amplitude;
  IterationOptions iteration;
  double rank_tol_factor = 1.0;
  double continuation_safety = 0.9;
  int lower_bound_samples = 10000;
};

namespace detail
{

template <typename T>
T parse_value(std::string_view key, std::string_view text)
{
  T v{};
  const auto *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
  {
    throw ParseError("--set " + std::string(key) + ": cannot parse '" + std::string(text) + "'");
  }
  return v;
}

struct SettingKey
{
  std::function<void(Settings &, std::string_view)> set;
  std::function<io::Json(const Settings &)> get;
};

/// key -> accessor, sorted by key.
inline const std::map<std::string, SettingKey, std::less<>> &setting_table()
{
  static const std::map<std::string, SettingKey, std::less<>> table = [] {
    std::map<std::string, SettingKey, std::less<>> t;
    auto add = [&](const std::string &key, auto field) {
      using Value = std::remove_reference_t<decltype(field(std::declval<Settings &>()))>;
      t[key] = {[key, field](Settings &s, std::string_view v) { field(s) = parse_value<Value>(key, v); },
                [field](const Settings &s) {
                  if constexpr (std::is_floating_point_v<Value>)
                  {
                    return io::number(field(s));
                  }
                  else
                  {
                    return io::Json(field(s));
                  }
                }};
    };
    add("optimizer.n_starts", [](auto &s) -> auto & { return s.optimizer.n_starts; });
    add("optimizer.limit_starts", [](auto &s) -> auto & { return s.optimizer.limit_starts; });
    add("optimizer.max_iters", [](auto &s) -> auto & { return s.optimizer.max_iters; });
    add("optimizer.step_tol", [](auto &s) -> auto & { return s.optimizer.step_tol; });
    add("optimizer.value_tol", [](auto &s) -> auto & { return s.optimizer.value_tol; });
    add("optimizer.kernel_exclusion_radius",
             [](auto &s) -> auto & { return s.optimizer.kernel_exclusion_radius; });
    add("amplitude.n_theta", [](auto &s) -> auto & { return s.amplitude.n_theta; });
    add("amplitude.theta_refine_iters", [](auto &s) -> auto & { return s.amplitude.theta_refine_iters; });
    add("amplitude.n_random", [](auto &s) -> auto & { return s.amplitude.n_random; });
    add("amplitude.margin_threshold", [](auto &s) -> auto & { return s.amplitude.margin_threshold; });
    add("amplitude.perturbation_scale", [](auto &s) -> auto & { return s.amplitude.perturbation_scale; });
    add("iteration.n_max", [](auto &s) -> auto & { return s.iteration.n_max; });
    add("iteration.tol", [](auto &s) -> auto & { return s.iteration.tol; });
    add("iteration.blowup", [](auto &s) -> auto & { return s.iteration.blowup; });
    add("iteration.projection_tol", [](auto &s) -> auto & { return s.iteration.projection_tol; });
    add("rank.tol_factor", [](auto &s) -> auto & { return s.rank_tol_factor; });
    add("continuation.safety", [](auto &s) -> auto & { return s.continuation_safety; });
    add("lower_bound.samples", [](auto &s) -> auto & { return s.lower_bound_samples; });
    return t;
  }();
  return table;
}

}  // namespace detail

/// Applies one "key=value" override. Unknown keys and unparsable values raise
/// ParseError.
inline void apply_override(Settings &s, std::string_view assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
  {
    throw ParseError("--set expects key=value, got '" + std::string(assignment) + "'");
  }
  const auto key = assignment.substr(0, eq);
  const auto &table = detail::setting_table();
  const auto it = table.find(key);
  if (it == table.end())
  {
    throw ParseError("--set: unknown key '" + std::string(key) + "'");
  }
  it->second.set(s, assignment.substr(eq + 1));
  s.amplitude.tol_factor = s.rank_tol_factor;
}

/// Effective settings, keys sorted.
inline io::Json settings_json(const Settings &s)
{
  io::Json out = io::Json::object();
  for (const auto &[key, entry] : detail::setting_table())
  {
    out[key] = entry.get(s);
  }
  out["optimizer.seed"] = s.optimizer.seed;
  return out;
}

}  // namespace optrig
