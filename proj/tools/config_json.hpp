#ifndef NLFT_TOOLS_CONFIG_JSON_HPP
#define NLFT_TOOLS_CONFIG_JSON_HPP

// JSON <-> HarnessConfig, environment overrides, and report serialization.
// Every tunable is a named key; keys that are absent keep their defaults,
// unknown keys are rejected.

#include <cstdlib>
#include <set>
#include <string>

#include "json.hpp"
#include "nlft/harness.hpp"

namespace nlft::cli {

using nlohmann::json;

inline const char* to_string(TestPotentialKind k) {
  switch (k) {
    case TestPotentialKind::zero: return "zero";
    case TestPotentialKind::single_mode: return "single_mode";
    case TestPotentialKind::band_limited_decay: return "band_limited_decay";
  }
  return "?";
}

inline const char* to_string(TailMode m) {
  switch (m) {
    case TailMode::unit: return "unit";
    case TailMode::sine_resummed: return "sine_resummed";
    case TailMode::asymptotic: return "asymptotic";
  }
  return "?";
}

template <class E>
E enum_from(const std::string& s, std::initializer_list<E> all) {
  for (E e : all)
    if (s == to_string(e)) return e;
  throw Error(ErrorKind::ConfigError, "unknown enum value '" + s + "'");
}

// Calls v(section, key, field) for every config field.
template <class V>
void visit_fields(HarnessConfig& c, V&& v) {
  auto& p = c.potential;
  v("potential", "kind", p.kind);
  v("potential", "band_limit", p.band_limit);
  v("potential", "amplitude", p.amplitude);
  v("potential", "decay_order", p.decay_order);
  v("potential", "mode", p.mode);
  v("potential", "seed", p.seed);

  v("harness", "window", c.window);
  v("harness", "report_max", c.report_max);
  v("harness", "n_min", c.n_min);
  v("harness", "small_band", c.small_band);
  v("harness", "zero_samples", c.zero_samples);
  v("harness", "plane_amplitude", c.plane_amplitude);
  v("harness", "plane_mode", c.plane_mode);
  v("harness", "plane_samples", c.plane_samples);
  v("harness", "linear_amplitudes", c.linear_amplitudes);
  v("harness", "decay_orders", c.decay_orders);
  v("harness", "decay_amplitude", c.decay_amplitude);
  v("harness", "conservation_amplitude", c.conservation_amplitude);
  v("harness", "conservation_decay_order", c.conservation_decay_order);
  v("harness", "bracket_window", c.bracket_window);
  v("harness", "bracket_max_n", c.bracket_max_n);
  v("harness", "bracket_amplitude", c.bracket_amplitude);
  v("harness", "bracket_step", c.bracket_step);
  v("harness", "seed", c.seed);

  v("zs_ode", "base_steps", c.spectral.integrator.base_steps);
  v("zs_ode", "steps_per_unit_lambda", c.spectral.integrator.steps_per_unit_lambda);

  v("spectra", "bisection_tol", c.spectral.roots.bisection_tol);
  v("spectra", "secant_steps", c.spectral.roots.secant_steps);
  v("spectra", "max_secant_steps", c.spectral.roots.max_secant_steps);
  v("spectra", "disc_radius_large", c.spectral.disc_radius_large);
  v("spectra", "disc_radius_small", c.spectral.disc_radius_small);
  v("spectra", "gap_collapse_rel", c.spectral.gap_collapse_rel);
  v("spectra", "identity_tol", c.spectral.identity_tol);
  v("spectra", "identity_floor", c.spectral.identity_floor);

  v("roots_products", "K_tail", c.products.K_tail);
  v("roots_products", "tail_mode", c.products.tail_mode);
  v("roots_products", "quad_nodes", c.products.quad_nodes);
  v("roots_products", "branch_tol", c.products.branch_tol);
  v("roots_products", "K_far", c.products.K_far);

  v("actions_angles", "K_psi", c.angles.K_psi);
  v("actions_angles", "K_beta", c.angles.K_beta);
  v("actions_angles", "segment_nodes", c.angles.segment_nodes);
  v("actions_angles", "newton_tol", c.angles.newton_tol);
  v("actions_angles", "newton_max_iter", c.angles.newton_max_iter);
  v("actions_angles", "seam_factor", c.angles.seam_factor);
  v("actions_angles", "richardson_cutoff", c.angles.richardson_cutoff);

  v("nls_evolve", "T", c.evolution.T);
  v("nls_evolve", "dt", c.evolution.dt);
  v("nls_evolve", "M", c.evolution.M);
  v("nls_evolve", "tail_tolerance", c.evolution.tail_tolerance);
  v("nls_evolve", "band_tolerance", c.evolution.band_tolerance);

  auto& t = c.tol;
  v("tolerances", "zero_discriminant", t.zero_discriminant);
  v("tolerances", "zero_spectrum", t.zero_spectrum);
  v("tolerances", "zero_birkhoff", t.zero_birkhoff);
  v("tolerances", "plane_wave", t.plane_wave);
  v("tolerances", "wronskian", t.wronskian);
  v("tolerances", "dirichlet_identity", t.dirichlet_identity);
  v("tolerances", "c_root_square", t.c_root_square);
  v("tolerances", "xi_gamma_action", t.xi_gamma_action);
  v("tolerances", "eta_product", t.eta_product);
  v("tolerances", "action_modulus", t.action_modulus);
  v("tolerances", "conjugation", t.conjugation);
  v("tolerances", "halving_ratio", t.halving_ratio);
  v("tolerances", "halving_spread", t.halving_spread);
  v("tolerances", "envelope_slope", t.envelope_slope);
  v("tolerances", "boundedness_growth", t.boundedness_growth);
  v("tolerances", "asymptotic_gain", t.asymptotic_gain);
  v("tolerances", "rate_slope", t.rate_slope);
  v("tolerances", "tau_slope", t.tau_slope);
  v("tolerances", "spectrum_drift", t.spectrum_drift);
  v("tolerances", "action_drift", t.action_drift);
  v("tolerances", "action_floor", t.action_floor);
  v("tolerances", "l2_drift", t.l2_drift);
  v("tolerances", "bracket", t.bracket);
  v("tolerances", "bracket_oracle", t.bracket_oracle);
}

namespace detail {

template <class T>
json field_to_json(const T& v) {
  if constexpr (std::is_same_v<T, TestPotentialKind> || std::is_same_v<T, TailMode>)
    return to_string(v);
  else
    return v;
}

template <class T>
void field_from_json(const json& j, T& v) {
  if constexpr (std::is_same_v<T, TestPotentialKind>)
    v = enum_from<TestPotentialKind>(j.get<std::string>(), {TestPotentialKind::zero, TestPotentialKind::single_mode,
                                                            TestPotentialKind::band_limited_decay});
  else if constexpr (std::is_same_v<T, TailMode>)
    v = enum_from<TailMode>(j.get<std::string>(), {TailMode::unit, TailMode::sine_resummed, TailMode::asymptotic});
  else
    v = j.get<T>();
}

}  // namespace detail

inline json to_json(const HarnessConfig& cfg) {
  HarnessConfig c = cfg;
  json j = json::object();
  visit_fields(c, [&](const char* s, const char* k, auto& f) { j[s][k] = detail::field_to_json(f); });
  return j;
}

/// Overlays the keys present in `j` on `cfg`.
inline void apply_json(HarnessConfig& cfg, const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config root must be an object");
  std::set<std::string> known;
  visit_fields(cfg, [&](const char* s, const char* k, auto& f) {
    known.insert(std::string(s) + "." + k);
    known.insert(s);
    if (!j.contains(s) || !j.at(s).contains(k)) return;
    try {
      detail::field_from_json(j.at(s).at(k), f);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::ConfigError, std::string("bad value for ") + s + "." + k + ": " + e.what());
    }
  });
  for (const auto& [s, sec] : j.items()) {
    if (!known.count(s)) throw Error(ErrorKind::ConfigError, "unknown config section '" + s + "'");
    if (!sec.is_object()) throw Error(ErrorKind::ConfigError, "config section '" + s + "' must be an object");
    for (const auto& [k, _] : sec.items())
      if (!known.count(s + "." + k)) throw Error(ErrorKind::ConfigError, "unknown config key '" + s + "." + k + "'");
  }
}

/// NLFT_<SECTION>__<KEY>=<json value>, e.g. NLFT_HARNESS__WINDOW=32 or
/// NLFT_ROOTS_PRODUCTS__TAIL_MODE=unit. Values that do not parse as JSON are
/// taken as strings. Section and key match case-insensitively.
inline void apply_env(HarnessConfig& cfg, char** envp) {
  if (!envp) return;
  json overlay = json::object();
  auto lower = [](std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
  };
  std::map<std::string, std::pair<std::string, std::string>> names;
  visit_fields(cfg, [&](const char* s, const char* k, auto&) {
    names[lower(std::string(s) + "__" + k)] = {s, k};
  });
  for (char** e = envp; *e; ++e) {
    const std::string entry(*e);
    if (entry.rfind("NLFT_", 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    const auto name = lower(entry.substr(5, eq - 5));
    const auto it = names.find(name);
    if (it == names.end()) throw Error(ErrorKind::ConfigError, "unknown override " + entry.substr(0, eq));
    const std::string raw = entry.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    overlay[it->second.first][it->second.second] = value;
  }
  if (!overlay.empty()) apply_json(cfg, overlay);
}

inline json to_json(const Check& c) {
  json j{{"name", c.name}, {"measured", c.measured}, {"bound", c.bound}, {"relation", c.relation},
         {"error_bar", c.error_bar}, {"pass", c.passed}};
  if (c.relation == "in") j["spread"] = c.extra;
  return j;
}

/// Report payload; wall-clock times go to a separate "runtime" object so the
/// rest is byte-identical across reruns.
inline json to_json(const ExperimentReport& r, const HarnessConfig& cfg) {
  json claims = json::array();
  json runtime = json::object();
  for (const auto& c : r.claims) {
    json checks = json::array();
    for (const auto& k : c.checks) checks.push_back(to_json(k));
    // the claim's headline value: its first failing check, else its first check
    const Check* head = nullptr;
    for (const auto& k : c.checks)
      if (!k.passed) {
        head = &k;
        break;
      }
    if (!head && !c.checks.empty()) head = &c.checks.front();
    json rec{{"id", c.id},
             {"title", c.title},
             {"status", nlft::to_string(c.status)},
             {"measured", head ? json(head->measured) : json(nullptr)},
             {"bound", head ? json(head->bound) : json(nullptr)},
             {"error_bar", head ? json(head->error_bar) : json(nullptr)},
             {"checks", checks}};
    if (!c.note.empty()) rec["error"] = c.note;
    claims.push_back(rec);
    runtime["claims"][c.id] = c.seconds;
  }
  runtime["total_seconds"] = r.seconds;
  return json{{"experiment", r.experiment},
              {"pass", r.passed()},
              {"inputs", {{"seed", r.seed}, {"potential_hash", r.potential_hash}, {"config", to_json(cfg)}}},
              {"claims", claims},
              {"runtime", runtime}};
}

}  // namespace nlft::cli

#endif  // NLFT_TOOLS_CONFIG_JSON_HPP
