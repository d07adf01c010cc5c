#pragma once

// Config-driven experiments: JSON config in, CSV files out.
//
//   heatbasis <command> --config <path> [--out <dir>]
//
// Every run writes config.json (the canonical echo of the parsed config)
// next to its CSV output. Exit codes: 0 ok, 1 other error, 2 invalid-config,
// 3 numerical convergence failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "heatbasis/caloric.hpp"
#include "heatbasis/dobasis.hpp"
#include "heatbasis/domain.hpp"
#include "heatbasis/error.hpp"
#include "heatbasis/potentials.hpp"
#include "heatbasis/sobolev.hpp"
#include "heatbasis/specialfn.hpp"

#include "json.hpp"

namespace heatbasis::cli {

enum class Command { GreenCheck, Basis, Density, Continue, BesselZeros };

inline const std::vector<std::pair<Command, std::string>>& command_names() {
  static const std::vector<std::pair<Command, std::string>> names{{Command::GreenCheck, "green-check"},
                                                                   {Command::Basis, "basis"},
                                                                   {Command::Density, "density"},
                                                                   {Command::Continue, "continue"},
                                                                   {Command::BesselZeros, "bessel-zeros"}};
  return names;
}

inline std::string to_string(Command c) {
  for (const auto& [k, s] : command_names())
    if (k == c) return s;
  return "?";
}

inline Command parse_command(const std::string& s) {
  for (const auto& [k, name] : command_names())
    if (name == s) return k;
  throw InvalidArgument("invalid-config", "unknown command '" + s + "'");
}

/// Separable ball atoms for k ≤ k_max, every harmonic index j, m ≤ m_max and
/// each listed boundary problem, plus heat polynomials of total degree
/// ≤ heat_degree (negative: none), plus explicit atoms.
struct DictionaryRecipe {
  int k_max = -1;
  int m_max = 0;
  std::vector<BoundaryProblem> problems;
  double R2 = 0.0;
  int heat_degree = -1;
  std::vector<CaloricAtom> atoms;
};

struct ExperimentConfig {
  Command command = Command::BesselZeros;

  // basis, continue
  std::optional<Cylinder> small;
  std::optional<Cylinder> big;
  DictionaryRecipe dictionary;
  InnerProductKind big_kind = InnerProductKind::aniso(1);
  Resolution small_res{24, 24, 40};
  Resolution big_res{24, 24, 40};
  double cholesky_tol = 1e-10;

  // continue
  std::optional<CaloricAtom> target;
  std::vector<SpaceTimePoint> probes;
  std::vector<int> n_trunc;

  // green-check
  std::optional<Cylinder> cylinder;
  std::vector<CaloricCombination> targets;
  std::vector<SpaceTimePoint> points;
  PotentialResolution potential_res;

  // density
  DensityScenario scenario = DensityScenario::NoHole;
  DensityConfig density;

  // bessel-zeros
  std::vector<double> nus;
  int zero_count = 3;
  std::vector<ZeroKind> zero_kinds{ZeroKind::Function};
};

namespace detail {

inline const nlohmann::json& need(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw InvalidArgument("invalid-config", std::string("missing key \"") + key + "\"");
  return j.at(key);
}

inline void only_keys(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument("invalid-config", where + " must be a JSON object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw InvalidArgument("invalid-config", "unknown key \"" + k + "\" in " + where);
}

inline double tolerance(const nlohmann::json& j, const char* name) {
  const double v = j.get<double>();
  if (!(v > 0.0 && v < 1.0)) throw InvalidArgument("invalid-config", std::string(name) + " must lie in (0, 1)");
  return v;
}

inline Resolution resolution_from_json(const nlohmann::json& j) {
  only_keys(j, {"radial", "angular", "temporal"}, "resolution");
  Resolution r{need(j, "radial").get<int>(), need(j, "angular").get<int>(), need(j, "temporal").get<int>()};
  if (r.radial < 1 || r.angular < 1 || r.temporal < 1)
    throw InvalidArgument("invalid-config", "resolution counts must be >= 1");
  return r;
}
inline nlohmann::json to_json(const Resolution& r) {
  return {{"radial", r.radial}, {"angular", r.angular}, {"temporal", r.temporal}};
}

inline PotentialResolution potential_resolution_from_json(const nlohmann::json& j) {
  only_keys(j, {"radial", "angular", "temporal", "levels", "ratio"}, "potential_resolution");
  PotentialResolution r;
  r.radial = need(j, "radial").get<int>();
  r.angular = need(j, "angular").get<int>();
  r.temporal = need(j, "temporal").get<int>();
  r.levels = need(j, "levels").get<int>();
  r.ratio = tolerance(need(j, "ratio"), "ratio");
  if (r.radial < 1 || r.angular < 1 || r.temporal < 1 || r.levels < 0)
    throw InvalidArgument("invalid-config", "potential resolution counts must be positive");
  return r;
}
inline nlohmann::json to_json(const PotentialResolution& r) {
  return {{"radial", r.radial}, {"angular", r.angular}, {"temporal", r.temporal}, {"levels", r.levels}, {"ratio", r.ratio}};
}

inline SpaceTimePoint point_from_json(const nlohmann::json& j, int n) {
  only_keys(j, {"x", "t"}, "point");
  int m = 0;
  SpaceTimePoint p{heatbasis::detail::vec_from_json(need(j, "x"), m), need(j, "t").get<double>()};
  if (m != n) throw InvalidArgument("invalid-config", "point dimension differs from the cylinder dimension");
  return p;
}
inline nlohmann::json to_json(const SpaceTimePoint& p, int n) {
  return {{"x", heatbasis::detail::vec_to_json(p.x, n)}, {"t", p.t}};
}

inline InnerProductKind inner_product_from_json(const nlohmann::json& j) {
  only_keys(j, {"kind", "k", "s"}, "inner_product");
  const std::string kind = need(j, "kind").get<std::string>();
  if (kind == "l2") return InnerProductKind::l2();
  if (kind == "aniso") return InnerProductKind::aniso(need(j, "s").get<int>());
  if (kind == "aniso_k") return InnerProductKind::aniso_k(need(j, "k").get<int>(), need(j, "s").get<int>());
  throw InvalidArgument("invalid-config", "unknown inner product kind '" + kind + "'");
}
inline nlohmann::json to_json(const InnerProductKind& k) {
  switch (k.type()) {
    case InnerProductKind::Type::L2: return {{"kind", "l2"}};
    case InnerProductKind::Type::Aniso: return {{"kind", "aniso"}, {"s", k.s()}};
    default: return {{"kind", "aniso_k"}, {"k", k.k()}, {"s", k.s()}};
  }
}

inline CaloricCombination combination_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("invalid-config", "a target must be a non-empty array of terms");
  CaloricCombination c;
  for (const auto& t : j) {
    only_keys(t, {"coef", "atom"}, "target term");
    c.add(need(t, "coef").get<double>(), atom_from_json(need(t, "atom")));
  }
  return c;
}
inline nlohmann::json to_json(const CaloricCombination& c) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& [coef, atom] : c.terms()) a.push_back({{"coef", coef}, {"atom", heatbasis::to_json(atom)}});
  return a;
}

inline DictionaryRecipe recipe_from_json(const nlohmann::json& j, const Cylinder& big) {
  only_keys(j, {"separable_ball", "heat_degree", "atoms"}, "dictionary");
  DictionaryRecipe r;
  if (j.contains("separable_ball")) {
    const auto& s = j.at("separable_ball");
    only_keys(s, {"k_max", "m_max", "problems", "R2"}, "separable_ball");
    r.k_max = need(s, "k_max").get<int>();
    r.m_max = need(s, "m_max").get<int>();
    if (r.k_max < 0 || r.m_max < 1) throw InvalidArgument("invalid-config", "separable_ball needs k_max >= 0, m_max >= 1");
    for (const auto& p : need(s, "problems")) {
      const auto name = p.get<std::string>();
      if (name == "dirichlet")
        r.problems.push_back(BoundaryProblem::Dirichlet);
      else if (name == "neumann")
        r.problems.push_back(BoundaryProblem::Neumann);
      else
        throw InvalidArgument("invalid-config", "problem must be dirichlet or neumann");
    }
    if (s.contains("R2")) {
      r.R2 = s.at("R2").get<double>();
    } else if (const auto* b = std::get_if<Ball>(&big.base().shape())) {
      r.R2 = b->radius;
    } else {
      throw InvalidArgument("invalid-config", "separable_ball needs R2 when the big base is not a ball");
    }
  }
  if (j.contains("heat_degree")) r.heat_degree = j.at("heat_degree").get<int>();
  if (j.contains("atoms")) r.atoms = dictionary_from_json(j.at("atoms"));
  return r;
}

inline nlohmann::json to_json(const DictionaryRecipe& r) {
  nlohmann::json j = nlohmann::json::object();
  if (r.k_max >= 0) {
    nlohmann::json probs = nlohmann::json::array();
    for (auto p : r.problems) probs.push_back(p == BoundaryProblem::Dirichlet ? "dirichlet" : "neumann");
    j["separable_ball"] = {{"k_max", r.k_max}, {"m_max", r.m_max}, {"problems", probs}, {"R2", r.R2}};
  }
  if (r.heat_degree >= 0) j["heat_degree"] = r.heat_degree;
  if (!r.atoms.empty()) j["atoms"] = dictionary_to_json(r.atoms);
  return j;
}

inline std::string scenario_name(DensityScenario s) { return s == DensityScenario::Hole ? "hole" : "nohole"; }

inline std::string kind_name(ZeroKind k) { return k == ZeroKind::Function ? "function" : "derivative"; }

}  // namespace detail

/// Dictionary described by a recipe, in a fixed order: separable atoms by
/// problem, k, j, m; then heat polynomials; then explicit atoms.
inline std::vector<CaloricAtom> build_dictionary(const DictionaryRecipe& r, int n) {
  std::vector<CaloricAtom> dict;
  for (auto prob : r.problems)
    for (int k = 0; k <= r.k_max; ++k)
      for (int j = 1; j <= harmonic_dimension(n, k); ++j)
        for (int m = 1; m <= r.m_max; ++m) dict.push_back(CaloricAtom::separable_ball(n, prob, k, j, m, r.R2));
  if (r.heat_degree >= 0)
    for (auto& a : heat_polynomial_family(n, r.heat_degree)) dict.push_back(std::move(a));
  dict.insert(dict.end(), r.atoms.begin(), r.atoms.end());
  for (const auto& a : dict)
    if (a.dim() != n) throw InvalidArgument("invalid-config", "dictionary atom dimension differs from the cylinder");
  return dict;
}

/// Parses and validates a config. `command` (from the command line) wins;
/// a "command" key in the file must agree with it. Every failure is an
/// InvalidArgument with code "invalid-config".
inline ExperimentConfig parse_config(const nlohmann::json& j, std::optional<Command> command = std::nullopt) {
  using detail::need;
  try {
    detail::only_keys(j,
                      {"command", "small", "big", "dictionary", "inner_product", "resolution", "tolerances", "target",
                       "probes", "n_trunc", "cylinder", "targets", "points", "potential_resolution", "density",
                       "bessel"},
                      "config");
    ExperimentConfig c;
    if (j.contains("command")) {
      const Command in_file = parse_command(j.at("command").get<std::string>());
      if (command && *command != in_file)
        throw InvalidArgument("invalid-config", "config is for command '" + to_string(in_file) + "'");
      c.command = in_file;
    } else if (command) {
      c.command = *command;
    } else {
      throw InvalidArgument("invalid-config", "no command given");
    }

    if (c.command == Command::Basis || c.command == Command::Continue) {
      c.small = cylinder_from_json(need(j, "small"));
      c.big = cylinder_from_json(need(j, "big"));
      check_nested(*c.small, *c.big);
      c.dictionary = detail::recipe_from_json(need(j, "dictionary"), *c.big);
      if (build_dictionary(c.dictionary, c.big->dim()).empty())
        throw InvalidArgument("invalid-config", "dictionary is empty");
      if (j.contains("inner_product")) c.big_kind = detail::inner_product_from_json(j.at("inner_product"));
      if (j.contains("resolution")) {
        const auto& r = j.at("resolution");
        detail::only_keys(r, {"small", "big"}, "resolution");
        if (r.contains("small")) c.small_res = detail::resolution_from_json(r.at("small"));
        if (r.contains("big")) c.big_res = detail::resolution_from_json(r.at("big"));
      }
      if (j.contains("tolerances")) {
        detail::only_keys(j.at("tolerances"), {"cholesky"}, "tolerances");
        c.cholesky_tol = detail::tolerance(need(j.at("tolerances"), "cholesky"), "cholesky");
      }
    }

    if (c.command == Command::Continue) {
      c.target = atom_from_json(need(j, "target"));
      if (c.target->dim() != c.big->dim()) throw InvalidArgument("invalid-config", "target dimension differs");
      if (!c.target->is_smooth_on(*c.big)) throw InvalidArgument("invalid-config", "target is singular on the big cylinder");
      if (j.contains("probes")) {
        for (const auto& p : j.at("probes")) c.probes.push_back(detail::point_from_json(p, c.big->dim()));
      } else {
        c.probes = gap_probes(*c.small, *c.big, 10);
      }
      if (c.probes.empty()) throw InvalidArgument("invalid-config", "continue needs at least one probe");
      for (const auto& p : c.probes)
        if (!c.big->contains(p)) throw InvalidArgument("invalid-config", "probe outside the big cylinder");
      c.n_trunc = need(j, "n_trunc").get<std::vector<int>>();
      if (c.n_trunc.empty()) throw InvalidArgument("invalid-config", "n_trunc must be non-empty");
      for (int v : c.n_trunc)
        if (v < 0) throw InvalidArgument("invalid-config", "n_trunc entries must be >= 0");
    }

    if (c.command == Command::GreenCheck) {
      c.cylinder = cylinder_from_json(need(j, "cylinder"));
      if (!c.cylinder->base().is_ball()) throw InvalidArgument("invalid-config", "green-check needs a ball base");
      for (const auto& t : need(j, "targets")) {
        c.targets.push_back(detail::combination_from_json(t));
        if (c.targets.back().dim() != c.cylinder->dim())
          throw InvalidArgument("invalid-config", "target dimension differs from the cylinder");
        if (!c.targets.back().is_smooth_on(*c.cylinder))
          throw InvalidArgument("invalid-config", "target is singular on the cylinder");
      }
      for (const auto& p : need(j, "points")) {
        c.points.push_back(detail::point_from_json(p, c.cylinder->dim()));
        const auto& q = c.points.back();
        if (q.t > c.cylinder->t_end()) throw InvalidArgument("invalid-config", "points later than T2 are unsupported");
        if (!c.cylinder->contains(q) && c.cylinder->closure_contains(q))
          throw InvalidArgument("invalid-config", "points on the cylinder boundary are not allowed");
      }
      if (c.targets.empty() || c.points.empty())
        throw InvalidArgument("invalid-config", "green-check needs targets and points");
      if (j.contains("potential_resolution"))
        c.potential_res = detail::potential_resolution_from_json(j.at("potential_resolution"));
    }

    if (c.command == Command::Density) {
      const auto& d = need(j, "density");
      detail::only_keys(d,
                        {"scenario", "n", "t", "hole_radius", "R1", "R2", "shell_factor", "heat_degree", "sizes",
                         "resolution", "rel_tol", "target_scale", "nohole_source_radius", "nohole_source_lag"},
                        "density");
      const std::string sc = need(d, "scenario").get<std::string>();
      if (sc != "hole" && sc != "nohole") throw InvalidArgument("invalid-config", "scenario must be hole or nohole");
      c.scenario = sc == "hole" ? DensityScenario::Hole : DensityScenario::NoHole;
      DensityConfig& dc = c.density;
      if (d.contains("n")) dc.n = d.at("n").get<int>();
      if (d.contains("t")) {
        const auto t = d.at("t").get<std::vector<double>>();
        if (t.size() != 2) throw InvalidArgument("invalid-config", "\"t\" must be [T1, T2]");
        dc.T1 = t[0];
        dc.T2 = t[1];
      }
      if (!(dc.T1 < dc.T2)) throw InvalidArgument("invalid-config", "T1 must be smaller than T2");
      if (dc.n < 1 || dc.n > 3) throw InvalidArgument("invalid-config", "n must be 1, 2 or 3");
      if (d.contains("hole_radius")) dc.hole_radius = d.at("hole_radius").get<double>();
      if (d.contains("R1")) dc.R1 = d.at("R1").get<double>();
      if (d.contains("R2")) dc.R2 = d.at("R2").get<double>();
      if (d.contains("shell_factor")) dc.shell_factor = d.at("shell_factor").get<double>();
      if (!(dc.shell_factor > 1.0)) throw InvalidArgument("invalid-config", "shell_factor must exceed 1");
      if (d.contains("heat_degree")) dc.heat_degree = d.at("heat_degree").get<int>();
      if (d.contains("sizes")) dc.sizes = d.at("sizes").get<std::vector<int>>();
      for (int s : dc.sizes)
        if (s < 0) throw InvalidArgument("invalid-config", "sizes must be >= 0");
      if (d.contains("resolution")) dc.small_res = detail::resolution_from_json(d.at("resolution"));
      if (d.contains("rel_tol")) dc.rel_tol = detail::tolerance(d.at("rel_tol"), "rel_tol");
      if (d.contains("target_scale")) dc.target_scale = d.at("target_scale").get<double>();
      if (d.contains("nohole_source_radius")) dc.nohole_source_radius = d.at("nohole_source_radius").get<double>();
      if (d.contains("nohole_source_lag")) dc.nohole_source_lag = d.at("nohole_source_lag").get<double>();
      density_geometry(c.scenario, dc);
    }

    if (c.command == Command::BesselZeros) {
      const auto& b = need(j, "bessel");
      detail::only_keys(b, {"nu", "count", "kinds"}, "bessel");
      c.nus = need(b, "nu").get<std::vector<double>>();
      if (c.nus.empty()) throw InvalidArgument("invalid-config", "bessel.nu must be non-empty");
      for (double nu : c.nus)
        if (!(nu >= 0.0)) throw InvalidArgument("invalid-config", "bessel orders must be >= 0");
      if (b.contains("count")) c.zero_count = b.at("count").get<int>();
      if (c.zero_count < 1) throw InvalidArgument("invalid-config", "bessel.count must be >= 1");
      if (b.contains("kinds")) {
        c.zero_kinds.clear();
        for (const auto& k : b.at("kinds")) {
          const auto name = k.get<std::string>();
          if (name == "function")
            c.zero_kinds.push_back(ZeroKind::Function);
          else if (name == "derivative")
            c.zero_kinds.push_back(ZeroKind::Derivative);
          else
            throw InvalidArgument("invalid-config", "kind must be function or derivative");
        }
      }
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("invalid-config", std::string("config: ") + e.what());
  } catch (const Error& e) {
    throw InvalidArgument("invalid-config", e.what());
  }
}

/// Canonical echo: re-parsing it yields the same experiment.
inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["command"] = to_string(c.command);
  if (c.command == Command::Basis || c.command == Command::Continue) {
    j["small"] = heatbasis::to_json(*c.small);
    j["big"] = heatbasis::to_json(*c.big);
    j["dictionary"] = detail::to_json(c.dictionary);
    j["inner_product"] = detail::to_json(c.big_kind);
    j["resolution"] = {{"small", detail::to_json(c.small_res)}, {"big", detail::to_json(c.big_res)}};
    j["tolerances"] = {{"cholesky", c.cholesky_tol}};
  }
  if (c.command == Command::Continue) {
    j["target"] = heatbasis::to_json(*c.target);
    nlohmann::json probes = nlohmann::json::array();
    for (const auto& p : c.probes) probes.push_back(detail::to_json(p, c.big->dim()));
    j["probes"] = probes;
    j["n_trunc"] = c.n_trunc;
  }
  if (c.command == Command::GreenCheck) {
    j["cylinder"] = heatbasis::to_json(*c.cylinder);
    nlohmann::json targets = nlohmann::json::array(), points = nlohmann::json::array();
    for (const auto& t : c.targets) targets.push_back(detail::to_json(t));
    for (const auto& p : c.points) points.push_back(detail::to_json(p, c.cylinder->dim()));
    j["targets"] = targets;
    j["points"] = points;
    j["potential_resolution"] = detail::to_json(c.potential_res);
  }
  if (c.command == Command::Density) {
    const DensityConfig& d = c.density;
    j["density"] = {{"scenario", detail::scenario_name(c.scenario)},
                    {"n", d.n},
                    {"t", {d.T1, d.T2}},
                    {"hole_radius", d.hole_radius},
                    {"R1", d.R1},
                    {"R2", d.R2},
                    {"shell_factor", d.shell_factor},
                    {"heat_degree", d.heat_degree},
                    {"sizes", d.sizes},
                    {"resolution", detail::to_json(d.small_res)},
                    {"rel_tol", d.rel_tol},
                    {"target_scale", d.target_scale},
                    {"nohole_source_radius", d.nohole_source_radius},
                    {"nohole_source_lag", d.nohole_source_lag}};
  }
  if (c.command == Command::BesselZeros) {
    nlohmann::json kinds = nlohmann::json::array();
    for (auto k : c.zero_kinds) kinds.push_back(detail::kind_name(k));
    j["bessel"] = {{"nu", c.nus}, {"count", c.zero_count}, {"kinds", kinds}};
  }
  return j;
}

// --- CSV ------------------------------------------------------------------

/// Full-precision scientific notation (17 significant digits).
inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name.
  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw InvalidArgument("no CSV column named '" + name + "'");
  }
  double real(std::size_t row, const std::string& name) const { return std::stod(rows.at(row).at(column(name))); }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::string write_csv(const CsvTable& t) {
  std::string s;
  auto line = [&s](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
    s += "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return s;
}

/// Parses text produced by write_csv; every row must match the header width.
inline CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::stringstream ss(text);
  std::string line;
  bool first = true;
  while (std::getline(ss, line)) {
    if (first) {
      t.header = split_csv_line(line);
      first = false;
      continue;
    }
    auto cells = split_csv_line(line);
    if (cells.size() != t.header.size()) throw InvalidArgument("CSV row width differs from the header");
    t.rows.push_back(std::move(cells));
  }
  if (first) throw InvalidArgument("empty CSV");
  return t;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

// --- commands ---------------------------------------------------------------

/// Output of one run: file name (relative to the output directory) and contents.
using Outputs = std::map<std::string, std::string>;

namespace detail {

inline CsvTable matrix_table(const SymmetricMatrix& g) {
  CsvTable t;
  for (int j = 0; j < g.order(); ++j) t.header.push_back("c" + std::to_string(j));
  for (int i = 0; i < g.order(); ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < g.order(); ++j) row.push_back(format_real(g(i, j)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline GramPair config_pair(const ExperimentConfig& c) {
  return build_gram_pair(build_dictionary(c.dictionary, c.big->dim()), *c.small, *c.big, c.big_kind, c.small_res,
                         c.big_res);
}

inline Outputs run_green_check(const ExperimentConfig& c) {
  CsvTable t{{"target", "x1", "x2", "x3", "t", "inside", "value", "reproduced", "residual"}, {}};
  for (std::size_t i = 0; i < c.targets.size(); ++i)
    for (const auto& p : c.points) {
      const GreenCheck g = green_identity(c.targets[i], *c.cylinder, p, c.potential_res);
      t.rows.push_back({std::to_string(i), format_real(p.x[0]), format_real(p.x[1]), format_real(p.x[2]),
                        format_real(p.t), g.inside ? "1" : "0", format_real(g.value), format_real(g.reproduced),
                        format_real(g.residual)});
    }
  return {{"green_check.csv", write_csv(t)}};
}

inline Outputs run_basis(const ExperimentConfig& c) {
  const GramPair pair = config_pair(c);
  const DoBasis b = double_orthogonal_basis(pair, c.cholesky_tol);
  CsvTable eig{{"nu", "mu_nu"}, {}};
  for (int v = 0; v < b.rank; ++v) eig.rows.push_back({std::to_string(v + 1), format_real(b.mu[v])});
  CsvTable diag{{"key", "value"}, {}};
  diag.rows.push_back({"dictionary_size", std::to_string(pair.order())});
  diag.rows.push_back({"rank", std::to_string(b.rank)});
  diag.rows.push_back({"big_residual", format_real(b.big_residual)});
  diag.rows.push_back({"small_offdiag", format_real(b.small_offdiag)});
  diag.rows.push_back({"small_diag_error", format_real(b.small_diag_error)});
  diag.rows.push_back({"mu_ratio", format_real(b.mu.back() / b.mu.front())});
  return {{"eigenvalues.csv", write_csv(eig)},
          {"diagnostics.csv", write_csv(diag)},
          {"gram_big.csv", write_csv(matrix_table(pair.big))},
          {"gram_small.csv", write_csv(matrix_table(pair.small))}};
}

inline Outputs run_density(const ExperimentConfig& c) {
  const DensityCurve curve = density_experiment(c.scenario, c.density);
  CsvTable t{{"N", "residual", "residual_over_norm"}, {}};
  for (const auto& p : curve.points)
    t.rows.push_back({std::to_string(p.N), format_real(p.residual), format_real(p.relative)});
  return {{"density.csv", write_csv(t)}};
}

inline Outputs run_continue(const ExperimentConfig& c) {
  const GramPair pair = config_pair(c);
  const DoBasis b = double_orthogonal_basis(pair, c.cholesky_tol);
  const CaloricAtom& u = *c.target;
  double scale = 0.0;
  for (const auto& p : c.probes) scale = std::max(scale, std::abs(u(p)));
  CsvTable t{{"n_trunc", "max_error", "max_error_over_scale"}, {}};
  for (int N : c.n_trunc) {
    if (N > b.rank)
      throw InvalidArgument("invalid-config", "n_trunc " + std::to_string(N) + " exceeds the basis rank " +
                                                  std::to_string(b.rank));
    const CaloricCombination v = continue_solution(u, b, pair, N);
    double err = 0.0;
    for (const auto& p : c.probes) err = std::max(err, std::abs(v(p) - u(p)));
    t.rows.push_back({std::to_string(N), format_real(err), format_real(scale > 0 ? err / scale : err)});
  }
  return {{"continuation.csv", write_csv(t)}};
}

inline Outputs run_bessel_zeros(const ExperimentConfig& c) {
  CsvTable t{{"nu", "kind", "m", "zero"}, {}};
  for (double nu : c.nus)
    for (auto kind : c.zero_kinds)
      for (int m = 1; m <= c.zero_count; ++m)
        t.rows.push_back({format_real(nu), kind_name(kind), std::to_string(m), format_real(bessel_zero(nu, m, kind))});
  return {{"zeros.csv", write_csv(t)}};
}

}  // namespace detail

/// Runs a validated config; returns every output file, config.json included.
inline Outputs run(const ExperimentConfig& c) {
  Outputs out;
  switch (c.command) {
    case Command::GreenCheck: out = detail::run_green_check(c); break;
    case Command::Basis: out = detail::run_basis(c); break;
    case Command::Density: out = detail::run_density(c); break;
    case Command::Continue: out = detail::run_continue(c); break;
    case Command::BesselZeros: out = detail::run_bessel_zeros(c); break;
  }
  out["config.json"] = to_json(c).dump(2) + "\n";
  return out;
}

inline int exit_code(const std::string& code) {
  if (code == "invalid-config") return 2;
  if (code == "convergence" || code == "truncation-required" || code == "not-psd") return 3;
  return 1;
}

/// Single-line machine-readable error record.
inline std::string error_line(const std::string& code, const std::string& message) {
  return nlohmann::json{{"error", code}, {"message", message}}.dump();
}

/// Whole command-line flow: read config, validate, run, write files into
/// `out_dir`. Errors go to `err` as one JSON line; returns the exit code.
inline int execute(const std::string& command, const std::filesystem::path& config_path,
                   const std::filesystem::path& out_dir, std::ostream& err) {
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw InvalidArgument("invalid-config", "cannot read config " + config_path.string());
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("invalid-config", std::string("config is not valid JSON: ") + e.what());
    }
    const ExperimentConfig cfg = parse_config(j, parse_command(command));
    const Outputs out = run(cfg);
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, text] : out) {
      std::ofstream f(out_dir / name, std::ios::binary);
      f << text;
      if (!f) throw Error("io", "cannot write " + (out_dir / name).string());
    }
    return 0;
  } catch (const Error& e) {
    err << error_line(e.code(), e.what()) << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << error_line("internal", e.what()) << "\n";
    return 1;
  }
}

}  // namespace heatbasis::cli
