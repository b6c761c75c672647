#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commutant/discretization.hpp"
#include "commutant/io.hpp"
#include "commutant/normality.hpp"
#include "commutant/residuals.hpp"
#include "commutant/spectra.hpp"

namespace commutant {

inline const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> c{"pair", "verify", "commutator", "spectrum", "normality",
                                          "sweep"};
  return c;
}

inline std::map<std::string, double> default_tolerances() {
  return {{"boundary", 1e-12},        {"r1", 1e-9},         {"taylor", 1e-10},
          {"lemma", 1e-9},            {"singular_relation", 1e-10},
          {"commutator", 1e-8},       {"commutator_pv", 1e-3},
          {"offdiag", 1e-6},          {"rayleigh", 1e-6},   {"mode_residual", 1e-5},
          {"normality", 1e-10},       {"selfadjoint_matrix", 1e-8}};
}

struct RunConfig {
  std::string command;
  std::optional<FamilyParams> params;
  int n = 64;
  GridKind grid_kind = GridKind::legendre_gauss_lobatto;
  int m = 8;
  std::map<std::string, double> tolerances = default_tolerances();
  std::string output_path = ".";
  std::uint64_t seed = 42;
  int count = 25;  // accepted draws in a sweep
  bool dump = false;
  bool quiet = false;

  double tol(const std::string& name) const { return tolerances.at(name); }
};

inline RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  try {
    if (j.contains("command")) c.command = j["command"].get<std::string>();
    if (j.contains("params")) c.params = family_params_from_json(j["params"]);
    if (j.contains("n")) c.n = j["n"].get<int>();
    if (j.contains("grid_kind")) c.grid_kind = grid_kind_from_string(j["grid_kind"].get<std::string>());
    if (j.contains("m")) c.m = j["m"].get<int>();
    if (j.contains("output_path")) c.output_path = j["output_path"].get<std::string>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("count")) c.count = j["count"].get<int>();
    if (j.contains("tolerances")) {
      if (!j["tolerances"].is_object()) throw ConfigError("'tolerances' must be an object");
      for (const auto& [name, v] : j["tolerances"].items()) c.tolerances[name] = v.get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const GridKindError& e) {
    throw ConfigError(e.what());
  }
  if (c.n < 2) throw ConfigError("'n' must be at least 2");
  if (c.m < 1) throw ConfigError("'m' must be at least 1");
  if (c.count < 0) throw ConfigError("'count' must be non-negative");
  for (const auto& [name, v] : c.tolerances)
    if (!(v > 0.0)) throw ConfigError("tolerance '" + name + "' must be positive");
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON in '") + path + "': " + e.what());
  }
  return parse_config(j);
}

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

struct RunResult {
  int exit_status = 0;
  json report;
  std::vector<Check> checks;
};

namespace detail {

class Runner {
 public:
  explicit Runner(const RunConfig& cfg) : cfg_(cfg) {}

  RunResult run() {
    res_.report = json{{"schema", 1}, {"command", cfg_.command}};
    if (cfg_.command == "sweep") {
      sweep();
    } else {
      if (!cfg_.params) throw ConfigError("command '" + cfg_.command + "' needs 'params'");
      res_.report["params"] = to_json(*cfg_.params);
      const CommutingPair pair = make_pair(*cfg_.params);
      if (cfg_.command == "pair")
        pair_cmd(pair);
      else if (cfg_.command == "verify")
        verify(pair);
      else if (cfg_.command == "commutator")
        commutator(pair);
      else if (cfg_.command == "spectrum")
        spectrum(pair);
      else if (cfg_.command == "normality")
        normality(pair);
      else
        throw ConfigError("unknown command '" + cfg_.command + "'");
    }
    json checks = json::array();
    bool ok = true;
    for (const auto& c : res_.checks) {
      checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
      ok = ok && c.pass;
    }
    res_.report["checks"] = checks;
    res_.report["pass"] = ok;
    res_.exit_status = ok ? 0 : 1;
    write_outputs();
    return res_;
  }

 private:
  void check(const std::string& name, double value, double tol) {
    res_.checks.push_back({name, value, tol, value <= tol});
  }

  void file(const std::string& name, const std::string& contents) { files_[name] = contents; }

  void pair_cmd(const CommutingPair& pair) {
    const Kernel& k = pair.kernel;
    json& r = res_.report;
    r["singular"] = k.singular();
    r["trivial"] = k.trivial();
    if (pair.nu) r["nu"] = cplx_to_json(*pair.nu);
    r["series"] = cplx_vector_to_json(k.series());
    check("boundary_defect", boundary_defect(pair.op), cfg_.tol("boundary"));

    std::ostringstream coeffs;
    coeffs << "y,a_re,a_im,b_re,b_im,c_re,c_im\n";
    for (double y : chebyshev_points(41)) {
      const cplx a = pair.op.a(y), b = pair.op.b(y), c = pair.op.c(y);
      coeffs << format_number(y) << ',' << format_number(a.real()) << ',' << format_number(a.imag())
             << ',' << format_number(b.real()) << ',' << format_number(b.imag()) << ','
             << format_number(c.real()) << ',' << format_number(c.imag()) << '\n';
    }
    file("coefficients.csv", coeffs.str());

    std::ostringstream ks;
    ks << "z,k_re,k_im\n";
    for (int i = 0; i <= 160; ++i) {
      const double z = -2.0 + i / 40.0;
      if (k.singular() && i == 80) continue;
      const cplx v = k(z);
      ks << format_number(z) << ',' << format_number(v.real()) << ',' << format_number(v.imag())
         << '\n';
    }
    file("kernel.csv", ks.str());
  }

  void verify(const CommutingPair& pair) {
    const ResidualReport r1 = residual_R1(pair);
    res_.report["residual_R1"] = to_json(r1);
    check("r1_relative", r1.relative(), cfg_.tol("r1"));
    check("boundary_defect", boundary_defect(pair.op), cfg_.tol("boundary"));
    const CommutingPair normalized = gauge_normalize(pair);
    if (!pair.kernel.singular()) {
      const auto taylor = taylor_relation_check(pair, 6);
      res_.report["taylor_relation"] = taylor;
      check("taylor_relation_max", *std::max_element(taylor.begin(), taylor.end()),
            cfg_.tol("taylor"));
      const LemmaReport lm = lemma_coeff_check(normalized);
      res_.report["lemma"] = {{"b_eq_aprime", lm.b_eq_aprime}, {"c_eq_nu_a", lm.c_eq_nu_a},
                              {"a_ode", lm.a_ode},             {"nu", cplx_to_json(lm.nu)},
                              {"alpha", cplx_to_json(lm.alpha)}};
      check("lemma_b_eq_aprime", lm.b_eq_aprime, cfg_.tol("lemma"));
      check("lemma_c_eq_nu_a", lm.c_eq_nu_a, cfg_.tol("lemma"));
      check("lemma_a_ode", lm.a_ode, cfg_.tol("lemma"));
    } else {
      const SingularRelationReport sr = singular_relation_check(normalized);
      res_.report["singular_relation"] = {{"residual", sr.residual},
                                          {"fitted_const", cplx_to_json(sr.fitted_const)}};
      check("singular_relation", sr.residual, cfg_.tol("singular_relation"));
    }
  }

  std::pair<OperatorMatrix, OperatorMatrix> matrices(const CommutingPair& pair) {
    const Grid g = build_grid(cfg_.n, cfg_.grid_kind);
    OperatorMatrix k = discretize_K(pair.kernel, g);
    OperatorMatrix l = collocation_L(pair.op, g);
    if (cfg_.dump) {
      std::ostringstream ks, ls;
      write_matrix_csv(ks, k);
      write_matrix_csv(ls, l);
      file("K.csv", ks.str());
      file("L.csv", ls.str());
    }
    res_.report["n"] = cfg_.n;
    res_.report["grid_kind"] = to_string(cfg_.grid_kind);
    return {std::move(k), std::move(l)};
  }

  void commutator(const CommutingPair& pair) {
    const auto [k, l] = matrices(pair);
    const bool pv = pair.kernel.singular();
    const double norm = commutator_norm(k, l, {true, pv});
    res_.report["commutator_norm"] = norm;
    res_.report["interior_only"] = pv;
    check("commutator_norm", norm, cfg_.tol(pv ? "commutator_pv" : "commutator"));
  }

  void spectrum(const CommutingPair& pair) {
    const auto [k, l] = matrices(pair);
    const SpectralReport rep = joint_diagonalization(k, l, std::min(cfg_.m, cfg_.n));
    res_.report["spectrum"] = to_json(rep);
    std::ostringstream modes;
    write_modes_csv(modes, rep);
    file("modes.csv", modes.str());
    if (!pair.kernel.singular()) {
      check("offdiag_energy", rep.offdiag_energy, cfg_.tol("offdiag"));
      check("rayleigh_mismatch", rayleigh_mismatch(rep), cfg_.tol("rayleigh"));
    } else {
      check("mode_residual_max",
            *std::max_element(rep.mode_residuals.begin(), rep.mode_residuals.end()),
            cfg_.tol("mode_residual"));
    }
  }

  void normality(const CommutingPair& pair) {
    const NormalityReport nr = is_normal(pair.op, cfg_.tol("normality"), true);
    const double defect = matrix_selfadjoint_defect(pair.op);
    res_.report["normality"] = to_json(nr);
    res_.report["selfadjoint_matrix_defect"] = defect;
    const bool agree = nr.selfadjoint == (defect <= cfg_.tol("selfadjoint_matrix"));
    res_.checks.push_back({"selfadjoint_verdict_agreement", agree ? 0.0 : 1.0, 0.0, agree});
  }

  void sweep() {
    std::mt19937_64 rng(cfg_.seed);
    std::uniform_real_distribution<double> box(-3.0, 3.0), unit(-1.0, 1.0);
    json rejections = json::array();
    std::ostringstream csv;
    csv << "idx,lambda_re,lambda_im,mu_re,mu_im,alpha1_re,alpha1_im,alpha2_re,alpha2_im,"
           "r1_relative,pass\n";
    int accepted = 0, draws = 0;
    const int max_draws = 100 * std::max(cfg_.count, 1);
    while (accepted < cfg_.count && draws < max_draws) {
      ++draws;
      General g;
      g.lambda = cplx(box(rng), box(rng));
      g.mu = cplx(box(rng), box(rng));
      g.alpha1 = cplx(unit(rng), unit(rng));
      g.alpha2 = cplx(unit(rng), unit(rng));
      std::string reason;
      if (auto adm = check_admissibility(g); !adm.ok)
        reason = adm.reason;
      else if (classify_trivial(g))
        reason = "trivial kernel";
      if (!reason.empty()) {
        rejections.push_back({{"draw", draws}, {"params", to_json(g)}, {"reason", reason}});
        if (!cfg_.quiet) std::clog << "sweep: rejected draw " << draws << ": " << reason << '\n';
        continue;
      }
      const CommutingPair pair = make_general_pair(g);
      const double r1 = residual_R1(pair).relative();
      const bool pass = r1 <= cfg_.tol("r1");
      csv << accepted;
      for (cplx v : {g.lambda, g.mu, g.alpha1, g.alpha2})
        csv << ',' << format_number(v.real()) << ',' << format_number(v.imag());
      csv << ',' << format_number(r1) << ',' << (pass ? "true" : "false") << '\n';
      check("draw_" + std::to_string(accepted) + "_r1_relative", r1, cfg_.tol("r1"));
      ++accepted;
    }
    res_.report["seed"] = cfg_.seed;
    res_.report["draws"] = draws;
    res_.report["accepted"] = accepted;
    res_.report["rejections"] = rejections;
    file("sweep.csv", csv.str());
    res_.checks.push_back({"accepted_count", double(cfg_.count - accepted), 0.0, accepted == cfg_.count});
  }

  void write_outputs() {
    std::ostringstream summary;
    summary << "name,value,tolerance,pass\n";
    for (const auto& c : res_.checks)
      summary << c.name << ',' << format_number(c.value) << ',' << format_number(c.tolerance) << ','
              << (c.pass ? "true" : "false") << '\n';
    file("summary.csv", summary.str());
    file("report.json", res_.report.dump(2) + "\n");

    namespace fs = std::filesystem;
    const fs::path dir(cfg_.output_path);
    std::error_code ec;
    fs::create_directories(dir, ec);
    for (const auto& [name, contents] : files_) {
      std::ofstream out(dir / name, std::ios::binary);
      if (!out) throw ConfigError("cannot write '" + (dir / name).string() + "'");
      out << contents;
    }
  }

  const RunConfig& cfg_;
  RunResult res_;
  std::map<std::string, std::string> files_;
};

}  // namespace detail

/// Runs one command and writes report.json, summary.csv and command-specific
/// tables into cfg.output_path. Exit status 0 iff every check passes.
inline RunResult run(const RunConfig& cfg) { return detail::Runner(cfg).run(); }

}  // namespace commutant
