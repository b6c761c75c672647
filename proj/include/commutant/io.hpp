#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commutant/errors.hpp"
#include "commutant/families.hpp"
#include "commutant/normality.hpp"
#include "commutant/residuals.hpp"
#include "commutant/spectra.hpp"

namespace commutant {

using json = nlohmann::json;

inline json cplx_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline cplx cplx_from_json(const json& j, const char* what) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw ConfigError(std::string("field '") + what + "' must be a number or [re, im]");
}

inline json cplx_vector_to_json(const std::vector<cplx>& v) {
  json out = json::array();
  for (cplx x : v) out.push_back(cplx_to_json(x));
  return out;
}

inline json to_json(const FamilyParams& params) {
  json j;
  j["variant"] = variant_name(params);
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, General>) {
          j["lambda"] = cplx_to_json(p.lambda);
          j["mu"] = cplx_to_json(p.mu);
          j["alpha1"] = cplx_to_json(p.alpha1);
          j["alpha2"] = cplx_to_json(p.alpha2);
        } else if constexpr (std::is_same_v<T, Case1>) {
          j["m"] = p.m;
          j["alpha"] = cplx_to_json(p.alpha);
          j["beta"] = cplx_to_json(p.beta);
        } else if constexpr (std::is_same_v<T, Case2>) {
          j["lambda"] = cplx_to_json(p.lambda);
          j["alpha"] = cplx_to_json(p.alpha);
          j["beta"] = cplx_to_json(p.beta);
        } else {
          j["beta"] = cplx_to_json(p.beta);
          j["p"] = json::array({cplx_to_json(p.p[0]), cplx_to_json(p.p[1]), cplx_to_json(p.p[2])});
        }
      },
      params);
  return j;
}

inline FamilyParams family_params_from_json(const json& j) {
  if (!j.is_object() || !j.contains("variant") || !j["variant"].is_string())
    throw ConfigError("params must be an object with a string 'variant'");
  const std::string v = j["variant"].get<std::string>();
  auto get = [&j](const char* key) {
    return j.contains(key) ? cplx_from_json(j[key], key) : cplx{0.0};
  };
  auto get_p = [&j]() {
    std::array<cplx, 3> p{};
    if (!j.contains("p")) return p;
    const json& jp = j["p"];
    if (!jp.is_array()) throw ConfigError("field 'p' must be an array of coefficients");
    for (std::size_t k = 0; k < jp.size(); ++k) {
      const cplx c = cplx_from_json(jp[k], "p");
      if (k < 3)
        p[k] = c;
      else if (c != cplx{0.0})
        throw InvalidPolynomial("p must have degree at most 2");
    }
    return p;
  };
  if (v == "general") return General{get("lambda"), get("mu"), get("alpha1"), get("alpha2")};
  if (v == "case1") {
    if (!j.contains("m") || !j["m"].is_number_integer())
      throw ConfigError("case1 needs an integer 'm'");
    return Case1{j["m"].get<int>(), get("alpha"), get("beta")};
  }
  if (v == "case2") return Case2{get("lambda"), get("alpha"), get("beta")};
  if (v == "case3") return Case3{get("beta"), get_p()};
  if (v == "case4") return Case4{get("beta"), get_p()};
  throw ConfigError("unknown variant '" + v + "'");
}

inline json to_json(const ResidualReport& r) {
  return json{{"max_abs", r.max_abs}, {"rms", r.rms},           {"argmax", {r.argmax_y, r.argmax_z}},
              {"n_points", r.n_points}, {"scale", r.scale}};
}

inline json to_json(const SpectralReport& r) {
  return json{{"L_eigenvalues", cplx_vector_to_json(r.L_eigenvalues)},
              {"rayleigh", cplx_vector_to_json(r.rayleigh)},
              {"mode_residuals", r.mode_residuals},
              {"offdiag_energy", r.offdiag_energy},
              {"K_eigenvalues_direct", cplx_vector_to_json(r.K_eigenvalues_direct)},
              {"degenerate_spectrum", r.degenerate_spectrum}};
}

inline json to_json(const NormalityReport& r) {
  json j{{"selfadjoint", r.selfadjoint},
         {"normal", r.normal},
         {"condition_residuals", r.condition_residuals},
         {"alpha", r.alpha},
         {"gamma", r.gamma},
         {"reason", r.reason}};
  if (r.matrix_check) j["matrix_check"] = *r.matrix_check;
  return j;
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// idx, Re/Im L-eigenvalue, Re/Im Rayleigh quotient, residual
inline void write_modes_csv(std::ostream& os, const SpectralReport& r) {
  os << "idx,L_re,L_im,rayleigh_re,rayleigh_im,residual\n";
  for (std::size_t i = 0; i < r.L_eigenvalues.size(); ++i)
    os << i << ',' << format_number(r.L_eigenvalues[i].real()) << ','
       << format_number(r.L_eigenvalues[i].imag()) << ',' << format_number(r.rayleigh[i].real())
       << ',' << format_number(r.rayleigh[i].imag()) << ',' << format_number(r.mode_residuals[i])
       << '\n';
}

}  // namespace commutant
