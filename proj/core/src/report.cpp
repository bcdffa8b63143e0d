#include "fuchsol/report.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

namespace fuchsol {
namespace lab {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string code_version() { return "fuchsol 0.1.0"; }

std::string record_to_csv(const RunRecord& rec) {
  std::string out = "t,dt";
  out += ",L2";
  for (int l = 1; l <= rec.k; ++l) out += ",H" + std::to_string(l);
  out += ",P_L2,P_Hk1,Pperp_Hk1,energy_Q,identity_residual\n";
  for (const auto& s : rec.samples) {
    out += fmt(s.t) + "," + fmt(s.dt);
    for (int l = 0; l <= rec.k; ++l) out += "," + fmt(s.hk[l]);
    out += "," + fmt(s.p_l2) + "," + fmt(s.p_hkm1) + "," + fmt(s.pperp_hkm1) + "," +
           fmt(s.energy_q) + "," + fmt(s.identity_residual) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot open output file: " + path);
  f << content;
}

std::string manifest_json(const std::string& system_id, const nlohmann::json& parameters,
                          std::uint64_t seed, const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["schema"] = 1;
  j["system"] = system_id;
  j["parameters"] = parameters;
  j["seed"] = seed;
  j["code_version"] = code_version();
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

std::string structural_report_json(const std::string& system, const SampleSet& samples,
                                   const StructuralConstants& c,
                                   const ResidualReport& residuals, const GateResult& gate,
                                   double zeta_value) {
  nlohmann::json j;
  j["schema"] = 1;
  j["system"] = system;
  j["samples"] = {{"count", samples.t.size()},
                  {"seed", samples.seed},
                  {"t_range", {samples.t.empty() ? 0.0 : samples.t.front(),
                               samples.t.empty() ? 0.0 : samples.t.back()}}};
  j["constants"] = {{"kappa", c.kappa},
                    {"gamma1", c.gamma1},
                    {"gamma2", c.gamma2},
                    {"kappa_tilde", c.kappa_tilde},
                    {"gamma1_tilde", c.gamma1_tilde},
                    {"lambda1", c.lambda1},
                    {"lambda2", c.lambda2},
                    {"lambda3", c.lambda3},
                    {"alpha", c.alpha},
                    {"beta", {c.beta[0], c.beta[1], c.beta[2], c.beta[3], c.beta[4],
                              c.beta[5], c.beta[6], c.beta[7]}},
                    {"theta", c.theta},
                    {"b", c.b_const},
                    {"b_tilde", c.b_tilde},
                    {"sigma", c.sigma_loss},
                    {"k_reg", c.k_reg},
                    {"p", c.p_exponent}};
  j["residuals"] = {{"b0_symmetry", residuals.b0_symmetry},
                    {"b1_symmetry", residuals.b1_symmetry},
                    {"bc_commutator", residuals.bc_commutator},
                    {"b0_posdef_margin", residuals.b0_posdef_margin}};
  j["kappa_gate"] = {{"pass", gate.pass}, {"lhs", gate.lhs}, {"rhs", gate.rhs}};
  j["zeta"] = zeta_value;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : residuals.violations)
    j["violations"].push_back({{"index", v.index}, {"what", v.what}, {"magnitude", v.magnitude}});
  return j.dump(2) + "\n";
}

}  // namespace lab
}  // namespace fuchsol
