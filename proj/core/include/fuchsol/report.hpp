#ifndef FUCHSOL_REPORT_HPP
#define FUCHSOL_REPORT_HPP

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "fuchsol/integrator.hpp"
#include "fuchsol/structural.hpp"

namespace fuchsol {
namespace lab {

// RunRecord as CSV: t, dt, L2, H1, ..., Hk, P_L2, P_Hk1, Pperp_Hk1,
// energy_Q, identity_residual. Fixed %.17g formatting (byte reproducible).
std::string record_to_csv(const RunRecord& rec);
void write_file(const std::string& path, const std::string& content);

struct RunManifest {
  std::string system_id;
  nlohmann::json* parameters = nullptr;  // borrowed; serialized by to_json
  std::uint64_t seed = 0;
  std::string code_version;
  std::vector<std::string> outputs;
};

std::string manifest_json(const std::string& system_id, const nlohmann::json& parameters,
                          std::uint64_t seed, const std::vector<std::string>& outputs);

// Structural report: {system, samples, constants, violations[]}
std::string structural_report_json(const std::string& system, const SampleSet& samples,
                                   const StructuralConstants& constants,
                                   const ResidualReport& residuals, const GateResult& gate,
                                   double zeta_value);

std::string code_version();

}  // namespace lab
}  // namespace fuchsol

#endif
