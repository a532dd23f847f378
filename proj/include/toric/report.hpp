#pragma once

// Bit-stable serialization: shortest round-trip decimals, fixed column order,
// LF line endings.

#include <filesystem>
#include <ostream>
#include <string>

#include <json.hpp>

#include "toric/catalog.hpp"
#include "toric/constructions.hpp"
#include "toric/obstruction.hpp"

namespace toric {

/// Shortest decimal that parses back to the same double; "nan", "inf", "-inf".
std::string format_double(double x);

/// Columns r, theta, rm_norm, covering_radius.
void write_sweep_csv(std::ostream& os, const SweepReport& rep);
nlohmann::ordered_json sweep_summary_json(const SweepReport& rep);

nlohmann::ordered_json diagnostics_json(const DiagnosticsReport& rep);
nlohmann::ordered_json certificate_json(const LHospitalCertificate& cert);

/// One whitespace-separated (rho, value) file per indicator, named
/// indicator_<label>.dat. Returns the number of files written.
int write_indicator_plots(const std::filesystem::path& dir, const DiagnosticsReport& rep);

void write_cone_csv(std::ostream& os, const ConeProbe& probe);

/// Pretty-printed JSON with a trailing LF.
std::string dump(const nlohmann::ordered_json& j);

}  // namespace toric
