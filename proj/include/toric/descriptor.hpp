#pragma once

// JSON family descriptors and run manifests.
//
//   {
//     "name": "X(0.3, 0.5)",
//     "variant": "flat-quotient",
//     "params": {"alpha": 0.3, "sigma": 0.5},
//     "chart": "cartesian",
//     "domain": {"u": [0.5, 5], "v": [-3, 3]},
//     "grid": [50, 50],
//     "tolerances": {"flatness": 1e-9}
//   }
//
// Variants: flat-r4, flat-quotient (alpha or alpha_p/alpha_q, sigma),
// special-kasner, glued (sigma, tau, r_min, r_max, schedule), nogap
// (epsilon, r0). Any toric variant accepts "perturbation".

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "toric/catalog.hpp"

namespace toric {

struct Tolerances {
  double flatness = 1e-9;
  double ricci = 1e-8;
  double type = 0.0;  // 0 selects the default relative tolerance
};

struct FamilyDescriptor {
  std::string name;
  ModelEnd end;
  ChartTag chart = ChartTag::CartesianHalfPlane;
  BaseDomain domain;  // finite box sampled by grid commands
  int nu = 50;
  int nv = 50;
  Tolerances tol;
  std::vector<std::pair<double, double>> schedule;  // glued (sigma_k, tau_k)
};

/// Default descriptor per variant, with a finite sampling box inside the domain.
FamilyDescriptor default_descriptor(const ModelEnd& end);

/// Throws Config on malformed or inconsistent input.
FamilyDescriptor parse_descriptor(const nlohmann::json& j);
FamilyDescriptor load_descriptor(const std::string& path);
nlohmann::ordered_json descriptor_json(const FamilyDescriptor& d);

/// Interior grid: nu x nv points strictly inside the box, cell-centred.
std::vector<std::pair<double, double>> interior_grid(const FamilyDescriptor& d);

struct RunManifest {
  std::string command;
  std::string descriptor_hash;  // FNV-1a 64 of the canonical descriptor JSON, hex
  int nu = 0;
  int nv = 0;
  std::uint64_t seed = 0;
  std::string tool_version;
};

inline constexpr const char* kToolVersion = "0.1.0";

std::string fnv1a_hex(const std::string& s);
RunManifest make_manifest(const std::string& command, const FamilyDescriptor& d, std::uint64_t seed = 0);
nlohmann::ordered_json manifest_json(const RunManifest& m);

}  // namespace toric
