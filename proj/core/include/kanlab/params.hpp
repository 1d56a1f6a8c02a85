#ifndef KANLAB_PARAMS_HPP
#define KANLAB_PARAMS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "kanlab/geometry.hpp"

namespace kanlab {

// Full parameter record of the construction. A record is usable by the
// experiment layer only after certify_params has stamped certificate_hash.
struct SystemParams {
  std::string preset;  // "paper", "desk", or "custom"

  double delta = 0;   // bump support scale
  double beta = 0;    // contraction window scale
  double k = 0;       // P bump scale
  double ell = 0;     // R bump scale (perturbation)
  double eps = 0;     // heteroclinic clearance / perturbation budget
  int n0 = 0;         // z-factor automorphism power (A^{n0})
  int n1 = 0;         // x-factor automorphism power (A^{n1})
  double margin_rho = 2.0;  // slack factor; the paper preset pins 10000

  AnchorSet anchors;
  std::optional<TorusPoint> r;  // heteroclinic point, required for ftilde

  // Certified cone apertures (reported by the aperture search; no claim of
  // optimality).
  double tau1 = 1.0;
  double tau3 = 0;
  double tau4 = 0;

  std::uint64_t certificate_hash = 0;  // 0 = uncertified

  // Derived quantities.
  double sigma0() const { return cat_power(n0).sigma; }
  double sigma1() const { return cat_power(n1).sigma; }
  bool certified() const { return certificate_hash != 0; }

  void require_certified() const;
  void require_r() const;

  // Key/value view used by the config round-trip.
  std::map<std::string, std::string> to_kv() const;
  static SystemParams from_kv(const std::map<std::string, std::string>& kv);
};

// Conservative constants: delta = 1e-4 and every slack factor at 10000.
// Formula-level checks only; the bump regions are invisible to
// double-precision Monte Carlo (area ~ 4e-8).
SystemParams paper_preset();

// Desk constants: every structural inequality re-verified with honest
// margins (rho = 2) at scales where the dynamics is observable.
SystemParams desk_preset();

SystemParams preset_by_name(const std::string& name);

// Fills anchors (and r unless skip_r) from the other fields.
void derive_geometry(SystemParams& p, bool skip_r = false);

}  // namespace kanlab

#endif  // KANLAB_PARAMS_HPP
