#ifndef KANLAB_CERTIFY_HPP
#define KANLAB_CERTIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kanlab/params.hpp"

namespace kanlab {

struct CheckResult {
  std::string name;
  bool pass = false;
  double margin = 0;       // checked quantity minus its threshold
  std::string resolution;  // grid spec the check ran at
  double pad = 0;          // Lipschitz pad: continuum guarantee is margin-pad
  double value = 0;        // the checked quantity itself
};

struct CertificateReport {
  std::vector<CheckResult> checks;
  std::string preset;
  double margin_rho = 0;
  bool overall = false;
  std::uint64_t hash = 0;

  const CheckResult* find(const std::string& name) const;
  std::string to_json() const;
};

struct CertifyOptions {
  int grid_1d = 8192;       // 1-D kernel scans
  int grid_q = 200;         // per-axis, dQ/dc positivity over (a,b,c)
  int grid_p = 1201;        // per-axis, 2-D (d, s) grid for dP/dd bounds
  int quad_n = 20001;       // radial Simpson nodes for the symmetry integral
  bool with_cones = true;
  std::uint64_t cone_samples = 100000;
  int cone_directions = 64;
  std::uint64_t sandwich_orbits = 1000;
  int sandwich_steps = 20;
  std::uint64_t seed = 0x6b616e6c616221ULL;
};

// Grid-certifies every inequality of the construction: kernel shape, the
// well-definedness bounds, slack-factor conditions (paper 10000 or the
// preset's rho), anchor geometry, the symmetry integral, and the C1
// perturbation budget. Stamps params.certificate_hash on overall pass.
CertificateReport certify_params(SystemParams& params,
                                 const CertifyOptions& opts = {});

// certify_params plus cone invariance and growth sandwiches (the checks the
// experiment layer relies on). Stamps the hash on overall pass.
CertificateReport certify_system(SystemParams& params,
                                 const CertifyOptions& opts = {});

// Implementation route for the symmetry integral
// 2 * iint_{delta disk} log(1 - psi(sqrt(a^2+b^2))^2 / 4) da db
// (radial composite Simpson). The independent oracle lives in the tests.
double symmetry_integral(double delta, int nodes);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace kanlab

#endif  // KANLAB_CERTIFY_HPP
