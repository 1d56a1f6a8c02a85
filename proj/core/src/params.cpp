#include "kanlab/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kanlab/heteroclinic.hpp"

namespace kanlab {

void SystemParams::require_certified() const {
  if (!certified())
    throw std::runtime_error(
        "params record carries no passing certificate; run certify first");
}

void SystemParams::require_r() const {
  if (!r)
    throw std::runtime_error(
        "params record lacks the heteroclinic point r (run the heteroclinic "
        "search); required for the perturbed map");
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::map<std::string, std::string> SystemParams::to_kv() const {
  std::map<std::string, std::string> kv;
  kv["params.preset"] = preset;
  kv["params.delta"] = fmt(delta);
  kv["params.beta"] = fmt(beta);
  kv["params.k"] = fmt(k);
  kv["params.ell"] = fmt(ell);
  kv["params.eps"] = fmt(eps);
  kv["params.n0"] = std::to_string(n0);
  kv["params.n1"] = std::to_string(n1);
  kv["params.margin_rho"] = fmt(margin_rho);
  kv["params.tau1"] = fmt(tau1);
  kv["params.tau3"] = fmt(tau3);
  kv["params.tau4"] = fmt(tau4);
  return kv;
}

SystemParams SystemParams::from_kv(
    const std::map<std::string, std::string>& kv) {
  SystemParams p;
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  if (auto v = get("params.preset")) p = preset_by_name(*v);
  auto setd = [&](const char* key, double& field) {
    if (auto v = get(key)) field = std::stod(*v);
  };
  auto seti = [&](const char* key, int& field) {
    if (auto v = get(key)) field = std::stoi(*v);
  };
  setd("params.delta", p.delta);
  setd("params.beta", p.beta);
  setd("params.k", p.k);
  setd("params.ell", p.ell);
  setd("params.eps", p.eps);
  seti("params.n0", p.n0);
  seti("params.n1", p.n1);
  setd("params.margin_rho", p.margin_rho);
  setd("params.tau1", p.tau1);
  setd("params.tau3", p.tau3);
  setd("params.tau4", p.tau4);
  derive_geometry(p, /*skip_r=*/false);
  return p;
}

void derive_geometry(SystemParams& p, bool skip_r) {
  auto cands = fixed_points(p.n0);
  p.anchors = select_anchors(cands, p.delta, EigenFrame::standard());
  if (!skip_r) {
    HeteroclinicQuery q;
    q.q1 = p.anchors.q1;
    q.q2 = p.anchors.q2;
    q.anchors = {p.anchors.p1, p.anchors.p2, p.anchors.q1, p.anchors.q2};
    q.n1 = p.n1;
    q.eps = p.eps;
    q.delta = p.delta;
    p.r = heteroclinic_point(q).r;
  }
}

SystemParams paper_preset() {
  SystemParams p;
  p.preset = "paper";
  p.delta = 1e-4;
  p.beta = 5e-9;         // delta/2 * 1e-4
  p.n0 = 11;             // sigma0 ~ 3.96e4 >= 1e4 * max{3/2, 2}
  p.n1 = 33;             // multiple of n0 with sigma1 >= 1e4 * derivative sup
  p.k = 3.2e8;           // 3 delta / (2k) < beta * 1e-4, strict margin
  p.eps = 1e-2;
  p.ell = 3.5e5;         // C1 perturbation budget at slack 1e4
  p.margin_rho = 10000.0;
  p.tau1 = 1.0;
  p.tau3 = 2.0e6;
  p.tau4 = 1.0e6;
  derive_geometry(p, /*skip_r=*/true);  // r on demand; search is exact-arith
  return p;
}

SystemParams desk_preset() {
  SystemParams p;
  p.preset = "desk";
  p.delta = 0.03;
  p.beta = 0.0075;       // delta/(2 rho)
  p.n0 = 2;              // sigma0 = 6.854 >= rho * 2
  p.n1 = 6;              // multiple of n0, sigma1 = 322 >= rho * derivative sup
  p.k = 13;              // 3 delta/(2k) < beta/rho with positive margin
  p.eps = 0.08;          // largest clearance the heteroclinic point admits
  p.ell = 69;            // minimal subject to the C1 budget at slack rho
  p.margin_rho = 2.0;
  p.tau1 = 1.0;
  p.tau3 = 400.0;
  p.tau4 = 500.0;
  derive_geometry(p, /*skip_r=*/false);
  return p;
}

SystemParams preset_by_name(const std::string& name) {
  if (name == "paper") return paper_preset();
  if (name == "desk") return desk_preset();
  throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace kanlab
