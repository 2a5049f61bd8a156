#include "enso/params.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace enso {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void PhysicalParams::validate() const {
  require(alpha > 0.0 && r > 0.0 && mu > 0.0, "physical params: rates must be positive");
  require(H > 0.0 && z0 > 0.0 && h_star > 0.0, "physical params: depths must be positive");
  require(epsilon > 0.0 && zeta > 0.0, "physical params: efficiencies must be positive");
  require(bL_over_beta > 0.0, "physical params: bL/beta group must be positive");
  require(T_r > T_r0, "physical params: T_r must exceed T_r0");
}

void DimensionlessParams::validate() const {
  require(delta > 0.0, "dimensionless params: delta must be positive");
  require(rho > 0.0, "dimensionless params: rho must be positive");
  require(a > 0.0, "dimensionless params: a must be positive");
  require(c > 0.0, "dimensionless params: c must be positive");
  // k may be any finite real; the thermocline offset can in principle vanish.
}

NondimResult nondimensionalize(const PhysicalParams& p) {
  p.validate();
  NondimResult out;
  const double bl = p.bL_over_beta;
  out.scales.S0 = p.h_star / (bl * p.mu);
  out.scales.T0 = out.scales.S0;
  out.scales.h0 = p.h_star;
  out.scales.t0_days = bl / (p.zeta * p.h_star);
  out.params.delta = p.r * bl / (p.zeta * p.h_star);
  out.params.rho = p.epsilon * p.h_star / (p.r * bl);
  out.params.a = p.alpha * bl / (p.epsilon * p.h_star);
  out.params.c = (p.T_r - p.T_r0) / (2.0 * out.scales.S0);
  out.params.k = (p.H - p.z0) / p.h_star;
  out.params.validate();
  return out;
}

std::vector<std::string> preset_names() {
  return {"table1", "fig2a", "fig2b", "fig2c", "fig4", "fig6", "fig7"};
}

bool is_preset(const std::string& name) {
  for (const auto& n : preset_names())
    if (n == name) return true;
  return false;
}

DimensionlessParams preset_params(const std::string& name) {
  if (name == "table1") return nondimensionalize(PhysicalParams{}).params;
  if (name == "fig2a") return {0.01, 0.5, 2.75, 3.75, 0.34};
  if (name == "fig2b") return {0.1, 0.35, 2.75, 3.75, 0.35};
  if (name == "fig2c") return {0.2, 0.25, 2.75, 3.75, 0.34};
  if (name == "fig4") return {0.1, 0.5, 2.55, 3.75, 0.34};
  if (name == "fig6") return {0.005, 0.5, 2.55, 3.75, 0.34};
  if (name == "fig7") return {0.3, 0.5, 2.55, 3.75, 0.34};
  throw std::invalid_argument("unknown preset: " + name);
}

namespace {

void assign_key(DimensionlessParams& q, const std::string& key,
                const std::string& value) {
  double parsed = 0.0;
  std::size_t used = 0;
  try {
    parsed = std::stod(value, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed value for '" + key + "': " + value);
  }
  // Allow trailing whitespace only.
  for (std::size_t i = used; i < value.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(value[i])))
      throw std::invalid_argument("malformed value for '" + key + "': " + value);
  }
  if (key == "delta") q.delta = parsed;
  else if (key == "rho") q.rho = parsed;
  else if (key == "a") q.a = parsed;
  else if (key == "c") q.c = parsed;
  else if (key == "k") q.k = parsed;
  else throw std::invalid_argument("unknown parameter key: " + key);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

void parse_pair(DimensionlessParams& q, const std::string& pair) {
  const auto eq = pair.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("expected key=value, got: " + pair);
  assign_key(q, trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
}

}  // namespace

DimensionlessParams parse_params(const std::string& spec) {
  DimensionlessParams q;
  std::stringstream ss(spec);
  std::string pair;
  bool any = false;
  while (std::getline(ss, pair, ',')) {
    pair = trim(pair);
    if (pair.empty()) continue;
    parse_pair(q, pair);
    any = true;
  }
  if (!any) throw std::invalid_argument("empty parameter specification");
  q.validate();
  return q;
}

DimensionlessParams load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open parameter file: " + path);
  DimensionlessParams q;
  std::string line;
  bool any = false;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    parse_pair(q, line);
    any = true;
  }
  if (!any)
    throw std::invalid_argument("parameter file has no key=value pairs: " + path);
  q.validate();
  return q;
}

}  // namespace enso
