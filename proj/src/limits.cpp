#include "qlab/limits.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qlab {

namespace {

double lg(double v, const char* what) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
  return std::log10(v);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ConstantsProfile ConstantsProfile::paper_oom() {
  return {"paper-oom", 1e-34, 1e8, 1e-10, 1e-35, 1e27, 1e53};
}

ConstantsProfile ConstantsProfile::precise() {
  // Observable-universe radius 4.4e26 m and ordinary-matter mass 1.5e53 kg.
  return {"precise", 1.054571817e-34, 299792458.0, 6.67430e-11, 1.616255e-35, 4.4e26, 1.5e53};
}

ConstantsProfile ConstantsProfile::named(const std::string& name) {
  if (name == "paper-oom") {
    return paper_oom();
  }
  if (name == "precise") {
    return precise();
  }
  throw std::invalid_argument("unknown constants profile '" + name + "' (expected paper-oom or precise)");
}

double ConstantsProfile::derived_planck_length() const { return std::sqrt(hbar * G / (c * c * c)); }

ConstantsProfile parse_constants(const std::string& text) {
  std::map<std::string, double> values;
  std::string name = "custom";
  std::string base = "paper-oom";
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("constants line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "name") {
      name = value;
      continue;
    }
    if (key == "base") {
      base = value;
      continue;
    }
    static const char* kKeys[] = {"hbar", "c", "G", "planck_length", "universe_radius", "universe_mass"};
    bool known = false;
    for (const char* k : kKeys) {
      known = known || key == k;
    }
    if (!known) {
      throw std::invalid_argument("constants line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty() || !(v > 0.0)) {
      throw std::invalid_argument("constants line " + std::to_string(lineno) + ": '" + value +
                                  "' is not a positive number");
    }
    values[key] = v;
  }
  ConstantsProfile k = ConstantsProfile::named(base);
  k.name = name;
  for (const auto& [key, v] : values) {
    if (key == "hbar") k.hbar = v;
    else if (key == "c") k.c = v;
    else if (key == "G") k.G = v;
    else if (key == "planck_length") k.planck_length = v;
    else if (key == "universe_radius") k.universe_radius = v;
    else if (key == "universe_mass") k.universe_mass = v;
  }
  return k;
}

ConstantsProfile load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open constants file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_constants(buffer.str());
}

ApparatusScenario ApparatusScenario::laboratory() { return {"laboratory", 1.0, 1.0, 1.0}; }

ApparatusScenario ApparatusScenario::universe(const ConstantsProfile& k) {
  return {"universe", k.universe_mass, k.universe_radius, 1.0};
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::sql: return "sql";
    case Regime::causal: return "causal";
    case Regime::planck: return "planck";
  }
  return "?";
}

const char* to_string(Criterion c) { return c == Criterion::sqrt ? "sqrt" : "linear"; }

Magnitude sql_angle(const ApparatusScenario& sc, const ConstantsProfile& k) {
  if (!sc.time) {
    throw std::invalid_argument("standard-quantum-limit bound needs an interaction time");
  }
  return {0.5 * (lg(k.hbar, "hbar") + lg(*sc.time, "time") - lg(sc.mass, "mass")) - lg(sc.size, "size")};
}

Magnitude causal_angle(const ApparatusScenario& sc, const ConstantsProfile& k) {
  return {0.5 * (lg(k.hbar, "hbar") - lg(k.c, "c") - lg(sc.mass, "mass") - lg(sc.size, "size"))};
}

Magnitude planck_angle(const ApparatusScenario& sc, const ConstantsProfile& k) {
  return {lg(k.planck_length, "planck_length") - lg(sc.size, "size")};
}

Magnitude angle_bound(const ApparatusScenario& sc, const ConstantsProfile& k, Regime regime) {
  switch (regime) {
    case Regime::sql: return sql_angle(sc, k);
    case Regime::causal: return causal_angle(sc, k);
    case Regime::planck: return planck_angle(sc, k);
  }
  throw std::invalid_argument("unknown regime");
}

Magnitude max_spin(const ApparatusScenario& sc, const ConstantsProfile& k, Regime regime, Criterion criterion) {
  const Magnitude angle = angle_bound(sc, k, regime);
  return {criterion == Criterion::sqrt ? -2.0 * angle.log10 : -angle.log10};
}

Magnitude schwarzschild_radius(double mass, const ConstantsProfile& k) {
  return {std::log10(2.0) + lg(k.G, "G") + lg(mass, "mass") - 2.0 * lg(k.c, "c")};
}

std::vector<LimitRow> scenario_report(const std::vector<ApparatusScenario>& scenarios, const ConstantsProfile& k) {
  std::vector<LimitRow> rows;
  for (const auto& sc : scenarios) {
    for (Regime regime : {Regime::sql, Regime::causal, Regime::planck}) {
      if (regime == Regime::sql && !sc.time) {
        continue;
      }
      const Magnitude angle = angle_bound(sc, k, regime);
      for (Criterion criterion : {Criterion::sqrt, Criterion::linear}) {
        rows.push_back({sc.label, regime, criterion, angle.log10, max_spin(sc, k, regime, criterion).log10,
                        schwarzschild_radius(sc.mass, k).log10});
      }
    }
  }
  return rows;
}

}  // namespace qlab
