// qlab command-line front end. Every result goes through the C API.

#include "qlab/qlab.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
  qlab_status status;
  ApiError(qlab_status st, const std::string& what) : std::runtime_error(what), status(st) {}
};

void check(qlab_status st) {
  if (st != QLAB_OK) {
    throw ApiError(st, qlab_last_error());
  }
}

struct StateDeleter {
  void operator()(qlab_state* s) const { qlab_state_free(s); }
};
struct ReportDeleter {
  void operator()(qlab_limit_report* r) const { qlab_limit_report_free(r); }
};
struct TableDeleter {
  void operator()(qlab_qtable* t) const { qlab_qtable_free(t); }
};
using StatePtr = std::unique_ptr<qlab_state, StateDeleter>;

struct Config {
  std::string command;
  int spin = 1;  // 2s
  double oversample = 1.0;
  std::string state = "singlet";
  std::string state_file;
  std::string kind = "sharp-sign";
  std::string bands = "2";
  std::string spins = "4,16,36";
  int resolution = 72;
  std::string zero_rule = "plus";
  bool full_sphere = false;
  std::string output;
  std::string format = "csv";
  unsigned long long seed = 0;
  std::string profile = "paper-oom";
  std::string constants;
  bool single = false;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

std::vector<int> parse_int_list(const std::string& text, const char* field) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) {
      continue;
    }
    const auto e = item.find_last_not_of(" \t");
    item = item.substr(b, e - b + 1);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) {
      throw UsageError(std::string(field) + ": '" + item + "' is not an integer");
    }
    out.push_back(v);
  }
  return out;
}

// Key/value pairs echoed into the header, in a fixed order per command.
using Echo = std::vector<std::pair<std::string, std::string>>;

Echo echo(const Config& c) {
  Echo e;
  auto add = [&](const char* k, std::string v) { e.emplace_back(k, std::move(v)); };
  if (c.command == "limits") {
    add("profile", c.profile);
    add("constants", c.constants);
  } else if (c.command == "chsh") {
    add("spin", std::to_string(c.spin));
    add("state", c.state);
    if (c.state == "file") add("state-file", c.state_file);
    if (c.state == "random") add("seed", std::to_string(c.seed));
    add("kind", c.kind);
    if (c.kind == "slot-coarse") add("bands", c.bands);
    if (c.kind == "sharp-sign") add("zero-rule", c.zero_rule);
    add("oversample", num(c.oversample));
    add("resolution", std::to_string(c.resolution));
    add("full-sphere", c.full_sphere ? "true" : "false");
  } else if (c.command == "classicality") {
    if (c.state == "file") {
      add("state-file", c.state_file);
    } else {
      add("spins", c.spins);
    }
    add("state", c.state);
    if (c.state == "random") add("seed", std::to_string(c.seed));
    add("bands", c.bands);
    add("oversample", num(c.oversample));
  } else {
    add("spin", std::to_string(c.spin));
    add("state", c.state);
    if (c.state == "file") add("state-file", c.state_file);
    if (c.state == "random") add("seed", std::to_string(c.seed));
    add("oversample", num(c.oversample));
    add("single", c.single ? "true" : "false");
  }
  add("format", c.format);
  return e;
}

// A finished table: header metadata, column names, rows of cells, footer.
struct Table {
  Echo meta;  // after version and config: constants, grid degree
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<bool> numeric;  // per column
  Echo footer;
};

std::string render_csv(const Config& c, const Table& t) {
  std::ostringstream out;
  out << "# qlab " << qlab_version() << '\n';
  out << "# command: " << c.command << '\n';
  for (const auto& [k, v] : echo(c)) {
    out << "# config " << k << " = " << v << '\n';
  }
  for (const auto& [k, v] : t.meta) {
    out << "# " << k << ": " << v << '\n';
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    out << (i ? "," : "") << t.columns[i];
  }
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << row[i];
    }
    out << '\n';
  }
  for (const auto& [k, v] : t.footer) {
    out << "# " << k << ": " << v << '\n';
  }
  return out.str();
}

nlohmann::ordered_json cell(const std::string& v, bool numeric) {
  if (numeric) {
    return std::stod(v);
  }
  return v;
}

std::string render_json(const Config& c, const Table& t) {
  nlohmann::ordered_json doc;
  doc["tool"] = std::string("qlab ") + qlab_version();
  doc["command"] = c.command;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : echo(c)) {
    cfg[k] = v;
  }
  doc["config"] = cfg;
  for (const auto& [k, v] : t.meta) {
    doc[k] = v;
  }
  doc["columns"] = t.columns;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      r[t.columns[i]] = cell(row[i], t.numeric[i]);
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  for (const auto& [k, v] : t.footer) {
    doc[k] = v;
  }
  return doc.dump(2) + "\n";
}

void validate(const Config& c) {
  auto fail = [](const std::string& m) { throw UsageError(m); };
  auto one_of = [&](const std::string& v, std::initializer_list<const char*> ok, const char* field) {
    for (const char* k : ok) {
      if (v == k) return;
    }
    fail(std::string(field) + ": unsupported value '" + v + "'");
  };
  one_of(c.format, {"csv", "json"}, "--format");
  if (c.command == "limits") {
    one_of(c.profile, {"paper-oom", "precise"}, "--profile");
    return;
  }
  one_of(c.state, {"singlet", "macro-entangled", "product", "random", "file"}, "--state");
  if (c.state == "file" && c.state_file.empty()) fail("--state-file: required with --state file");
  if (c.state != "file" && !c.state_file.empty()) fail("--state-file: only valid with --state file");
  if (!(c.oversample >= 1.0)) fail("--oversample: must be at least 1");
  if (c.command != "classicality" && c.spin < 0) fail("--spin: 2s must be non-negative");
  if (c.command != "classicality" && c.state == "macro-entangled" && c.spin < 1) {
    fail("--spin: macro-entangled state needs 2s >= 1");
  }
  if (c.single && c.command != "qdist") fail("--single: only valid for qdist");
  if (c.command == "chsh") {
    one_of(c.kind, {"sharp-sign", "slot-coarse", "cat-hemisphere"}, "--kind");
    one_of(c.zero_rule, {"plus", "minus"}, "--zero-rule");
    if (c.resolution < 2) fail("--resolution: must be at least 2");
    const auto bands = parse_int_list(c.bands, "--bands");
    if (bands.size() != 1 || bands[0] < 2) fail("--bands: chsh takes a single band count >= 2");
    if (c.kind == "cat-hemisphere" && c.spin < 1) fail("--spin: cat-hemisphere needs 2s >= 1");
  }
  if (c.command == "classicality") {
    for (int b : parse_int_list(c.bands, "--bands")) {
      if (b < 2) fail("--bands: every band count must be at least 2");
    }
    for (int s : parse_int_list(c.spins, "--spins")) {
      if (s < 1) fail("--spins: every 2s must be at least 1");
    }
  }
}

StatePtr make_state(const Config& c, int two_s) {
  qlab_state* raw = nullptr;
  if (c.state == "singlet") {
    check(qlab_state_singlet(two_s, &raw));
  } else if (c.state == "macro-entangled") {
    check(qlab_state_macro_entangled(two_s, &raw));
  } else if (c.state == "product") {
    // Spin A along +z, spin B along +x.
    check(qlab_state_product(two_s, 0.0, 0.0, M_PI / 2, 0.0, &raw));
  } else if (c.state == "random") {
    check(qlab_state_random(two_s, c.seed, &raw));
  } else {
    qlab_status st = qlab_state_load(c.state_file.c_str(), &raw);
    if (st == QLAB_ERROR_INVALID_ARGUMENT || st == QLAB_ERROR_IO) {
      throw UsageError(std::string("--state-file: ") + qlab_last_error());
    }
    check(st);
  }
  return StatePtr(raw);
}

Table run_limits(const Config& c) {
  qlab_constants k{};
  if (!c.constants.empty()) {
    qlab_status st = qlab_constants_load(c.constants.c_str(), &k);
    if (st != QLAB_OK) {
      throw UsageError(std::string("--constants: ") + qlab_last_error());
    }
  } else {
    check(qlab_constants_profile(c.profile.c_str(), &k));
  }
  qlab_scenario sc[2];
  check(qlab_standard_scenario(0, &k, &sc[0]));
  check(qlab_standard_scenario(1, &k, &sc[1]));
  qlab_limit_report* raw = nullptr;
  check(qlab_limits_report(sc, 2, &k, &raw));
  std::unique_ptr<qlab_limit_report, ReportDeleter> report(raw);

  Table t;
  t.meta = {{"constants", k.name},
            {"hbar", num(k.hbar)},
            {"c", num(k.c)},
            {"G", num(k.G)},
            {"planck_length", num(k.planck_length)},
            {"universe_radius", num(k.universe_radius)},
            {"universe_mass", num(k.universe_mass)},
            {"grid degree", "none"}};
  t.columns = {"scenario", "regime", "criterion", "log10_angle", "log10_max_spin", "log10_schwarzschild_radius"};
  t.numeric = {false, false, false, true, true, true};
  for (size_t i = 0; i < qlab_limit_report_size(report.get()); ++i) {
    qlab_limit_row r{};
    check(qlab_limit_report_row(report.get(), i, &r));
    t.rows.push_back({r.scenario, qlab_regime_name(r.regime), qlab_criterion_name(r.criterion), num(r.log10_angle),
                      num(r.log10_spin), num(r.log10_schwarzschild)});
  }
  return t;
}

Table run_chsh(const Config& c) {
  StatePtr state = make_state(c, c.spin);
  const int two_s = qlab_state_two_s(state.get());
  qlab_chsh_options o;
  qlab_chsh_options_default(&o);
  o.kind = c.kind == "sharp-sign" ? QLAB_KIND_SHARP_SIGN
           : c.kind == "slot-coarse" ? QLAB_KIND_SLOT_COARSE
                                     : QLAB_KIND_CAT_HEMISPHERE;
  o.n_bands = c.kind == "cat-hemisphere" ? 2 : parse_int_list(c.bands, "--bands")[0];
  o.zero_minus = c.zero_rule == "minus";
  o.oversample = c.oversample;
  o.resolution = c.resolution;
  o.full_sphere = c.full_sphere;
  qlab_chsh_result r{};
  check(qlab_chsh_scan(state.get(), &o, &r));

  std::string degree = "none";
  if (o.kind != QLAB_KIND_SHARP_SIGN) {
    int d = 0;
    check(qlab_grid_degree(two_s, o.n_bands, o.oversample, &d));
    degree = std::to_string(d);
  }
  Table t;
  t.meta = {{"constants", "none"}, {"grid degree", degree}};
  t.columns = {"S", "E_ab", "E_ab'", "E_a'b", "E_a'b'"};
  static const char* kNames[] = {"a", "a'", "b", "b'"};
  for (const char* n : kNames) {
    t.columns.push_back(std::string("theta_") + n);
    t.columns.push_back(std::string("phi_") + n);
    t.columns.push_back(std::string("cat_") + n);
  }
  std::vector<std::string> row = {num(r.S), num(r.correlation[0]), num(r.correlation[1]), num(r.correlation[2]),
                                  num(r.correlation[3])};
  for (int i = 0; i < 4; ++i) {
    row.push_back(num(r.theta[i]));
    row.push_back(num(r.phi[i]));
    row.push_back(num(r.cat_angle[i]));
  }
  t.rows.push_back(std::move(row));
  t.numeric.assign(t.columns.size(), true);
  return t;
}

Table run_classicality(const Config& c) {
  const std::vector<int> bands = parse_int_list(c.bands, "--bands");
  std::vector<int> spins;
  if (c.state == "file") {
    spins.push_back(-1);
  } else {
    spins = parse_int_list(c.spins, "--spins");
  }
  Table t;
  t.columns = {"two_s", "s", "n_bands", "width", "width_sqrt_s", "epsilon", "marginal_residual", "skipped_outcomes",
               "grid_degree"};
  t.numeric.assign(t.columns.size(), true);
  std::string degrees;
  for (int two_s : spins) {
    StatePtr state = make_state(c, two_s);
    for (int n : bands) {
      qlab_classicality_row r{};
      check(qlab_classicality(state.get(), n, c.oversample, &r));
      t.rows.push_back({std::to_string(r.two_s), num(0.5 * r.two_s), std::to_string(r.n_bands), num(r.width),
                        num(r.width_sqrt_s), num(r.epsilon), num(r.marginal_residual),
                        std::to_string(r.skipped_outcomes), std::to_string(r.grid_degree)});
      degrees += (degrees.empty() ? "" : ",") + std::to_string(r.grid_degree);
    }
  }
  t.meta = {{"constants", "none"}, {"grid degree", degrees.empty() ? "none" : "per row (" + degrees + ")"}};
  return t;
}

Table run_qdist(const Config& c) {
  StatePtr state = make_state(c, c.spin);
  qlab_qtable* raw = nullptr;
  if (c.single) {
    check(qlab_qdist_single(state.get(), 0, c.oversample, &raw));
  } else {
    check(qlab_qdist_joint(state.get(), c.oversample, &raw));
  }
  std::unique_ptr<qlab_qtable, TableDeleter> table(raw);
  Table t;
  t.meta = {{"constants", "none"}, {"grid degree", std::to_string(qlab_qtable_grid_degree(table.get()))}};
  if (c.single) {
    t.columns = {"theta", "phi", "Q"};
  } else {
    t.columns = {"theta_A", "phi_A", "theta_B", "phi_B", "Q"};
  }
  t.numeric.assign(t.columns.size(), true);
  const size_t n = qlab_qtable_rows(table.get());
  t.rows.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    qlab_qrow r{};
    check(qlab_qtable_row(table.get(), i, &r));
    if (c.single) {
      t.rows.push_back({num(r.theta_a), num(r.phi_a), num(r.q)});
    } else {
      t.rows.push_back({num(r.theta_a), num(r.phi_a), num(r.theta_b), num(r.phi_b), num(r.q)});
    }
  }
  t.footer.emplace_back("normalization", num(qlab_qtable_normalization(table.get())));
  if (!c.single) {
    double residual = 0.0;
    check(qlab_qtable_factorization_residual(table.get(), &residual));
    t.footer.emplace_back("factorization residual", num(residual));
    t.footer.emplace_back("factorization", residual < 1e-10 ? "pass" : "fail");
  }
  return t;
}

void add_common(CLI::App& app, Config& c) {
  app.add_option("--spin", c.spin, "spin length as 2s (e.g. 1 for s = 1/2)");
  app.add_option("--oversample", c.oversample, "quadrature grid oversampling factor (>= 1)");
  app.add_option("--state", c.state, "singlet | macro-entangled | product | random | file");
  app.add_option("--state-file", c.state_file, "JSON state file for --state file");
  app.add_option("--seed", c.seed, "seed for --state random");
  app.add_option("-o,--output", c.output, "output path (default: stdout)");
  app.add_option("--format", c.format, "csv | json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse-grained spin measurements, Bell tests and precision limits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("qlab ") + qlab_version());
  app.set_config("--config", "", "config file, same keys as the flags (flags win)");
  Config c;

  // Options live on the main app so a config file can use bare keys; the
  // subcommands fall through to them.
  add_common(app, c);
  app.add_option("--kind", c.kind, "sharp-sign | slot-coarse | cat-hemisphere");
  app.add_option("--bands", c.bands, "polar band count (classicality: comma list)");
  app.add_option("--spins", c.spins, "classicality sweep: comma list of 2s (empty for none)")
      ->expected(0, 1)
      ->default_str("");
  app.add_option("--resolution", c.resolution, "grid points per setting angle");
  app.add_option("--zero-rule", c.zero_rule, "sharp-sign, integer s: m = 0 maps to plus | minus");
  app.add_flag("--full-sphere", c.full_sphere, "refine setting azimuths as well");
  app.add_option("--profile", c.profile, "paper-oom | precise");
  app.add_option("--constants", c.constants, "constants file (key = value), overrides --profile");
  app.add_flag("--single", c.single, "qdist: single-party Q of spin A");
  app.fallthrough();

  app.add_subcommand("limits", "precision and spin-size bounds table")->fallthrough();
  app.add_subcommand("chsh", "maximize the CHSH value over measurement settings")->fallthrough();
  app.add_subcommand("classicality", "Q vs mixture deviation and marginal consistency sweep")->fallthrough();
  app.add_subcommand("qdist", "tabulate the Q-distribution of a state")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    validate(c);
    Table t;
    if (c.command == "limits") {
      t = run_limits(c);
    } else if (c.command == "chsh") {
      t = run_chsh(c);
    } else if (c.command == "classicality") {
      t = run_classicality(c);
    } else {
      t = run_qdist(c);
    }
    const std::string text = c.format == "json" ? render_json(c, t) : render_csv(c, t);
    if (c.output.empty()) {
      std::cout << text;
      std::cout.flush();
    } else {
      std::ofstream out(c.output, std::ios::binary);
      out << text;
      out.close();
      if (!out) {
        std::cerr << "qlab: --output: cannot write '" << c.output << "'\n";
        return kExitUsage;
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "qlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ApiError& e) {
    std::cerr << "qlab: " << e.what() << '\n';
    return e.status == QLAB_ERROR_INVALID_ARGUMENT ? kExitUsage : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "qlab: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
