#include "qlab/qlab.h"

#include "qlab/bell.hpp"
#include "qlab/error.hpp"
#include "qlab/experiments.hpp"
#include "qlab/husimi.hpp"
#include "qlab/limits.hpp"
#include "qlab/state_io.hpp"

#include <algorithm>
#include <cstring>
#include <ios>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

struct qlab_state {
  qlab::TwoSpinState state;
};

struct qlab_limit_report {
  std::vector<qlab::LimitRow> rows;
};

struct qlab_qtable {
  bool joint = false;
  int degree = 0;
  double normalization = 0.0;
  double residual = 0.0;
  qlab::GridPtr grid_a;
  qlab::GridPtr grid_b;
  qlab::RealMatrix values;  // joint: nodes_a x nodes_b; single: nodes x 1
};

namespace {

thread_local std::string g_last_error;

template <class F>
qlab_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return QLAB_OK;
  } catch (const qlab::NumericalError& e) {
    g_last_error = e.what();
    return QLAB_ERROR_NUMERICAL;
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return QLAB_ERROR_NUMERICAL;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return QLAB_ERROR_INVALID_ARGUMENT;
  } catch (const std::ios_base::failure& e) {
    g_last_error = e.what();
    return QLAB_ERROR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QLAB_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QLAB_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QLAB_ERROR_INTERNAL;
  }
}

void require(bool ok, const char* message) {
  if (!ok) {
    throw std::invalid_argument(message);
  }
}

void copy_name(char* dst, std::size_t cap, const std::string& src) {
  const std::size_t n = std::min(cap - 1, src.size());
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

qlab::ConstantsProfile to_profile(const qlab_constants* k) {
  require(k != nullptr, "constants must not be null");
  qlab::ConstantsProfile p;
  p.name = k->name;
  p.hbar = k->hbar;
  p.c = k->c;
  p.G = k->G;
  p.planck_length = k->planck_length;
  p.universe_radius = k->universe_radius;
  p.universe_mass = k->universe_mass;
  return p;
}

void from_profile(const qlab::ConstantsProfile& p, qlab_constants* out) {
  copy_name(out->name, sizeof(out->name), p.name);
  out->hbar = p.hbar;
  out->c = p.c;
  out->G = p.G;
  out->planck_length = p.planck_length;
  out->universe_radius = p.universe_radius;
  out->universe_mass = p.universe_mass;
}

qlab::ApparatusScenario to_scenario(const qlab_scenario* sc) {
  require(sc != nullptr, "scenario must not be null");
  qlab::ApparatusScenario a;
  a.label = sc->label ? sc->label : "";
  a.mass = sc->mass;
  a.size = sc->size;
  if (sc->has_time) {
    a.time = sc->time;
  }
  return a;
}

qlab::Regime to_regime(qlab_regime r) {
  switch (r) {
    case QLAB_REGIME_SQL: return qlab::Regime::sql;
    case QLAB_REGIME_CAUSAL: return qlab::Regime::causal;
    case QLAB_REGIME_PLANCK: return qlab::Regime::planck;
  }
  throw std::invalid_argument("unknown regime");
}

qlab::Criterion to_criterion(qlab_criterion c) {
  switch (c) {
    case QLAB_CRITERION_SQRT: return qlab::Criterion::sqrt;
    case QLAB_CRITERION_LINEAR: return qlab::Criterion::linear;
  }
  throw std::invalid_argument("unknown criterion");
}

// Label storage for standard scenarios handed out through qlab_scenario.
const char* const kLabels[] = {"laboratory", "universe"};

}  // namespace

extern "C" {

const char* qlab_version(void) { return "0.1.0"; }

const char* qlab_last_error(void) { return g_last_error.c_str(); }

const char* qlab_status_string(qlab_status status) {
  switch (status) {
    case QLAB_OK: return "ok";
    case QLAB_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case QLAB_ERROR_NUMERICAL: return "numerical failure";
    case QLAB_ERROR_IO: return "i/o error";
    case QLAB_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

qlab_status qlab_state_singlet(int two_s, qlab_state** out) {
  return guarded([&] {
    require(out != nullptr, "output handle must not be null");
    *out = new qlab_state{qlab::singlet_state(qlab::SpinLength(two_s))};
  });
}

qlab_status qlab_state_macro_entangled(int two_s, qlab_state** out) {
  return guarded([&] {
    require(out != nullptr, "output handle must not be null");
    *out = new qlab_state{qlab::macro_entangled_state(qlab::SpinLength(two_s))};
  });
}

qlab_status qlab_state_product(int two_s, double theta_a, double phi_a, double theta_b, double phi_b,
                               qlab_state** out) {
  return guarded([&] {
    require(out != nullptr, "output handle must not be null");
    *out = new qlab_state{qlab::product_state(qlab::SpinLength(two_s), qlab::SphereDirection::make(theta_a, phi_a),
                                              qlab::SphereDirection::make(theta_b, phi_b))};
  });
}

qlab_status qlab_state_random(int two_s, unsigned long long seed, qlab_state** out) {
  return guarded([&] {
    require(out != nullptr, "output handle must not be null");
    *out = new qlab_state{qlab::random_state(qlab::SpinLength(two_s), seed)};
  });
}

qlab_status qlab_state_load(const char* path, qlab_state** out) {
  return guarded([&] {
    require(out != nullptr, "output handle must not be null");
    require(path != nullptr, "path must not be null");
    *out = new qlab_state{qlab::load_state_file(path)};
  });
}

int qlab_state_two_s(const qlab_state* state) { return state ? state->state.spin.two_s() : -1; }

void qlab_state_free(qlab_state* state) { delete state; }

qlab_status qlab_constants_profile(const char* name, qlab_constants* out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "name and output must not be null");
    from_profile(qlab::ConstantsProfile::named(name), out);
  });
}

qlab_status qlab_constants_load(const char* path, qlab_constants* out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and output must not be null");
    from_profile(qlab::load_constants(path), out);
  });
}

qlab_status qlab_angle_bound_log10(const qlab_scenario* scenario, const qlab_constants* constants,
                                   qlab_regime regime, double* out) {
  return guarded([&] {
    require(out != nullptr, "output must not be null");
    *out = qlab::angle_bound(to_scenario(scenario), to_profile(constants), to_regime(regime)).log10;
  });
}

qlab_status qlab_max_spin_log10(const qlab_scenario* scenario, const qlab_constants* constants, qlab_regime regime,
                                qlab_criterion criterion, double* out) {
  return guarded([&] {
    require(out != nullptr, "output must not be null");
    *out = qlab::max_spin(to_scenario(scenario), to_profile(constants), to_regime(regime), to_criterion(criterion))
               .log10;
  });
}

qlab_status qlab_schwarzschild_radius_log10(double mass, const qlab_constants* constants, double* out) {
  return guarded([&] {
    require(out != nullptr, "output must not be null");
    *out = qlab::schwarzschild_radius(mass, to_profile(constants)).log10;
  });
}

qlab_status qlab_standard_scenario(int which, const qlab_constants* constants, qlab_scenario* out) {
  return guarded([&] {
    require(out != nullptr, "output must not be null");
    require(which == 0 || which == 1, "standard scenario must be 0 (laboratory) or 1 (universe)");
    const qlab::ApparatusScenario sc =
        which == 0 ? qlab::ApparatusScenario::laboratory() : qlab::ApparatusScenario::universe(to_profile(constants));
    out->label = kLabels[which];
    out->mass = sc.mass;
    out->size = sc.size;
    out->has_time = sc.time ? 1 : 0;
    out->time = sc.time.value_or(0.0);
  });
}

qlab_status qlab_limits_report(const qlab_scenario* scenarios, size_t count, const qlab_constants* constants,
                               qlab_limit_report** out) {
  return guarded([&] {
    require(out != nullptr, "output handle must not be null");
    require(scenarios != nullptr || count == 0, "scenarios must not be null");
    std::vector<qlab::ApparatusScenario> list;
    for (size_t i = 0; i < count; ++i) {
      list.push_back(to_scenario(&scenarios[i]));
    }
    *out = new qlab_limit_report{qlab::scenario_report(list, to_profile(constants))};
  });
}

size_t qlab_limit_report_size(const qlab_limit_report* report) { return report ? report->rows.size() : 0; }

qlab_status qlab_limit_report_row(const qlab_limit_report* report, size_t index, qlab_limit_row* out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "report and output must not be null");
    require(index < report->rows.size(), "row index out of range");
    const qlab::LimitRow& r = report->rows[index];
    copy_name(out->scenario, sizeof(out->scenario), r.scenario);
    out->regime = static_cast<qlab_regime>(r.regime);
    out->criterion = static_cast<qlab_criterion>(r.criterion);
    out->log10_angle = r.log10_angle;
    out->log10_spin = r.log10_spin;
    out->log10_schwarzschild = r.log10_schwarzschild;
  });
}

void qlab_limit_report_free(qlab_limit_report* report) { delete report; }

const char* qlab_regime_name(qlab_regime regime) {
  try {
    return qlab::to_string(to_regime(regime));
  } catch (...) {
    return "?";
  }
}

const char* qlab_criterion_name(qlab_criterion criterion) {
  try {
    return qlab::to_string(to_criterion(criterion));
  } catch (...) {
    return "?";
  }
}

void qlab_chsh_options_default(qlab_chsh_options* options) {
  if (!options) {
    return;
  }
  options->kind = QLAB_KIND_SHARP_SIGN;
  options->n_bands = 2;
  options->zero_minus = 0;
  options->oversample = 1.0;
  options->resolution = qlab::ScanOptions{}.resolution;
  options->full_sphere = 0;
}

qlab_status qlab_chsh_scan(const qlab_state* state, const qlab_chsh_options* options, qlab_chsh_result* out) {
  return guarded([&] {
    require(state != nullptr && options != nullptr && out != nullptr, "state, options and output must not be null");
    qlab::DichotomicMeasurement proto;
    switch (options->kind) {
      case QLAB_KIND_SHARP_SIGN: proto.kind = qlab::MeasurementKind::sharp_sign; break;
      case QLAB_KIND_SLOT_COARSE: proto.kind = qlab::MeasurementKind::slot_coarse; break;
      case QLAB_KIND_CAT_HEMISPHERE: proto.kind = qlab::MeasurementKind::cat_hemisphere; break;
      default: throw std::invalid_argument("unknown measurement kind");
    }
    require(options->n_bands >= 2, "n_bands must be at least 2");
    require(options->oversample >= 1.0, "oversample must be at least 1");
    require(options->resolution >= 2, "resolution must be at least 2");
    proto.n_bands = options->n_bands;
    proto.zero_rule = options->zero_minus ? qlab::ZeroRule::minus : qlab::ZeroRule::plus;
    proto.oversample = options->oversample;
    qlab::ScanOptions scan;
    scan.resolution = options->resolution;
    scan.full_sphere = options->full_sphere != 0;
    const qlab::ChshResult r = qlab::chsh_scan(state->state, proto, scan);
    for (int i = 0; i < 4; ++i) {
      out->theta[i] = r.settings.directions[i].theta;
      out->phi[i] = r.settings.directions[i].phi;
      out->cat_angle[i] = r.settings.cat_angles[i];
      out->correlation[i] = r.correlations[i];
    }
    out->S = r.S;
  });
}

qlab_status qlab_classicality(const qlab_state* state, int n_bands, double oversample, qlab_classicality_row* out) {
  return guarded([&] {
    require(state != nullptr && out != nullptr, "state and output must not be null");
    const qlab::ClassicalityPoint p = qlab::classicality_point(state->state, n_bands, oversample);
    out->two_s = p.spin.two_s();
    out->n_bands = p.n_bands;
    out->width = p.width;
    out->width_sqrt_s = p.width_sqrt_s;
    out->epsilon = p.epsilon;
    out->marginal_residual = p.marginal_residual;
    out->skipped_outcomes = p.skipped_outcomes;
    out->grid_degree = p.grid_degree;
  });
}

qlab_status qlab_grid_degree(int two_s, int n_bands, double oversample, int* out) {
  return guarded([&] {
    require(out != nullptr, "output must not be null");
    require(n_bands == 0 || n_bands >= 2, "n_bands must be 0 or at least 2");
    const qlab::SpinLength s(two_s);
    const qlab::GridPtr grid = n_bands == 0 ? qlab::gauss_legendre_grid(s, oversample)
                                            : qlab::band_aligned_grid(s, qlab::SphereDirection{}, n_bands, oversample);
    *out = grid->degree;
  });
}

qlab_status qlab_qdist_joint(const qlab_state* state, double oversample, qlab_qtable** out) {
  return guarded([&] {
    require(state != nullptr && out != nullptr, "state and output must not be null");
    const qlab::SpinLength s = state->state.spin;
    const qlab::GridPtr grid = qlab::gauss_legendre_grid(s, oversample);
    const qlab::QTable2 joint = qlab::q_joint(state->state, grid, grid);
    const qlab::DensityOperator rho = qlab::DensityOperator::from_state(state->state);
    const qlab::QTable1 qa = qlab::q_single(s, qlab::partial_trace(rho, 0), grid);
    const qlab::QTable1 qb = qlab::q_single(s, qlab::partial_trace(rho, 1), grid);
    auto t = new qlab_qtable;
    t->joint = true;
    t->degree = grid->degree;
    t->normalization = joint.integral();
    t->residual = qlab::factorization_residual(joint, qa, qb);
    t->grid_a = grid;
    t->grid_b = grid;
    t->values = joint.values;
    *out = t;
  });
}

qlab_status qlab_qdist_single(const qlab_state* state, int party, double oversample, qlab_qtable** out) {
  return guarded([&] {
    require(state != nullptr && out != nullptr, "state and output must not be null");
    require(party == 0 || party == 1, "party must be 0 (A) or 1 (B)");
    const qlab::SpinLength s = state->state.spin;
    const qlab::GridPtr grid = qlab::gauss_legendre_grid(s, oversample);
    const qlab::DensityOperator rho = qlab::DensityOperator::from_state(state->state);
    const qlab::QTable1 q = qlab::q_single(s, qlab::partial_trace(rho, party), grid);
    auto t = new qlab_qtable;
    t->degree = grid->degree;
    t->normalization = q.integral();
    t->grid_a = grid;
    t->values = q.values;
    *out = t;
  });
}

int qlab_qtable_is_joint(const qlab_qtable* table) { return table && table->joint ? 1 : 0; }

size_t qlab_qtable_rows(const qlab_qtable* table) {
  return table ? static_cast<size_t>(table->values.rows() * table->values.cols()) : 0;
}

qlab_status qlab_qtable_row(const qlab_qtable* table, size_t index, qlab_qrow* out) {
  return guarded([&] {
    require(table != nullptr && out != nullptr, "table and output must not be null");
    require(index < qlab_qtable_rows(table), "row index out of range");
    const auto cols = static_cast<size_t>(table->values.cols());
    const size_t i = index / cols;
    const size_t j = index % cols;
    const auto& pa = table->grid_a->nodes[i];
    out->theta_a = pa.theta;
    out->phi_a = pa.phi;
    if (table->joint) {
      const auto& pb = table->grid_b->nodes[j];
      out->theta_b = pb.theta;
      out->phi_b = pb.phi;
    } else {
      out->theta_b = 0.0;
      out->phi_b = 0.0;
    }
    out->q = table->values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

double qlab_qtable_normalization(const qlab_qtable* table) { return table ? table->normalization : 0.0; }

int qlab_qtable_grid_degree(const qlab_qtable* table) { return table ? table->degree : 0; }

qlab_status qlab_qtable_factorization_residual(const qlab_qtable* table, double* out) {
  return guarded([&] {
    require(table != nullptr && out != nullptr, "table and output must not be null");
    require(table->joint, "factorization residual needs a joint table");
    *out = table->residual;
  });
}

void qlab_qtable_free(qlab_qtable* table) { delete table; }

}  // extern "C"
