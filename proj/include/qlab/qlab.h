/*
 * qlab C API.
 *
 * Every entry point returns a qlab_status; on failure the message of the
 * last error on the calling thread is available from qlab_last_error().
 * Objects behind opaque handles are immutable after creation and must be
 * released with the matching *_free function.
 */
#ifndef QLAB_QLAB_H
#define QLAB_QLAB_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(QLAB_BUILDING_DLL)
#    define QLAB_API __declspec(dllexport)
#  else
#    define QLAB_API __declspec(dllimport)
#  endif
#else
#  define QLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qlab_status {
  QLAB_OK = 0,
  QLAB_ERROR_INVALID_ARGUMENT = 1,
  QLAB_ERROR_NUMERICAL = 2,
  QLAB_ERROR_IO = 3,
  QLAB_ERROR_INTERNAL = 4
} qlab_status;

QLAB_API const char* qlab_version(void);
QLAB_API const char* qlab_last_error(void);
QLAB_API const char* qlab_status_string(qlab_status status);

/* ---- two-spin states ---------------------------------------------------- */

typedef struct qlab_state qlab_state;

QLAB_API qlab_status qlab_state_singlet(int two_s, qlab_state** out);
QLAB_API qlab_status qlab_state_macro_entangled(int two_s, qlab_state** out);
/* Product of coherent states along (theta_a, phi_a) and (theta_b, phi_b). */
QLAB_API qlab_status qlab_state_product(int two_s, double theta_a, double phi_a, double theta_b, double phi_b,
                                        qlab_state** out);
/* Normalized Gaussian random amplitudes; identical seeds give identical states. */
QLAB_API qlab_status qlab_state_random(int two_s, unsigned long long seed, qlab_state** out);
/* JSON file {"two_s": n, "amplitudes": [[re, im], ...]}. */
QLAB_API qlab_status qlab_state_load(const char* path, qlab_state** out);
QLAB_API int qlab_state_two_s(const qlab_state* state);
QLAB_API void qlab_state_free(qlab_state* state);

/* ---- precision limits --------------------------------------------------- */

typedef struct qlab_constants {
  char name[64];
  double hbar;
  double c;
  double G;
  double planck_length;
  double universe_radius;
  double universe_mass;
} qlab_constants;

typedef enum qlab_regime { QLAB_REGIME_SQL = 0, QLAB_REGIME_CAUSAL = 1, QLAB_REGIME_PLANCK = 2 } qlab_regime;
typedef enum qlab_criterion { QLAB_CRITERION_SQRT = 0, QLAB_CRITERION_LINEAR = 1 } qlab_criterion;

typedef struct qlab_scenario {
  const char* label;
  double mass; /* kg */
  double size; /* m */
  double time; /* s, read only when has_time != 0 */
  int has_time;
} qlab_scenario;

typedef struct qlab_limit_row {
  char scenario[64];
  qlab_regime regime;
  qlab_criterion criterion;
  double log10_angle;
  double log10_spin;
  double log10_schwarzschild;
} qlab_limit_row;

typedef struct qlab_limit_report qlab_limit_report;

/* name: "paper-oom" or "precise" */
QLAB_API qlab_status qlab_constants_profile(const char* name, qlab_constants* out);
/* key = value file; see the README for the accepted keys */
QLAB_API qlab_status qlab_constants_load(const char* path, qlab_constants* out);

QLAB_API qlab_status qlab_angle_bound_log10(const qlab_scenario* scenario, const qlab_constants* constants,
                                            qlab_regime regime, double* out);
QLAB_API qlab_status qlab_max_spin_log10(const qlab_scenario* scenario, const qlab_constants* constants,
                                         qlab_regime regime, qlab_criterion criterion, double* out);
QLAB_API qlab_status qlab_schwarzschild_radius_log10(double mass, const qlab_constants* constants, double* out);

/* Standard scenarios: 0 = laboratory (1 kg, 1 m, 1 s), 1 = universe (M_U, R_U, 1 s). */
QLAB_API qlab_status qlab_standard_scenario(int which, const qlab_constants* constants, qlab_scenario* out);

QLAB_API qlab_status qlab_limits_report(const qlab_scenario* scenarios, size_t count, const qlab_constants* constants,
                                        qlab_limit_report** out);
QLAB_API size_t qlab_limit_report_size(const qlab_limit_report* report);
QLAB_API qlab_status qlab_limit_report_row(const qlab_limit_report* report, size_t index, qlab_limit_row* out);
QLAB_API void qlab_limit_report_free(qlab_limit_report* report);

QLAB_API const char* qlab_regime_name(qlab_regime regime);
QLAB_API const char* qlab_criterion_name(qlab_criterion criterion);

/* ---- CHSH ---------------------------------------------------------------- */

typedef enum qlab_kind {
  QLAB_KIND_SHARP_SIGN = 0,
  QLAB_KIND_SLOT_COARSE = 1,
  QLAB_KIND_CAT_HEMISPHERE = 2
} qlab_kind;

typedef struct qlab_chsh_options {
  qlab_kind kind;
  int n_bands;         /* slot-coarse */
  int zero_minus;      /* sharp-sign: m = 0 counts as -1 instead of +1 */
  double oversample;   /* grid oversampling for slot integrals, >= 1 */
  int resolution;      /* grid points per setting angle */
  int full_sphere;     /* refine setting azimuths too */
} qlab_chsh_options;

typedef struct qlab_chsh_result {
  double theta[4]; /* settings a, a', b, b' */
  double phi[4];
  double cat_angle[4];
  double correlation[4]; /* E(a,b), E(a,b'), E(a',b), E(a',b') */
  double S;
} qlab_chsh_result;

QLAB_API void qlab_chsh_options_default(qlab_chsh_options* options);
QLAB_API qlab_status qlab_chsh_scan(const qlab_state* state, const qlab_chsh_options* options,
                                    qlab_chsh_result* out);

/* ---- classicality of coarse-grained measurements ------------------------ */

typedef struct qlab_classicality_row {
  int two_s;
  int n_bands;
  double width;
  double width_sqrt_s;
  double epsilon;
  double marginal_residual;
  int skipped_outcomes;
  int grid_degree;
} qlab_classicality_row;

QLAB_API qlab_status qlab_classicality(const qlab_state* state, int n_bands, double oversample,
                                       qlab_classicality_row* out);

/* Polynomial degree integrated exactly by the grid used for n_bands polar
 * bands (n_bands = 0: the plain Q-distribution grid). */
QLAB_API qlab_status qlab_grid_degree(int two_s, int n_bands, double oversample, int* out);

/* ---- Q-distribution tables ---------------------------------------------- */

typedef struct qlab_qtable qlab_qtable;

typedef struct qlab_qrow {
  double theta_a;
  double phi_a;
  double theta_b; /* zero for single-party tables */
  double phi_b;
  double q;
} qlab_qrow;

QLAB_API qlab_status qlab_qdist_joint(const qlab_state* state, double oversample, qlab_qtable** out);
/* party 0 = A, 1 = B; Q of the reduced state */
QLAB_API qlab_status qlab_qdist_single(const qlab_state* state, int party, double oversample, qlab_qtable** out);
QLAB_API int qlab_qtable_is_joint(const qlab_qtable* table);
QLAB_API size_t qlab_qtable_rows(const qlab_qtable* table);
QLAB_API qlab_status qlab_qtable_row(const qlab_qtable* table, size_t index, qlab_qrow* out);
QLAB_API double qlab_qtable_normalization(const qlab_qtable* table);
QLAB_API int qlab_qtable_grid_degree(const qlab_qtable* table);
/* max |Q_AB - Q_A Q_B|; joint tables only */
QLAB_API qlab_status qlab_qtable_factorization_residual(const qlab_qtable* table, double* out);
QLAB_API void qlab_qtable_free(qlab_qtable* table);

#ifdef __cplusplus
}
#endif

#endif /* QLAB_QLAB_H */
