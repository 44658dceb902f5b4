/*
 * Copyright (c) the floqmet developers.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API of libfloqmet: simulation of a frequency-modulated emitter array
 * coupled to a square-lattice photonic reservoir, and of the resulting
 * frequency-estimation precision.
 *
 * All functions return fq_status; FQ_OK (0) means success.  On failure a
 * human-readable message is available from fq_last_error() (thread-local).
 * Objects returned through fq_*** out-parameters are owned by the caller
 * and released with the matching fq_*_free function.
 */

#ifndef FLOQMET_H
#define FLOQMET_H

#include <stddef.h>

#if defined(_WIN32)
#define FQ_API __declspec(dllexport)
#else
#define FQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fq_status {
  FQ_OK = 0,
  FQ_ERR_CONFIG = 2,  /* malformed input or invalid call arguments */
  FQ_ERR_DOMAIN = 3,  /* arguments outside an operation's domain */
  FQ_ERR_NUMERIC = 4, /* convergence failure or unstable computation */
} fq_status;

/* Message describing the most recent failure on this thread. */
FQ_API const char* fq_last_error(void);

FQ_API const char* fq_version(void);

/* ------------------------------------------------------------------ */
/* Model parameters                                                   */
/* ------------------------------------------------------------------ */

/* Energies in units of the hopping rate h, times in 1/h, hbar = 1. */
typedef struct fq_params {
  double omega0;    /* emitter transition frequency */
  double g;         /* emitter-reservoir coupling */
  double h;         /* lattice hopping rate (energy unit) */
  double omega_c;   /* reservoir band centre */
  double amplitude; /* drive amplitude A */
  double omega_t;   /* drive frequency omega_T */
  int n_atoms;      /* probe size N */
} fq_params;

FQ_API void fq_params_default(fq_params* p);

/* ------------------------------------------------------------------ */
/* Configuration files (flat key = value)                             */
/* ------------------------------------------------------------------ */

typedef struct fq_config fq_config;

FQ_API fq_status fq_config_load(const char* path, fq_config** out);
FQ_API void fq_config_free(fq_config* cfg);
FQ_API fq_status fq_config_params(const fq_config* cfg, fq_params* out);
FQ_API int fq_config_has(const fq_config* cfg, const char* key);
FQ_API fq_status fq_config_get_double(const fq_config* cfg, const char* key,
                                      double* out);
FQ_API fq_status fq_config_get_int(const fq_config* cfg, const char* key,
                                   int* out);
FQ_API fq_status fq_config_get_bool(const fq_config* cfg, const char* key,
                                    int* out);
FQ_API fq_status fq_config_get_string(const fq_config* cfg, const char* key,
                                      char* buf, size_t cap);

/* Standard comment header (parameters + format version) for CSV files. */
FQ_API fq_status fq_csv_header(const fq_params* p, const char* kind,
                               char* buf, size_t cap);

/* ------------------------------------------------------------------ */
/* Model-level quantities                                             */
/* ------------------------------------------------------------------ */

FQ_API fq_status fq_drive_field(const fq_params* p, double t, double* out);
FQ_API fq_status fq_spectral_density(const fq_params* p, double omega,
                                     double* out);
FQ_API fq_status fq_correlation_function(const fq_params* p, double t,
                                         double* re, double* im);
FQ_API fq_status fq_elliptic_k(double x, double* out);
FQ_API fq_status fq_elliptic_e(double x, double* out);
FQ_API fq_status fq_lambert_w(double z, double* out);

/* ------------------------------------------------------------------ */
/* Dynamics                                                           */
/* ------------------------------------------------------------------ */

typedef struct fq_trajectory fq_trajectory;

/* Memory-kernel integration of c(t) and dc/domega0 (see library docs). */
FQ_API fq_status fq_evolve(const fq_params* p, double t_max, double dt,
                           int driven, fq_trajectory** out);

/* Brute-force finite-lattice integration (L x L modes, even L >= 32). */
FQ_API fq_status fq_lattice_oracle(const fq_params* p, int lattice_size,
                                   double t_max, double dt, int driven,
                                   fq_trajectory** out);

FQ_API void fq_trajectory_free(fq_trajectory* traj);
FQ_API size_t fq_trajectory_size(const fq_trajectory* traj);
FQ_API double fq_trajectory_dt(const fq_trajectory* traj);
FQ_API int fq_trajectory_steps_per_period(const fq_trajectory* traj);
FQ_API fq_status fq_trajectory_point(const fq_trajectory* traj, size_t i,
                                     double* t, double* re_c, double* im_c,
                                     double* re_dc, double* im_dc);
FQ_API fq_status fq_trajectory_write_csv(const fq_trajectory* traj,
                                         const char* path);

/* kappa = pi J(omega0); delta = principal-value Lamb shift. */
FQ_API fq_status fq_markovian_params(const fq_params* p, double* kappa,
                                     double* delta);
FQ_API fq_status fq_markovian_amplitude(double kappa, double delta,
                                        double omega0, double t, double* re,
                                        double* im);

/* ------------------------------------------------------------------ */
/* Quantum Fisher information                                         */
/* ------------------------------------------------------------------ */

typedef struct fq_qfi_series fq_qfi_series;

FQ_API fq_status fq_qfi_from_trajectory(const fq_trajectory* traj,
                                        int n_atoms, fq_qfi_series** out);
FQ_API void fq_qfi_series_free(fq_qfi_series* s);
FQ_API size_t fq_qfi_series_size(const fq_qfi_series* s);
FQ_API fq_status fq_qfi_series_point(const fq_qfi_series* s, size_t i,
                                     double* t, double* f_total, double* f1,
                                     double* f2);
/* markovian_kappa >= 0 appends a closed-form comparison column. */
FQ_API fq_status fq_qfi_series_write_csv(const fq_qfi_series* s,
                                         const char* path,
                                         double markovian_kappa);

/* Pointwise F1/F2 from one amplitude sample. */
FQ_API fq_status fq_qfi_components(double re_c, double im_c, double re_dc,
                                   double im_dc, int n_atoms, double* f1,
                                   double* f2);

/* ------------------------------------------------------------------ */
/* Floquet bound states                                               */
/* ------------------------------------------------------------------ */

typedef struct fq_fbs_set fq_fbs_set;

/* n_max <= 0 selects the automatic truncation order. */
FQ_API fq_status fq_solve_fbs(const fq_params* p, int n_max,
                              fq_fbs_set** out);
FQ_API void fq_fbs_set_free(fq_fbs_set* s);
FQ_API size_t fq_fbs_count(const fq_fbs_set* s);
FQ_API fq_status fq_fbs_info(const fq_fbs_set* s, size_t i,
                             double* epsilon_b, double* residue);

/* Sensitivities of branch `branch` to omega0 (finite differences, step
 * delta <= 0 for the default). */
FQ_API fq_status fq_fbs_derivatives(const fq_params* p, int n_max,
                                    double delta, int branch,
                                    double* epsilon_b, double* residue,
                                    double* d_epsilon_domega0,
                                    double* d_z2_domega0);

typedef struct fq_scan fq_scan;

typedef enum fq_scan_axis {
  FQ_AXIS_AMPLITUDE = 0,
  FQ_AXIS_OMEGA_T = 1,
} fq_scan_axis;

FQ_API fq_status fq_scan_spectrum(const fq_params* p, fq_scan_axis axis,
                                  const double* values, size_t n_values,
                                  int n_max, int workers, fq_scan** out);
FQ_API void fq_scan_free(fq_scan* s);
FQ_API size_t fq_scan_size(const fq_scan* s);
/* eps/res arrays receive min(cap, actual) branches; *n_branches gets the
 * actual count. */
FQ_API fq_status fq_scan_point(const fq_scan* s, size_t i,
                               double* axis_value, size_t* n_branches,
                               double* eps, double* res, size_t cap);
FQ_API fq_status fq_scan_write_csv(const fq_scan* s, const char* branches_path,
                                   const char* edges_path);

/* ------------------------------------------------------------------ */
/* Asymptotics                                                        */
/* ------------------------------------------------------------------ */

FQ_API fq_status fq_y_n(double x, int n_atoms, double* out);

/* Long-time law F ~ t2_coefficient t^2 + offset from FBS data. */
FQ_API fq_status fq_long_time_qfi(double z2, double d_epsilon_domega0,
                                  double d_z2_domega0, int n_atoms,
                                  double* t2_coefficient, double* offset);

FQ_API fq_status fq_markovian_qfi(double kappa, int n_atoms, double t,
                                  double* out);
FQ_API fq_status fq_markovian_optimum(double kappa, int n_atoms, double t_r,
                                      double* t_opt, double* f_max,
                                      double* delta_omega_min);
FQ_API fq_status fq_cramer_rao(double fisher, double repetitions,
                               double* out);

/* ------------------------------------------------------------------ */
/* Drive design                                                       */
/* ------------------------------------------------------------------ */

typedef struct fq_design_result {
  int n_atoms;
  double a;       /* requested exponent: target Z^2 = exp(-a/N) */
  double a_opt;   /* optimised drive amplitude */
  double z2;      /* achieved residue squared */
  double y_value; /* y_N(z2) */
  double predicted_prefactor; /* 2 / (e^a + 1) */
  int branch;
} fq_design_result;

FQ_API fq_status fq_design_optimal_a(const fq_params* p, int n_atoms,
                                     double a, double tol, int branch,
                                     int n_max, fq_design_result* out);

/* Shared-curve sweep over n_values[0..n-1]; out must hold n results. */
FQ_API fq_status fq_design_sweep(const fq_params* p, const int* n_values,
                                 size_t n, double a, double tol, int branch,
                                 int n_max, int workers,
                                 fq_design_result* out);

/* Z^2 at each amplitude; entries without a bound state are set to NaN. */
FQ_API fq_status fq_residue_curve(const fq_params* p, const double* a_values,
                                  size_t n, int n_max, int workers,
                                  double* z2_out);

/* FBS-supporting amplitude intervals in [a_min, a_max]; returns up to cap
 * (lo, hi) pairs in bounds[0..2 cap-1], count in *n_regions. */
FQ_API fq_status fq_fbs_regions(const fq_params* p, double a_min,
                                double a_max, double step, double resolution,
                                int n_max, int workers, double* bounds,
                                size_t cap, size_t* n_regions);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FLOQMET_H */
