// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#include "floqmet.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "floqmet/asymptotics.hpp"
#include "floqmet/design.hpp"
#include "floqmet/dynamics.hpp"
#include "floqmet/errors.hpp"
#include "floqmet/floquet.hpp"
#include "floqmet/io.hpp"
#include "floqmet/model.hpp"
#include "floqmet/qfi.hpp"
#include "floqmet/special_functions.hpp"

struct fq_config {
  floqmet::FlatConfig cfg;
};

struct fq_trajectory {
  floqmet::AmplitudeTrajectory traj;
};

struct fq_qfi_series {
  floqmet::ModelParams params;
  std::vector<floqmet::QfiResult> series;
};

struct fq_fbs_set {
  std::vector<floqmet::FloquetBoundState> states;
};

struct fq_scan {
  floqmet::ModelParams params;
  floqmet::SpectrumScan scan;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : "unknown"; }

template <typename Fn>
fq_status guarded(Fn&& fn) {
  try {
    fn();
    return FQ_OK;
  } catch (const floqmet::ConfigError& e) {
    set_error(e.what());
    return FQ_ERR_CONFIG;
  } catch (const floqmet::DomainError& e) {
    set_error(e.what());
    return FQ_ERR_DOMAIN;
  } catch (const floqmet::NumericalError& e) {
    set_error(e.what());
    return FQ_ERR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return FQ_ERR_NUMERIC;
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw floqmet::ConfigError(message);
}

floqmet::ModelParams to_params(const fq_params* p) {
  require(p != nullptr, "null fq_params pointer");
  floqmet::ModelParams m;
  m.omega0 = p->omega0;
  m.g = p->g;
  m.hopping = p->h;
  m.omega_c = p->omega_c;
  m.drive_amplitude = p->amplitude;
  m.drive_frequency = p->omega_t;
  m.n_atoms = p->n_atoms;
  return m;
}

void from_params(const floqmet::ModelParams& m, fq_params* p) {
  p->omega0 = m.omega0;
  p->g = m.g;
  p->h = m.hopping;
  p->omega_c = m.omega_c;
  p->amplitude = m.drive_amplitude;
  p->omega_t = m.drive_frequency;
  p->n_atoms = m.n_atoms;
}

void copy_string(const std::string& s, char* buf, size_t cap) {
  require(buf != nullptr, "null output buffer");
  if (s.size() + 1 > cap)
    throw floqmet::ConfigError("output buffer too small, need " +
                               std::to_string(s.size() + 1) + " bytes");
  std::memcpy(buf, s.c_str(), s.size() + 1);
}

} // namespace

extern "C" {

const char* fq_last_error(void) { return g_last_error.c_str(); }

const char* fq_version(void) { return "0.1.0"; }

void fq_params_default(fq_params* p) {
  if (!p) return;
  from_params(floqmet::ModelParams{}, p);
}

/* ------------------------------------------------------------------ */

fq_status fq_config_load(const char* path, fq_config** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new fq_config{floqmet::FlatConfig::load(path)};
  });
}

void fq_config_free(fq_config* cfg) { delete cfg; }

fq_status fq_config_params(const fq_config* cfg, fq_params* out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    from_params(cfg->cfg.params(), out);
  });
}

int fq_config_has(const fq_config* cfg, const char* key) {
  return cfg && key && cfg->cfg.has(key) ? 1 : 0;
}

fq_status fq_config_get_double(const fq_config* cfg, const char* key,
                               double* out) {
  return guarded([&] {
    require(cfg && key && out, "null argument");
    *out = cfg->cfg.get_double(key);
  });
}

fq_status fq_config_get_int(const fq_config* cfg, const char* key, int* out) {
  return guarded([&] {
    require(cfg && key && out, "null argument");
    if (!cfg->cfg.has(key))
      throw floqmet::ConfigError("config: missing required key '" +
                                 std::string(key) + "'");
    *out = cfg->cfg.get_int(key, 0);
  });
}

fq_status fq_config_get_bool(const fq_config* cfg, const char* key, int* out) {
  return guarded([&] {
    require(cfg && key && out, "null argument");
    if (!cfg->cfg.has(key))
      throw floqmet::ConfigError("config: missing required key '" +
                                 std::string(key) + "'");
    *out = cfg->cfg.get_bool(key, false) ? 1 : 0;
  });
}

fq_status fq_config_get_string(const fq_config* cfg, const char* key,
                               char* buf, size_t cap) {
  return guarded([&] {
    require(cfg && key, "null argument");
    if (!cfg->cfg.has(key))
      throw floqmet::ConfigError("config: missing required key '" +
                                 std::string(key) + "'");
    copy_string(cfg->cfg.get_string(key, ""), buf, cap);
  });
}

fq_status fq_csv_header(const fq_params* p, const char* kind, char* buf,
                        size_t cap) {
  return guarded([&] {
    require(kind, "null argument");
    copy_string(floqmet::csv_header(to_params(p), kind), buf, cap);
  });
}

/* ------------------------------------------------------------------ */

fq_status fq_drive_field(const fq_params* p, double t, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = floqmet::drive_field(t, to_params(p));
  });
}

fq_status fq_spectral_density(const fq_params* p, double omega, double* out) {
  return guarded([&] {
    require(out, "null argument");
    floqmet::ModelParams m = to_params(p);
    m.validate();
    *out = floqmet::spectral_density(omega, m);
  });
}

fq_status fq_correlation_function(const fq_params* p, double t, double* re,
                                  double* im) {
  return guarded([&] {
    require(re && im, "null argument");
    floqmet::ModelParams m = to_params(p);
    m.validate();
    const std::complex<double> v = floqmet::correlation_function(t, m);
    *re = v.real();
    *im = v.imag();
  });
}

fq_status fq_elliptic_k(double x, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = floqmet::elliptic_k(x);
  });
}

fq_status fq_elliptic_e(double x, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = floqmet::elliptic_e(x);
  });
}

fq_status fq_lambert_w(double z, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = floqmet::lambert_w(z);
  });
}

/* ------------------------------------------------------------------ */

fq_status fq_evolve(const fq_params* p, double t_max, double dt, int driven,
                    fq_trajectory** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new fq_trajectory{
        floqmet::solve_amplitude(to_params(p), t_max, dt, driven != 0)};
  });
}

fq_status fq_lattice_oracle(const fq_params* p, int lattice_size, double t_max,
                            double dt, int driven, fq_trajectory** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new fq_trajectory{floqmet::lattice_oracle(
        to_params(p), lattice_size, t_max, dt, driven != 0)};
  });
}

void fq_trajectory_free(fq_trajectory* traj) { delete traj; }

size_t fq_trajectory_size(const fq_trajectory* traj) {
  return traj ? traj->traj.times.size() : 0;
}

double fq_trajectory_dt(const fq_trajectory* traj) {
  return traj ? traj->traj.dt : 0.0;
}

int fq_trajectory_steps_per_period(const fq_trajectory* traj) {
  return traj ? traj->traj.steps_per_period : 0;
}

fq_status fq_trajectory_point(const fq_trajectory* traj, size_t i, double* t,
                              double* re_c, double* im_c, double* re_dc,
                              double* im_dc) {
  return guarded([&] {
    require(traj && t && re_c && im_c && re_dc && im_dc, "null argument");
    require(i < traj->traj.times.size(), "trajectory index out of range");
    *t = traj->traj.times[i];
    *re_c = traj->traj.c[i].real();
    *im_c = traj->traj.c[i].imag();
    *re_dc = traj->traj.dc_domega0[i].real();
    *im_dc = traj->traj.dc_domega0[i].imag();
  });
}

fq_status fq_trajectory_write_csv(const fq_trajectory* traj,
                                  const char* path) {
  return guarded([&] {
    require(traj && path, "null argument");
    floqmet::write_trajectory_csv(path, traj->traj);
  });
}

fq_status fq_markovian_params(const fq_params* p, double* kappa,
                              double* delta) {
  return guarded([&] {
    require(kappa && delta, "null argument");
    const floqmet::MarkovianModel m =
        floqmet::markovian_params(to_params(p));
    *kappa = m.kappa;
    *delta = m.delta;
  });
}

fq_status fq_markovian_amplitude(double kappa, double delta, double omega0,
                                 double t, double* re, double* im) {
  return guarded([&] {
    require(re && im, "null argument");
    floqmet::MarkovianModel m;
    m.kappa = kappa;
    m.delta = delta;
    const std::complex<double> c = floqmet::markovian_amplitude(m, omega0, t);
    *re = c.real();
    *im = c.imag();
  });
}

/* ------------------------------------------------------------------ */

fq_status fq_qfi_from_trajectory(const fq_trajectory* traj, int n_atoms,
                                 fq_qfi_series** out) {
  return guarded([&] {
    require(traj && out, "null argument");
    floqmet::ModelParams params = traj->traj.params;
    params.n_atoms = n_atoms;
    params.validate();
    *out = new fq_qfi_series{params,
                             floqmet::qfi_series(traj->traj, n_atoms)};
  });
}

void fq_qfi_series_free(fq_qfi_series* s) { delete s; }

size_t fq_qfi_series_size(const fq_qfi_series* s) {
  return s ? s->series.size() : 0;
}

fq_status fq_qfi_series_point(const fq_qfi_series* s, size_t i, double* t,
                              double* f_total, double* f1, double* f2) {
  return guarded([&] {
    require(s && t && f_total && f1 && f2, "null argument");
    require(i < s->series.size(), "series index out of range");
    const floqmet::QfiResult& r = s->series[i];
    *t = r.t;
    *f_total = r.f_total;
    *f1 = r.f1;
    *f2 = r.f2;
  });
}

fq_status fq_qfi_series_write_csv(const fq_qfi_series* s, const char* path,
                                  double markovian_kappa) {
  return guarded([&] {
    require(s && path, "null argument");
    std::optional<double> kappa;
    if (markovian_kappa >= 0.0) kappa = markovian_kappa;
    floqmet::write_qfi_csv(path, s->params, s->series, kappa);
  });
}

fq_status fq_qfi_components(double re_c, double im_c, double re_dc,
                            double im_dc, int n_atoms, double* f1,
                            double* f2) {
  return guarded([&] {
    require(f1 && f2, "null argument");
    const std::complex<double> c(re_c, im_c), dc(re_dc, im_dc);
    *f1 = floqmet::qfi_f1(c, dc, n_atoms);
    *f2 = floqmet::qfi_f2(std::norm(c),
                          2.0 * std::real(std::conj(c) * dc), n_atoms);
  });
}

/* ------------------------------------------------------------------ */

fq_status fq_solve_fbs(const fq_params* p, int n_max, fq_fbs_set** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new fq_fbs_set{floqmet::solve_fbs(to_params(p), n_max)};
  });
}

void fq_fbs_set_free(fq_fbs_set* s) { delete s; }

size_t fq_fbs_count(const fq_fbs_set* s) { return s ? s->states.size() : 0; }

fq_status fq_fbs_info(const fq_fbs_set* s, size_t i, double* epsilon_b,
                      double* residue) {
  return guarded([&] {
    require(s && epsilon_b && residue, "null argument");
    require(i < s->states.size(), "bound-state index out of range");
    *epsilon_b = s->states[i].epsilon_b;
    *residue = s->states[i].residue;
  });
}

fq_status fq_fbs_derivatives(const fq_params* p, int n_max, double delta,
                             int branch, double* epsilon_b, double* residue,
                             double* d_epsilon_domega0,
                             double* d_z2_domega0) {
  return guarded([&] {
    require(epsilon_b && residue && d_epsilon_domega0 && d_z2_domega0,
            "null argument");
    if (delta <= 0.0) delta = 1e-3;
    const floqmet::FloquetBoundState b =
        floqmet::fbs_derivatives(to_params(p), n_max, delta, branch);
    *epsilon_b = b.epsilon_b;
    *residue = b.residue;
    *d_epsilon_domega0 = b.d_epsilon_domega0;
    *d_z2_domega0 = b.d_z2_domega0;
  });
}

fq_status fq_scan_spectrum(const fq_params* p, fq_scan_axis axis,
                           const double* values, size_t n_values, int n_max,
                           int workers, fq_scan** out) {
  return guarded([&] {
    require(out && (values || n_values == 0), "null argument");
    require(axis == FQ_AXIS_AMPLITUDE || axis == FQ_AXIS_OMEGA_T,
            "invalid scan axis");
    const floqmet::ScanAxis ax = axis == FQ_AXIS_AMPLITUDE
                                     ? floqmet::ScanAxis::amplitude
                                     : floqmet::ScanAxis::drive_frequency;
    floqmet::ModelParams m = to_params(p);
    *out = new fq_scan{
        m, floqmet::scan_spectrum(m, ax, std::span(values, n_values), n_max,
                                  workers)};
  });
}

void fq_scan_free(fq_scan* s) { delete s; }

size_t fq_scan_size(const fq_scan* s) { return s ? s->scan.values.size() : 0; }

fq_status fq_scan_point(const fq_scan* s, size_t i, double* axis_value,
                        size_t* n_branches, double* eps, double* res,
                        size_t cap) {
  return guarded([&] {
    require(s && axis_value && n_branches, "null argument");
    require(i < s->scan.values.size(), "scan index out of range");
    *axis_value = s->scan.values[i];
    const auto& states = s->scan.branches[i];
    *n_branches = states.size();
    const size_t n = std::min(cap, states.size());
    require(n == 0 || (eps && res), "null branch buffers");
    for (size_t b = 0; b < n; ++b) {
      eps[b] = states[b].epsilon_b;
      res[b] = states[b].residue;
    }
  });
}

fq_status fq_scan_write_csv(const fq_scan* s, const char* branches_path,
                            const char* edges_path) {
  return guarded([&] {
    require(s && branches_path && edges_path, "null argument");
    floqmet::write_scan_csv(branches_path, edges_path, s->params, s->scan);
  });
}

/* ------------------------------------------------------------------ */

fq_status fq_y_n(double x, int n_atoms, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = floqmet::y_n(x, n_atoms);
  });
}

fq_status fq_long_time_qfi(double z2, double d_epsilon_domega0,
                           double d_z2_domega0, int n_atoms,
                           double* t2_coefficient, double* offset) {
  return guarded([&] {
    require(t2_coefficient && offset, "null argument");
    if (!(z2 >= 0.0))
      throw floqmet::DomainError("fq_long_time_qfi: z2 must be >= 0");
    floqmet::FloquetBoundState b;
    b.residue = std::sqrt(z2);
    b.d_epsilon_domega0 = d_epsilon_domega0;
    b.d_z2_domega0 = d_z2_domega0;
    const floqmet::AsymptoticQfi f = floqmet::long_time_qfi(b, n_atoms);
    *t2_coefficient = f.t2_coefficient;
    *offset = f.offset;
  });
}

fq_status fq_markovian_qfi(double kappa, int n_atoms, double t, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = floqmet::markovian_qfi(kappa, n_atoms, t);
  });
}

fq_status fq_markovian_optimum(double kappa, int n_atoms, double t_r,
                               double* t_opt, double* f_max,
                               double* delta_omega_min) {
  return guarded([&] {
    require(t_opt && f_max && delta_omega_min, "null argument");
    const floqmet::MarkovianOptimum o =
        floqmet::markovian_optimum(kappa, n_atoms, t_r);
    *t_opt = o.t_opt;
    *f_max = o.f_max;
    *delta_omega_min = o.delta_omega_min;
  });
}

fq_status fq_cramer_rao(double fisher, double repetitions, double* out) {
  return guarded([&] {
    require(out, "null argument");
    *out = floqmet::cramer_rao_precision(fisher, repetitions);
  });
}

/* ------------------------------------------------------------------ */

fq_status fq_design_optimal_a(const fq_params* p, int n_atoms, double a,
                              double tol, int branch, int n_max,
                              fq_design_result* out) {
  return guarded([&] {
    require(out, "null argument");
    const floqmet::DesignResult r =
        floqmet::design_optimal_a(to_params(p), n_atoms, a, tol, branch,
                                  n_max);
    *out = {r.n_atoms, r.a, r.a_opt, r.z2, r.y_value,
            r.predicted_prefactor, r.branch};
  });
}

fq_status fq_design_sweep(const fq_params* p, const int* n_values, size_t n,
                          double a, double tol, int branch, int n_max,
                          int workers, fq_design_result* out) {
  return guarded([&] {
    require(out && (n_values || n == 0), "null argument");
    const std::vector<floqmet::DesignResult> results = floqmet::design_sweep(
        to_params(p), std::span(n_values, n), a, tol, branch, n_max, 0.05,
        workers);
    for (size_t i = 0; i < results.size(); ++i) {
      const floqmet::DesignResult& r = results[i];
      out[i] = {r.n_atoms, r.a, r.a_opt, r.z2, r.y_value,
                r.predicted_prefactor, r.branch};
    }
  });
}

fq_status fq_residue_curve(const fq_params* p, const double* a_values,
                           size_t n, int n_max, int workers, double* z2_out) {
  return guarded([&] {
    require(z2_out && (a_values || n == 0), "null argument");
    const std::vector<floqmet::ResiduePoint> curve = floqmet::residue_curve(
        to_params(p), std::span(a_values, n), n_max, workers);
    for (size_t i = 0; i < curve.size(); ++i)
      z2_out[i] = curve[i].has_fbs
                      ? curve[i].z2
                      : std::numeric_limits<double>::quiet_NaN();
  });
}

fq_status fq_fbs_regions(const fq_params* p, double a_min, double a_max,
                         double step, double resolution, int n_max,
                         int workers, double* bounds, size_t cap,
                         size_t* n_regions) {
  return guarded([&] {
    require(n_regions && (bounds || cap == 0), "null argument");
    const std::vector<floqmet::Interval> regions = floqmet::fbs_regions(
        to_params(p), a_min, a_max, step, resolution, n_max, workers);
    *n_regions = regions.size();
    const size_t n = std::min(cap, regions.size());
    for (size_t i = 0; i < n; ++i) {
      bounds[2 * i] = regions[i].lo;
      bounds[2 * i + 1] = regions[i].hi;
    }
  });
}

} /* extern "C" */
