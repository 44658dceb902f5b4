// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver for libfloqmet.  Talks to the library exclusively
// through the C API in floqmet.h, like any external consumer.
//
// Series and scans are written as CSV, scalar results as JSON; every file
// embeds the full parameter set and a format version.  Exit status: 0 on
// success, 2 for configuration errors, 3 for numerical-domain errors.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "floqmet.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(int code, const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  std::exit(code);
}

int exit_code(fq_status s) { return s == FQ_ERR_CONFIG ? 2 : 3; }

void check(fq_status s) {
  if (s != FQ_OK) fail(exit_code(s), fq_last_error());
}

// Shortest round-trip decimal form, matching the library's CSV writers.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json params_json(const fq_params& p) {
  return {{"omega0", p.omega0},   {"g", p.g},
          {"h", p.h},             {"omega_c", p.omega_c},
          {"A", p.amplitude},     {"omega_T", p.omega_t},
          {"N", p.n_atoms}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(2, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out.good()) fail(2, "write failed: " + path.string());
}

std::string csv_header(const fq_params& p, const char* kind) {
  char buf[512];
  check(fq_csv_header(&p, kind, buf, sizeof buf));
  return buf;
}

// Comma-separated probe sizes; each token is an integer or a lo:hi range.
std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string tok = text.substr(pos, comma - pos);
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok.empty()) fail(2, "n_list: empty entry");
    int lo = 0, hi = 0;
    const std::size_t colon = tok.find(':');
    const char* end = tok.data() + (colon == std::string::npos ? tok.size()
                                                               : colon);
    auto r1 = std::from_chars(tok.data(), end, lo);
    if (r1.ec != std::errc() || r1.ptr != end)
      fail(2, "n_list: '" + tok + "' is not an integer or lo:hi range");
    if (colon == std::string::npos) {
      hi = lo;
    } else {
      const char* hend = tok.data() + tok.size();
      auto r2 = std::from_chars(tok.data() + colon + 1, hend, hi);
      if (r2.ec != std::errc() || r2.ptr != hend || hi < lo)
        fail(2, "n_list: '" + tok + "' is not a valid lo:hi range");
    }
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  if (out.empty()) fail(2, "n_list: no probe sizes given");
  return out;
}

// ---------------------------------------------------------------------------
// Option plumbing shared by every subcommand: --config / --out plus the
// model-parameter flags, with explicit flags overriding config-file keys.
// ---------------------------------------------------------------------------

struct Ctx {
  std::string config_path;
  std::string out_dir = ".";
  fq_config* cfg = nullptr;
  fq_params p{};

  double omega0 = 0, g = 0, h = 0, omega_c = 0, amp = 0, omega_t = 0;
  int n_atoms = 0;
  CLI::Option *o_omega0 = nullptr, *o_g = nullptr, *o_h = nullptr,
              *o_omega_c = nullptr, *o_amp = nullptr, *o_omega_t = nullptr,
              *o_n = nullptr;

  void attach(CLI::App* cmd) {
    // The hopping rate mirrors its config key as --h, so the help flag
    // must not claim the single-letter -h.
    cmd->set_help_flag("--help", "print help and exit");
    cmd->add_option("--config", config_path,
                    "key = value configuration file; explicit flags override "
                    "file keys");
    cmd->add_option("-o,--out", out_dir,
                    "output directory, created if missing (default: .)");
    o_omega0 = cmd->add_option("--omega0", omega0,
                               "emitter transition frequency [h]");
    o_g = cmd->add_option("--g", g, "emitter-reservoir coupling [h]");
    o_h = cmd->add_option("--h", h, "lattice hopping rate (energy unit)");
    o_omega_c = cmd->add_option("--omega_c", omega_c,
                                "reservoir band centre [h]");
    o_amp = cmd->add_option("--A", amp, "drive amplitude [h]");
    o_omega_t = cmd->add_option("--omega_T", omega_t, "drive frequency [h]");
    o_n = cmd->add_option("--N", n_atoms, "probe size (number of emitters)");
  }

  // Loads the config (if any), then applies explicit parameter flags.
  void resolve_params() {
    fq_params_default(&p);
    if (!config_path.empty()) {
      check(fq_config_load(config_path.c_str(), &cfg));
      check(fq_config_params(cfg, &p));
    }
    if (o_omega0->count()) p.omega0 = omega0;
    if (o_g->count()) p.g = g;
    if (o_h->count()) p.h = h;
    if (o_omega_c->count()) p.omega_c = omega_c;
    if (o_amp->count()) p.amplitude = amp;
    if (o_omega_t->count()) p.omega_t = omega_t;
    if (o_n->count()) p.n_atoms = n_atoms;
  }

  // Flag > config key > fallback, for per-command scalars.
  double number(const CLI::Option* o, double v, const char* key,
                double fallback) const {
    if (o->count()) return v;
    if (cfg && fq_config_has(cfg, key)) {
      double x = 0;
      check(fq_config_get_double(cfg, key, &x));
      return x;
    }
    return fallback;
  }
  int integer(const CLI::Option* o, int v, const char* key,
              int fallback) const {
    if (o->count()) return v;
    if (cfg && fq_config_has(cfg, key)) {
      int x = 0;
      check(fq_config_get_int(cfg, key, &x));
      return x;
    }
    return fallback;
  }
  bool boolean(const CLI::Option* o, bool v, const char* key,
               bool fallback) const {
    if (o->count()) return v;
    if (cfg && fq_config_has(cfg, key)) {
      int x = 0;
      check(fq_config_get_bool(cfg, key, &x));
      return x != 0;
    }
    return fallback;
  }
  std::string text(const CLI::Option* o, const std::string& v,
                   const char* key, const std::string& fallback) const {
    if (o->count()) return v;
    if (cfg && fq_config_has(cfg, key)) {
      char buf[4096];
      check(fq_config_get_string(cfg, key, buf, sizeof buf));
      return buf;
    }
    return fallback;
  }

  fs::path out_file(const char* name) const { return fs::path(out_dir) / name; }

  void prepare_out() const {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail(2, "cannot create output directory " + out_dir + ": " +
                        ec.message());
  }

  double period() const { return 2.0 * 3.14159265358979323846 / p.omega_t; }

  // Default step: resolve the band (0.05/h) and, when driven, the period.
  double default_dt(bool driven) const {
    const double band = 0.05 / p.h;
    return driven ? std::min(period() / 64.0, band) : band;
  }
};

struct Deleter {
  void operator()(fq_trajectory* t) const { fq_trajectory_free(t); }
  void operator()(fq_qfi_series* s) const { fq_qfi_series_free(s); }
  void operator()(fq_fbs_set* s) const { fq_fbs_set_free(s); }
  void operator()(fq_scan* s) const { fq_scan_free(s); }
};
template <class T>
using handle = std::unique_ptr<T, Deleter>;

json trajectory_stats(const fq_trajectory* tr) {
  const std::size_t n = fq_trajectory_size(tr);
  double t = 0, re = 0, im = 0, dre = 0, dim = 0;
  check(fq_trajectory_point(tr, n - 1, &t, &re, &im, &dre, &dim));
  json strobo = json::array();
  const int spp = fq_trajectory_steps_per_period(tr);
  if (spp > 0) {
    for (std::size_t i = 0; i < n; i += static_cast<std::size_t>(spp)) {
      double ts = 0, rs = 0, is = 0, drs = 0, dis = 0;
      check(fq_trajectory_point(tr, i, &ts, &rs, &is, &drs, &dis));
      strobo.push_back({{"n", i / static_cast<std::size_t>(spp)},
                        {"t", ts},
                        {"abs_c", std::hypot(rs, is)},
                        {"arg_c", std::atan2(is, rs)}});
    }
  }
  return {{"dt", fq_trajectory_dt(tr)},
          {"steps_per_period", spp},
          {"n_points", n},
          {"final", {{"t", t},
                     {"re_c", re},
                     {"im_c", im},
                     {"abs_c", std::hypot(re, im)},
                     {"arg_c", std::atan2(im, re)}}},
          {"stroboscopic", std::move(strobo)}};
}

// ---------------------------------------------------------------------------
// evolve: amplitude trajectory (memory-kernel solver or lattice oracle).
// ---------------------------------------------------------------------------

struct EvolveOpts {
  Ctx ctx;
  double t_max = 0, dt = 0;
  bool driven = true;
  int lattice = 0;
  CLI::Option *o_t_max, *o_dt, *o_driven, *o_lattice;

  void attach(CLI::App* cmd) {
    ctx.attach(cmd);
    o_t_max = cmd->add_option("--t_max", t_max, "integration horizon [1/h]");
    o_dt = cmd->add_option("--dt", dt,
                           "time step; snapped to divide the drive period "
                           "(default: T/64 driven, 0.05/h undriven)");
    o_driven = cmd->add_flag("--driven,!--undriven", driven,
                             "apply the sinusoidal drive (default: driven)");
    o_lattice = cmd->add_option(
        "--lattice_size", lattice,
        "integrate an L x L reservoir directly instead of the memory kernel");
  }

  void run() {
    ctx.resolve_params();
    const bool drv = ctx.boolean(o_driven, driven, "driven", true);
    const double tm = ctx.number(o_t_max, t_max, "t_max", 20.0 / ctx.p.h);
    const double step = ctx.number(o_dt, dt, "dt", ctx.default_dt(drv));
    const int lat = ctx.integer(o_lattice, lattice, "lattice_size", 0);
    ctx.prepare_out();

    fq_trajectory* raw = nullptr;
    check(lat > 0 ? fq_lattice_oracle(&ctx.p, lat, tm, step, drv, &raw)
                  : fq_evolve(&ctx.p, tm, step, drv, &raw));
    handle<fq_trajectory> tr(raw);

    const fs::path csv = ctx.out_file("trajectory.csv");
    check(fq_trajectory_write_csv(tr.get(), csv.c_str()));

    json j{{"format_version", 1},
           {"params", params_json(ctx.p)},
           {"driven", drv},
           {"t_max_requested", tm},
           {"solver", lat > 0 ? "lattice_oracle" : "memory_kernel"},
           {"files", {csv.string()}}};
    if (lat > 0) j["lattice_size"] = lat;
    j.update(trajectory_stats(tr.get()));
    write_json(ctx.out_file("evolve.json"), j);
  }
};

// ---------------------------------------------------------------------------
// qfi: Fisher-information series along a trajectory.
// ---------------------------------------------------------------------------

struct QfiOpts {
  Ctx ctx;
  double t_max = 0, dt = 0;
  bool driven = true, markovian = false;
  CLI::Option *o_t_max, *o_dt, *o_driven, *o_markovian;

  void attach(CLI::App* cmd) {
    ctx.attach(cmd);
    o_t_max = cmd->add_option("--t_max", t_max, "integration horizon [1/h]");
    o_dt = cmd->add_option("--dt", dt,
                           "time step (default: T/64 driven, 0.05/h undriven)");
    o_driven = cmd->add_flag("--driven,!--undriven", driven,
                             "apply the sinusoidal drive (default: driven)");
    o_markovian = cmd->add_flag(
        "--markovian", markovian,
        "append the closed-form Markovian QFI as a comparison column");
  }

  void run() {
    ctx.resolve_params();
    const bool drv = ctx.boolean(o_driven, driven, "driven", true);
    const bool mark = ctx.boolean(o_markovian, markovian, "markovian", false);
    const double tm = ctx.number(o_t_max, t_max, "t_max", 40.0 / ctx.p.h);
    const double step = ctx.number(o_dt, dt, "dt", ctx.default_dt(drv));
    ctx.prepare_out();

    fq_trajectory* traw = nullptr;
    check(fq_evolve(&ctx.p, tm, step, drv, &traw));
    handle<fq_trajectory> tr(traw);
    fq_qfi_series* sraw = nullptr;
    check(fq_qfi_from_trajectory(tr.get(), ctx.p.n_atoms, &sraw));
    handle<fq_qfi_series> series(sraw);

    double kappa = -1.0, delta = 0.0;
    if (mark) check(fq_markovian_params(&ctx.p, &kappa, &delta));

    const fs::path csv = ctx.out_file("qfi.csv");
    check(fq_qfi_series_write_csv(series.get(), csv.c_str(),
                                  mark ? kappa : -1.0));

    const std::size_t n = fq_qfi_series_size(series.get());
    double t_last = 0, f_last = 0, f1_last = 0, f2_last = 0;
    check(fq_qfi_series_point(series.get(), n - 1, &t_last, &f_last, &f1_last,
                              &f2_last));
    double t_best = 0, f_best = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double t = 0, f = 0, f1 = 0, f2 = 0;
      check(fq_qfi_series_point(series.get(), i, &t, &f, &f1, &f2));
      if (f > f_best) {
        f_best = f;
        t_best = t;
      }
    }

    json j{{"format_version", 1},
           {"params", params_json(ctx.p)},
           {"driven", drv},
           {"t_max_requested", tm},
           {"dt", fq_trajectory_dt(tr.get())},
           {"n_points", n},
           {"final", {{"t", t_last},
                      {"f_total", f_last},
                      {"f1", f1_last},
                      {"f2", f2_last}}},
           {"max", {{"t", t_best}, {"f_total", f_best}}},
           {"files", {csv.string()}}};
    if (mark) j["markovian"] = {{"kappa", kappa}, {"delta", delta}};
    write_json(ctx.out_file("qfi.json"), j);
  }
};

// ---------------------------------------------------------------------------
// spectrum: FBS branches against the drive amplitude or frequency.
// ---------------------------------------------------------------------------

struct SpectrumOpts {
  Ctx ctx;
  std::string axis = "A";
  double from = 0, to = 0, step = 0.1;
  int n_max = 0, workers = 0;
  CLI::Option *o_axis, *o_from, *o_to, *o_step, *o_n_max, *o_workers;

  void attach(CLI::App* cmd) {
    ctx.attach(cmd);
    o_axis = cmd->add_option("--axis", axis, "scan axis: A or omega_T")
                 ->check(CLI::IsMember({"A", "omega_T"}));
    o_from = cmd->add_option("--from", from, "first axis value [h]");
    o_to = cmd->add_option("--to", to, "last axis value [h]");
    o_step = cmd->add_option("--step", step, "axis increment (default 0.1)");
    o_n_max = cmd->add_option("--n_max", n_max,
                              "Fourier truncation order (0 = automatic)");
    o_workers = cmd->add_option("--workers", workers,
                                "scan-point parallelism (0 = automatic)");
  }

  void run() {
    ctx.resolve_params();
    const std::string ax = ctx.text(o_axis, axis, "axis", "A");
    if (ax != "A" && ax != "omega_T")
      fail(2, "spectrum: axis must be A or omega_T, got '" + ax + "'");
    if (!o_from->count() && !(ctx.cfg && fq_config_has(ctx.cfg, "from")))
      fail(2, "spectrum: --from is required (or config key 'from')");
    if (!o_to->count() && !(ctx.cfg && fq_config_has(ctx.cfg, "to")))
      fail(2, "spectrum: --to is required (or config key 'to')");
    const double lo = ctx.number(o_from, from, "from", 0.0);
    const double hi = ctx.number(o_to, to, "to", 0.0);
    const double inc = ctx.number(o_step, step, "step", 0.1);
    if (inc <= 0.0) fail(2, "spectrum: step must be > 0");
    if (hi < lo) fail(2, "spectrum: 'to' must be >= 'from'");
    const int nm = ctx.integer(o_n_max, n_max, "n_max", 0);
    const int wk = ctx.integer(o_workers, workers, "workers", 0);
    ctx.prepare_out();

    std::vector<double> values;
    for (double v = lo; v <= hi + 1e-9 * inc; v += inc) values.push_back(v);

    fq_scan* raw = nullptr;
    check(fq_scan_spectrum(&ctx.p,
                           ax == "A" ? FQ_AXIS_AMPLITUDE : FQ_AXIS_OMEGA_T,
                           values.data(), values.size(), nm, wk, &raw));
    handle<fq_scan> scan(raw);

    const fs::path branches = ctx.out_file("spectrum_branches.csv");
    const fs::path edges = ctx.out_file("spectrum_edges.csv");
    check(fq_scan_write_csv(scan.get(), branches.c_str(), edges.c_str()));

    std::size_t with_fbs = 0, max_branches = 0;
    for (std::size_t i = 0; i < fq_scan_size(scan.get()); ++i) {
      double v = 0;
      std::size_t nb = 0;
      check(fq_scan_point(scan.get(), i, &v, &nb, nullptr, nullptr, 0));
      if (nb > 0) ++with_fbs;
      max_branches = std::max(max_branches, nb);
    }

    write_json(ctx.out_file("spectrum.json"),
               {{"format_version", 1},
                {"params", params_json(ctx.p)},
                {"axis", ax},
                {"from", lo},
                {"to", hi},
                {"step", inc},
                {"n_points", values.size()},
                {"points_with_fbs", with_fbs},
                {"max_branches", max_branches},
                {"files", {branches.string(), edges.string()}}});
  }
};

// ---------------------------------------------------------------------------
// fbs: bound states at one parameter point.
// ---------------------------------------------------------------------------

struct FbsOpts {
  Ctx ctx;
  int n_max = 0;
  bool derivatives = false;
  double delta = -1.0;
  CLI::Option *o_n_max, *o_derivatives, *o_delta;

  void attach(CLI::App* cmd) {
    ctx.attach(cmd);
    o_n_max = cmd->add_option("--n_max", n_max,
                              "Fourier truncation order (0 = automatic)");
    o_derivatives = cmd->add_flag("--derivatives", derivatives,
                                  "include omega0 sensitivities per branch");
    o_delta = cmd->add_option(
        "--delta", delta,
        "finite-difference step for the sensitivities (<= 0: automatic)");
  }

  void run() {
    ctx.resolve_params();
    const int nm = ctx.integer(o_n_max, n_max, "n_max", 0);
    const bool deriv = ctx.boolean(o_derivatives, derivatives, "derivatives",
                                   false);
    const double dstep = ctx.number(o_delta, delta, "delta", -1.0);
    ctx.prepare_out();

    fq_fbs_set* raw = nullptr;
    check(fq_solve_fbs(&ctx.p, nm, &raw));
    handle<fq_fbs_set> set(raw);

    json branches = json::array();
    for (std::size_t i = 0; i < fq_fbs_count(set.get()); ++i) {
      double eps = 0, res = 0;
      check(fq_fbs_info(set.get(), i, &eps, &res));
      json b{{"epsilon_b", eps}, {"residue", res}, {"z2", res * res}};
      if (deriv) {
        double e2 = 0, r2 = 0, deps = 0, dz2 = 0;
        check(fq_fbs_derivatives(&ctx.p, nm, dstep, static_cast<int>(i), &e2,
                                 &r2, &deps, &dz2));
        b["d_epsilon_domega0"] = deps;
        b["d_z2_domega0"] = dz2;
      }
      branches.push_back(std::move(b));
    }

    write_json(ctx.out_file("fbs.json"),
               {{"format_version", 1},
                {"params", params_json(ctx.p)},
                {"n_max_requested", nm},
                {"n_branches", branches.size()},
                {"branches", std::move(branches)}});
  }
};

// ---------------------------------------------------------------------------
// markovian: decay constants, closed-form QFI and its optimum.
// ---------------------------------------------------------------------------

struct MarkovianOpts {
  Ctx ctx;
  double t_r = 0, t_max = 0, dt = 0;
  CLI::Option *o_t_r, *o_t_max, *o_dt;

  void attach(CLI::App* cmd) {
    ctx.attach(cmd);
    o_t_r = cmd->add_option(
        "--t_r", t_r, "total experiment time for the precision bound [1/h]");
    o_t_max = cmd->add_option(
        "--t_max", t_max, "when > 0, also write the QFI series on [0, t_max]");
    o_dt = cmd->add_option("--dt", dt,
                           "series step (default t_max / 500)");
  }

  void run() {
    ctx.resolve_params();
    const double tr = ctx.number(o_t_r, t_r, "t_r", 0.0);
    const double tm = ctx.number(o_t_max, t_max, "t_max", 0.0);
    ctx.prepare_out();

    double kappa = 0, delta = 0;
    check(fq_markovian_params(&ctx.p, &kappa, &delta));
    double t_opt = 0, f_max = 0, domega = 0;
    check(fq_markovian_optimum(kappa, ctx.p.n_atoms, tr, &t_opt, &f_max,
                               &domega));

    json j{{"format_version", 1},
           {"params", params_json(ctx.p)},
           {"kappa", kappa},
           {"delta", delta},
           {"t_r", tr},
           {"t_opt", t_opt},
           {"f_max", f_max}};
    if (std::isfinite(domega)) j["delta_omega_min"] = domega;

    json files = json::array();
    if (tm > 0.0) {
      const double step = ctx.number(o_dt, dt, "dt", tm / 500.0);
      if (step <= 0.0) fail(2, "markovian: dt must be > 0");
      const fs::path csv = ctx.out_file("markovian.csv");
      std::ofstream out(csv);
      if (!out) fail(2, "cannot open " + csv.string() + " for writing");
      out << csv_header(ctx.p, "markovian") << "t,f_markovian\n";
      for (double t = 0.0; t <= tm + 1e-12 * tm; t += step) {
        double f = 0;
        check(fq_markovian_qfi(kappa, ctx.p.n_atoms, t, &f));
        out << fmt(t) << ',' << fmt(f) << '\n';
      }
      if (!out.good()) fail(2, "write failed: " + csv.string());
      files.push_back(csv.string());
    }
    j["files"] = std::move(files);
    write_json(ctx.out_file("markovian.json"), j);
  }
};

// ---------------------------------------------------------------------------
// optimize: invert the residue curve to Z^2(A_opt) = exp(-a/N) per N.
// ---------------------------------------------------------------------------

struct OptimizeOpts {
  Ctx ctx;
  std::string n_list;
  double a = 1.1, tol = 1e-4;
  int branch = 0, n_max = 0, workers = 0;
  CLI::Option *o_n_list, *o_a, *o_tol, *o_branch, *o_n_max, *o_workers;

  void attach(CLI::App* cmd) {
    ctx.attach(cmd);
    o_n_list = cmd->add_option(
        "--n_list", n_list,
        "probe sizes, comma separated with lo:hi ranges (default 4:20)");
    o_a = cmd->add_option("--a", a,
                          "target exponent: Z^2(A_opt) = exp(-a/N) "
                          "(default 1.1)");
    o_tol = cmd->add_option("--tol", tol,
                            "bisection tolerance on Z^2 (default 1e-4)");
    o_branch = cmd->add_option("--branch", branch,
                               "FBS amplitude region to search (0 = lowest)");
    o_n_max = cmd->add_option("--n_max", n_max,
                              "Fourier truncation order (0 = automatic)");
    o_workers = cmd->add_option("--workers", workers,
                                "curve-tabulation parallelism (0 = automatic)");
  }

  void run() {
    ctx.resolve_params();
    const std::vector<int> sizes =
        parse_n_list(ctx.text(o_n_list, n_list, "n_list", "4:20"));
    const double aa = ctx.number(o_a, a, "a", 1.1);
    const double tt = ctx.number(o_tol, tol, "tol", 1e-4);
    const int br = ctx.integer(o_branch, branch, "branch", 0);
    const int nm = ctx.integer(o_n_max, n_max, "n_max", 0);
    const int wk = ctx.integer(o_workers, workers, "workers", 0);
    ctx.prepare_out();

    std::vector<fq_design_result> results(sizes.size());
    check(fq_design_sweep(&ctx.p, sizes.data(), sizes.size(), aa, tt, br, nm,
                          wk, results.data()));

    const fs::path csv = ctx.out_file("design.csv");
    std::ofstream out(csv);
    if (!out) fail(2, "cannot open " + csv.string() + " for writing");
    out << csv_header(ctx.p, "design") << "n,a_opt,z2,y,f_slope\n";

    json rows = json::array();
    std::vector<double> log_n, log_f, log_f_scaled;
    for (const fq_design_result& r : results) {
      // Long-time law at the designed point, on the branch the design
      // targeted (largest-residue match at A_opt).
      fq_params q = ctx.p;
      q.amplitude = r.a_opt;
      q.n_atoms = r.n_atoms;
      fq_fbs_set* sraw = nullptr;
      check(fq_solve_fbs(&q, nm, &sraw));
      handle<fq_fbs_set> set(sraw);
      int best = 0;
      double best_gap = 1e300;
      for (std::size_t i = 0; i < fq_fbs_count(set.get()); ++i) {
        double eps = 0, res = 0;
        check(fq_fbs_info(set.get(), i, &eps, &res));
        const double gap = std::abs(res * res - r.z2);
        if (gap < best_gap) {
          best_gap = gap;
          best = static_cast<int>(i);
        }
      }
      double eps = 0, res = 0, deps = 0, dz2 = 0;
      check(fq_fbs_derivatives(&q, nm, -1.0, best, &eps, &res, &deps, &dz2));
      double f_slope = 0, offset = 0;
      check(fq_long_time_qfi(res * res, deps, dz2, r.n_atoms, &f_slope,
                             &offset));

      out << r.n_atoms << ',' << fmt(r.a_opt) << ',' << fmt(r.z2) << ','
          << fmt(r.y_value) << ',' << fmt(f_slope) << '\n';
      rows.push_back({{"N", r.n_atoms},
                      {"a_opt", r.a_opt},
                      {"z2", r.z2},
                      {"y_value", r.y_value},
                      {"predicted_prefactor", r.predicted_prefactor},
                      {"epsilon_b", eps},
                      {"d_epsilon_domega0", deps},
                      {"d_z2_domega0", dz2},
                      {"f_slope", f_slope},
                      {"offset", offset}});
      if (r.n_atoms > 0 && f_slope > 0.0) {
        log_n.push_back(std::log(r.n_atoms));
        log_f.push_back(std::log(f_slope));
        log_f_scaled.push_back(std::log(f_slope / (deps * deps)));
      }
    }
    if (!out.good()) fail(2, "write failed: " + csv.string());

    // Least-squares slope of y against x.
    auto slope = [](const std::vector<double>& x,
                    const std::vector<double>& y) {
      const double n = static_cast<double>(x.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
      }
      return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };

    json j{{"format_version", 1},
           {"params", params_json(ctx.p)},
           {"a", aa},
           {"tol", tt},
           {"branch", br},
           {"n_list", sizes},
           {"results", std::move(rows)},
           {"files", {csv.string()}}};
    if (log_n.size() >= 2) {
      // Raw N-exponent of the long-time t^2 coefficient, and the exponent
      // after dividing out the quasienergy sensitivity (pure N scaling).
      j["exponent_raw"] = slope(log_n, log_f);
      j["exponent_sensitivity_normalized"] = slope(log_n, log_f_scaled);
    }
    write_json(ctx.out_file("design.json"), j);
  }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"floqmet: frequency-modulated emitters on a square-lattice "
               "photonic reservoir — dynamics, Fisher information, Floquet "
               "bound states and drive design"};
  app.set_help_flag("--help", "print help and exit");
  app.set_version_flag("-V,--version", std::string(fq_version()));
  app.require_subcommand(1);

  EvolveOpts evolve;
  evolve.attach(app.add_subcommand(
      "evolve", "integrate the emitter amplitude c(t) and its omega0 "
                "sensitivity; writes trajectory.csv + evolve.json"));
  QfiOpts qfi;
  qfi.attach(app.add_subcommand(
      "qfi", "quantum Fisher information along a trajectory; writes qfi.csv "
             "+ qfi.json"));
  SpectrumOpts spectrum;
  spectrum.attach(app.add_subcommand(
      "spectrum", "Floquet bound-state branches against A or omega_T; writes "
                  "spectrum_branches.csv + spectrum_edges.csv + "
                  "spectrum.json"));
  FbsOpts fbs;
  fbs.attach(app.add_subcommand(
      "fbs", "Floquet bound states at one parameter point; writes fbs.json"));
  MarkovianOpts markovian;
  markovian.attach(app.add_subcommand(
      "markovian", "Markovian decay constants, closed-form QFI and optimal "
                   "interrogation time; writes markovian.json (+ "
                   "markovian.csv)"));
  OptimizeOpts optimize;
  optimize.attach(app.add_subcommand(
      "optimize", "drive amplitudes meeting Z^2 = exp(-a/N) per probe size; "
                  "writes design.csv + design.json"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (app.got_subcommand("evolve")) evolve.run();
  if (app.got_subcommand("qfi")) qfi.run();
  if (app.got_subcommand("spectrum")) spectrum.run();
  if (app.got_subcommand("fbs")) fbs.run();
  if (app.got_subcommand("markovian")) markovian.run();
  if (app.got_subcommand("optimize")) optimize.run();
  return 0;
}
