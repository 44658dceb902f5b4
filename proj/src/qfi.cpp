// Copyright (c) the floqmet developers.
// SPDX-License-Identifier: Apache-2.0

#include "floqmet/qfi.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include "floqmet/errors.hpp"

namespace floqmet {

using cd = std::complex<double>;

namespace {

constexpr double kEigenvalueCutoff = 1e-14; // relative to the block trace
constexpr double kPopulationClamp = 1e-12;

// Keep |c|^2 inside (0, 1) so the coherence block stays strictly positive
// semidefinite under the closed-form eigendecomposition.
cd clamp_amplitude(cd c) {
  double p = std::norm(c);
  if (p > 1.0 - kPopulationClamp) {
    if (p == 0.0) return c;
    return c * std::sqrt((1.0 - kPopulationClamp) / p);
  }
  if (p < kPopulationClamp) {
    if (p == 0.0) return cd(std::sqrt(kPopulationClamp), 0.0);
    return c * std::sqrt(kPopulationClamp / p);
  }
  return c;
}

} // namespace

double qfi_f2(double p, double dp, int n_atoms) {
  if (n_atoms < 1) throw ConfigError("qfi_f2: N must be >= 1");
  if (n_atoms == 1 || dp == 0.0) return 0.0;
  const double n = n_atoms;
  p = std::clamp(p, kPopulationClamp, 1.0 - kPopulationClamp);
  const double q = 1.0 - p;
  const double term1 =
      (n * p * std::pow(q, n) + p - 1.0) / ((p - 1.0) * (p - 1.0));
  const double term2 = n * std::pow(p, n - 1.0);
  return -(n * dp * dp / (2.0 * p)) * (term1 + term2);
}

// Fisher information of the 2x2 block
//   rho1 = 1/2 [ p^N        c^N            ]
//              [ conj(c)^N  1 + (1 - p)^N  ]
// in the {|e...e>, |g...g>} pair, with p = |c|^2.  Eigen-decomposition is
// closed form; eigenvector derivatives use first-order perturbation theory
// in the <v_i | dv_i> = 0 gauge, in which the spectral QFI sum reads
//   F = sum_i dl_i^2 / l_i + 4 sum_i l_i <dv_i|dv_i>
//       - 8 sum_{i != j} l_i l_j / (l_i + l_j) |<v_i|dv_j>|^2 .
double qfi_f1(cd c, cd dc, int n_atoms) {
  if (n_atoms < 1) throw ConfigError("qfi_f1: N must be >= 1");
  const double n = n_atoms;
  c = clamp_amplitude(c);
  const double p = std::norm(c);
  const double q = 1.0 - p;
  const double dp = 2.0 * std::real(std::conj(c) * dc);

  const double pn = std::pow(p, n);
  const double qn = std::pow(q, n);
  const cd cn = std::pow(c, n_atoms);

  const double a = 0.5 * pn;
  const double d = 0.5 * (1.0 + qn);
  const cd b = 0.5 * cn;

  const double da = 0.5 * n * std::pow(p, n - 1.0) * dp;
  const double dd = -0.5 * n * std::pow(q, n - 1.0) * dp;
  const cd db = 0.5 * n * std::pow(c, n_atoms - 1) * dc;

  // Eigenvalues: lp + lm = a + d, lp - lm = R; the small one through the
  // determinant to avoid cancellation.
  const double r2 = (a - d) * (a - d) + 4.0 * std::norm(b);
  const double r = std::sqrt(r2);
  const double lp = 0.5 * (a + d + r);
  const double lm = lp > 0.0 ? (a * d - std::norm(b)) / lp : 0.0;

  // Eigenvectors (vp | vm) as columns; (b, l - a) is an exact eigenvector
  // when b != 0, otherwise the block is diagonal.
  cd vp0, vp1, vm0, vm1;
  if (std::abs(b) > 0.0) {
    const double np = std::hypot(std::abs(b), lp - a);
    const double nm = std::hypot(std::abs(b), lm - a);
    vp0 = b / np;
    vp1 = cd(lp - a, 0.0) / np;
    vm0 = b / nm;
    vm1 = cd(lm - a, 0.0) / nm;
  } else {
    // a <= d always, so the larger eigenvalue pairs with |g...g>.
    vp0 = 0.0;
    vp1 = 1.0;
    vm0 = 1.0;
    vm1 = 0.0;
  }

  // Block derivative in the eigenbasis: M_ij = <v_i| d(rho1) |v_j>.
  auto sandwich = [&](cd x0, cd x1, cd y0, cd y1) {
    return std::conj(x0) * (da * y0 + db * y1) +
           std::conj(x1) * (std::conj(db) * y0 + dd * y1);
  };
  const double mpp = std::real(sandwich(vp0, vp1, vp0, vp1));
  const double mmm = std::real(sandwich(vm0, vm1, vm0, vm1));
  const cd mpm = sandwich(vp0, vp1, vm0, vm1);

  const double thr = kEigenvalueCutoff * (a + d);
  const bool keep_p = lp > thr;
  const bool keep_m = lm > thr;

  double f = 0.0;
  if (keep_p) f += mpp * mpp / lp;
  if (keep_m) f += mmm * mmm / lm;
  // 4 sum l_i <dv_i|dv_i> with <dv_i|dv_i> = |M_ji|^2 / R^2.
  if (r2 > 0.0) {
    double cross = std::norm(mpm) / r2;
    if (keep_p) f += 4.0 * lp * cross;
    if (keep_m) f += 4.0 * lm * cross;
    if (keep_p && keep_m)
      f -= 16.0 * lp * lm / (lp + lm) * cross;
  }
  return f;
}

std::vector<QfiResult> qfi_series(const AmplitudeTrajectory& traj,
                                  int n_atoms) {
  if (n_atoms < 1) throw ConfigError("qfi_series: N must be >= 1");
  std::vector<QfiResult> out(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const cd c = traj.c[i];
    const cd dc = traj.dc_domega0[i];
    QfiResult& r = out[i];
    r.t = traj.times[i];
    r.f1 = qfi_f1(c, dc, n_atoms);
    r.f2 = qfi_f2(std::norm(c), 2.0 * std::real(std::conj(c) * dc), n_atoms);
    r.f_total = r.f1 + r.f2;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force oracle on the full 2^N density matrix.
// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXcd probe_state(cd c, int n_atoms) {
  const int dim = 1 << n_atoms;
  const double p = std::norm(c);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  // Bit = 1 marks an excited emitter; index 0 is |g...g>.
  for (int idx = 0; idx < dim; ++idx) {
    int m = std::popcount(static_cast<unsigned>(idx));
    rho(idx, idx) = 0.5 * std::pow(p, m) * std::pow(1.0 - p, n_atoms - m);
  }
  rho(0, 0) += 0.5;
  const cd cn = std::pow(c, n_atoms);
  rho(dim - 1, 0) += 0.5 * cn;
  rho(0, dim - 1) += 0.5 * std::conj(cn);
  return rho;
}

struct EigSys {
  Eigen::VectorXd lam;
  Eigen::MatrixXcd vec;
};

EigSys decompose(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  if (es.info() != Eigen::Success)
    throw NumericalError("brute_force_qfi: eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

// Match a perturbed eigensystem to the reference: permute by maximal
// overlap, then rotate inside each degenerate reference cluster with the
// orthogonal-Procrustes solution (which reduces to phase alignment for
// singleton clusters).  Degenerate subspaces of this family are spanned by
// the same basis states at every parameter value, so the aligned finite
// difference of the eigenvectors converges to a smooth gauge.
void align_to_reference(const EigSys& ref, EigSys& per, double cluster_tol) {
  const int dim = static_cast<int>(ref.lam.size());
  Eigen::MatrixXcd overlap = ref.vec.adjoint() * per.vec;

  std::vector<int> match(dim, -1);
  std::vector<bool> used(dim, false);
  for (int i = 0; i < dim; ++i) {
    int best = -1;
    double best_mag = -1.0;
    for (int j = 0; j < dim; ++j) {
      if (used[j]) continue;
      double mag = std::abs(overlap(i, j));
      if (mag > best_mag) {
        best_mag = mag;
        best = j;
      }
    }
    match[i] = best;
    used[best] = true;
  }
  Eigen::VectorXd lam(dim);
  Eigen::MatrixXcd vec(dim, dim);
  for (int i = 0; i < dim; ++i) {
    lam(i) = per.lam(match[i]);
    vec.col(i) = per.vec.col(match[i]);
  }

  for (int start = 0; start < dim;) {
    int end = start + 1;
    while (end < dim && ref.lam(end) - ref.lam(end - 1) <= cluster_tol) ++end;
    const int k = end - start;
    Eigen::MatrixXcd p =
        vec.middleCols(start, k).adjoint() * ref.vec.middleCols(start, k);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        p, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXcd rot = svd.matrixU() * svd.matrixV().adjoint();
    vec.middleCols(start, k) = vec.middleCols(start, k) * rot;
    start = end;
  }
  per.lam = std::move(lam);
  per.vec = std::move(vec);
}

double spectral_qfi(const EigSys& ref, const EigSys& plus,
                    const EigSys& minus, double delta) {
  const int dim = static_cast<int>(ref.lam.size());
  Eigen::VectorXd dlam = (plus.lam - minus.lam) / (2.0 * delta);
  Eigen::MatrixXcd dvec = (plus.vec - minus.vec) / (2.0 * delta);

  const double thr = kEigenvalueCutoff * ref.lam.sum();
  double f = 0.0;
  for (int i = 0; i < dim; ++i) {
    if (ref.lam(i) <= thr) continue;
    f += dlam(i) * dlam(i) / ref.lam(i);
    f += 4.0 * ref.lam(i) * dvec.col(i).squaredNorm();
  }
  Eigen::MatrixXcd mixed = ref.vec.adjoint() * dvec;
  for (int i = 0; i < dim; ++i) {
    if (ref.lam(i) <= thr) continue;
    for (int j = 0; j < dim; ++j) {
      if (ref.lam(j) <= thr) continue;
      f -= 8.0 * ref.lam(i) * ref.lam(j) / (ref.lam(i) + ref.lam(j)) *
           std::norm(mixed(i, j));
    }
  }
  return f;
}

double brute_force_pass(cd c, cd dc, int n_atoms, double delta) {
  EigSys ref = decompose(probe_state(c, n_atoms));
  EigSys plus = decompose(probe_state(c + delta * dc, n_atoms));
  EigSys minus = decompose(probe_state(c - delta * dc, n_atoms));
  double scale = std::max(1.0, ref.lam.cwiseAbs().maxCoeff());
  align_to_reference(ref, plus, 1e-10 * scale);
  align_to_reference(ref, minus, 1e-10 * scale);
  return spectral_qfi(ref, plus, minus, delta);
}

} // namespace

double brute_force_qfi(cd c, cd dc, int n_atoms, double delta) {
  if (n_atoms < 1 || n_atoms > 6)
    throw ConfigError("brute_force_qfi: N must be in [1, 6]");
  if (!(delta > 0.0)) throw ConfigError("brute_force_qfi: delta must be > 0");

  double coarse = brute_force_pass(c, dc, n_atoms, delta);
  double fine = brute_force_pass(c, dc, n_atoms, 0.5 * delta);
  if (std::abs(coarse - fine) > 1e-5 * std::max(std::abs(fine), 1e-12))
    throw NumericalError(
        "brute_force_qfi: step-halving inconsistency, F(delta) = " +
        std::to_string(coarse) + ", F(delta/2) = " + std::to_string(fine));
  return fine;
}

} // namespace floqmet
