#pragma once

#include <vector>

#include "kingman/params.hpp"
#include "kingman/quadrature.hpp"

namespace kingman {

// Heat-kernel theta machinery: h_t(z | theta), the Jacobi triple product,
// phi_t, the kernel K_t and the saddle phase psi_t.

struct ThetaArgs {
  Complex z;
  ModelParams p;
  long n = 0;
};

// Continues log(value) along a sequence of nearby points. The anchor value
// must be real and positive so the continuation starts on the principal
// sheet. State is held by the caller; points must be fed in path order.
class PhaseTracker {
 public:
  explicit PhaseTracker(Complex anchor_value);
  Complex log(Complex value);
  double winding() const { return winding_; }

 private:
  double last_arg_;
  double winding_ = 0.0;  // sheet offset from the principal log, in turns
};

struct BranchMode {
  enum class Kind { Principal, PhaseTracked };
  Kind kind = Kind::Principal;
  PhaseTracker* tracker = nullptr;

  static BranchMode principal() { return {}; }
  static BranchMode tracked(PhaseTracker& t) { return {Kind::PhaseTracked, &t}; }
};

// e^{i pi (theta-1)}, the principal value of (-1)^(theta-1).
Complex theta_sign(double theta);

// sum_{|k| <= K} e^{i pi k (theta-1)} e^{-((2k+1) pi + z)^2 / 2t}
Complex theta_sum(Complex z, const ModelParams& p, long K);
// Same with K chosen so the first omitted term is below `tol` relative to the k in {0, -1} terms.
Complex theta_sum(Complex z, const ModelParams& p, double tol = 1e-17);
long theta_sum_terms(Complex z, const ModelParams& p, double tol);

// prod_{m=1}^{K} (1 + x q^{2m-1})(1 + q^{2m-1}/x)(1 - q^{2m}); needs |q| < 1, x != 0.
Complex triple_product(Complex q, Complex x, long K);
// sum_{|m| <= N} q^{m^2} x^m, the series side of the identity.
Complex jacobi_series(Complex q, Complex x, long N);
// Smallest K with |q|^{2K} max(|x|, 1/|x|) below tol.
long triple_product_terms(Complex q, Complex x, double tol);

// phi_t(z) = prod_{k=1}^{K} [1 + s (e^{(2 pi z - 4 pi^2 k)/t} + e^{(-2 pi z - 4 pi^2 k)/t}) + e^{-8 pi^2 k/t}]
// with s = e^{i pi (theta-1)}. Throws MajorantFailure unless the first
// omitted factor's majorant 2 e^{(2 pi |Re z| - 4 pi^2 (K+1))/t} is below 1/2.
Complex phi(Complex z, const ModelParams& p, long K);
Complex phi(Complex z, const ModelParams& p);  // K from the majorant, truncation below 1e-17
// ln of the majorant of the first omitted factor's deviation from 1.
double phi_log_majorant(Complex z, const ModelParams& p, long K);
long phi_terms(Complex z, const ModelParams& p, double tol);

// prod_{k=1}^{K} (1 - e^{-4 k pi^2 / t})
double euler_prefactor(const ModelParams& p, long K);
double euler_prefactor(const ModelParams& p);
// Relative truncation certificate: sum_{k > K} e^{-4 k pi^2/t} scaled for the product.
double euler_prefactor_tail(const ModelParams& p, long K);

// K_t(z) = e^{-(pi+z)^2/2t} sin u / cos^{2n+theta} u with u = (z+pi)/2.
// Throws PoleProximity when |cos u| < pole_floor.
Complex kernel_K(const ThetaArgs& args, BranchMode branch = {}, double pole_floor = 1e-300);

// [e^{-(pi+z)^2/2t} + s e^{-(pi-z)^2/2t}] E(t) phi_t(z): the factored form of h_t, integer theta.
Complex theta_product_form(Complex z, const ModelParams& p);

// psi_t(z) = -2 z^2 - (2n+theta) t log cos z. Throws BranchCut when the
// principal log is asked to evaluate on its cut.
Complex psi(Complex z, long n, const ModelParams& p, BranchMode branch = {});

// Coefficients of psi_t(z) = sum_{j>=1} a_j z^{2j}, j = 1..m, via
// -log cos z = sum (-1)^{j+1} 2^{2j} (2^{2j}-1) B_{2j} / (2j (2j)!) z^{2j}.
std::vector<double> psi_taylor_coeffs(long n, const ModelParams& p, int m);

// a(y) = -((2n+theta) t / 2) ln((cosh y + cos y) / 2), 0 <= y <= 2 pi.
double steep_profile(double y, long n, const ModelParams& p);

}  // namespace kingman
