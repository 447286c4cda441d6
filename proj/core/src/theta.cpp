#include "kingman/theta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kingman/special.hpp"

namespace kingman {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDefaultTol = 1e-17;

}  // namespace

PhaseTracker::PhaseTracker(Complex anchor_value) {
  if (!(anchor_value.real() > 0.0) || std::abs(anchor_value.imag()) > 1e-12 * anchor_value.real()) {
    throw DomainError("phase-tracking anchor must be real and positive");
  }
  last_arg_ = 0.0;
}

Complex PhaseTracker::log(Complex value) {
  if (value == Complex(0.0, 0.0)) throw PoleProximity("phase tracking through zero");
  const double principal = std::arg(value);
  // pick the sheet closest to the previous argument
  const double shift = std::round((last_arg_ - principal) / kTwoPi);
  const double arg = principal + kTwoPi * shift;
  winding_ = shift;
  last_arg_ = arg;
  return {std::log(std::abs(value)), arg};
}

Complex theta_sign(double theta) {
  if (is_integer_theta(theta)) return std::fmod(theta - 1.0, 2.0) == 0.0 ? 1.0 : -1.0;
  return std::polar(1.0, kPi * (theta - 1.0));
}

Complex theta_sum(Complex z, const ModelParams& p, long K) {
  if (K < 1) throw DomainError("theta_sum requires K >= 1");
  Complex sum(0.0, 0.0);
  for (long k = -K; k <= K; ++k) {
    const Complex w = static_cast<double>(2 * k + 1) * kPi + z;
    const Complex sign = is_integer_theta(p.theta) ? std::pow(theta_sign(p.theta), static_cast<int>(std::abs(k) % 2))
                                                   : std::polar(1.0, kPi * static_cast<double>(k) * (p.theta - 1.0));
    sum += sign * std::exp(-w * w / (2.0 * p.t));
  }
  return sum;
}

long theta_sum_terms(Complex z, const ModelParams& p, double tol) {
  // Omitted terms sit at distance >= (2K+1) pi - |Re z| from -Re z while
  // the dominant term sits within pi of it.
  const double need = 2.0 * p.t * std::log(4.0 / tol);
  const double x = std::abs(z.real());
  long K = 1;
  while (true) {
    const double d = (2.0 * static_cast<double>(K) + 1.0) * kPi - x;
    if (d > 0.0 && d * d - kPi * kPi > need) return K;
    ++K;
  }
}

Complex theta_sum(Complex z, const ModelParams& p, double tol) {
  return theta_sum(z, p, theta_sum_terms(z, p, tol));
}

long triple_product_terms(Complex q, Complex x, double tol) {
  const double aq = std::abs(q);
  if (aq == 0.0) return 1;
  const double spread = std::max(std::abs(x), 1.0 / std::abs(x));
  long K = 1;
  while (std::pow(aq, 2.0 * static_cast<double>(K) - 1.0) * spread / (1.0 - aq * aq) > tol) ++K;
  return K;
}

Complex triple_product(Complex q, Complex x, long K) {
  if (!(std::abs(q) < 1.0)) throw DomainError("triple_product requires |q| < 1");
  if (x == Complex(0.0, 0.0)) throw DomainError("triple_product requires x != 0");
  if (K < 1) throw DomainError("triple_product requires K >= 1");
  Complex prod(1.0, 0.0);
  const Complex q2 = q * q;
  Complex odd = q;   // q^{2m-1}
  Complex even = q2; // q^{2m}
  for (long m = 1; m <= K; ++m) {
    prod *= (1.0 + x * odd) * (1.0 + odd / x) * (1.0 - even);
    odd *= q2;
    even *= q2;
  }
  return prod;
}

Complex jacobi_series(Complex q, Complex x, long N) {
  Complex sum(1.0, 0.0);
  for (long m = 1; m <= N; ++m) {
    const Complex qm = std::pow(q, static_cast<double>(m * m));
    sum += qm * (std::pow(x, static_cast<double>(m)) + std::pow(x, -static_cast<double>(m)));
  }
  return sum;
}

double phi_log_majorant(Complex z, const ModelParams& p, long K) {
  return std::log(2.0) + (kTwoPi * std::abs(z.real()) - 4.0 * kPi * kPi * static_cast<double>(K + 1)) / p.t;
}

long phi_terms(Complex z, const ModelParams& p, double tol) {
  const double ratio = std::exp(-4.0 * kPi * kPi / p.t);
  const double target = std::log(tol * (1.0 - ratio) / 2.0);
  long K = 1;
  while (phi_log_majorant(z, p, K) > target) ++K;
  return K;
}

Complex phi(Complex z, const ModelParams& p, long K) {
  if (K < 1) throw DomainError("phi requires K >= 1");
  if (phi_log_majorant(z, p, K) > std::log(0.5)) {
    throw MajorantFailure("phi: cosh growth defeats the product decay at K = " + std::to_string(K));
  }
  const Complex s = theta_sign(p.theta);
  const double c = 4.0 * kPi * kPi / p.t;
  const Complex a = kTwoPi * z / p.t;
  Complex prod(1.0, 0.0);
  for (long k = 1; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    prod *= 1.0 + s * (std::exp(a - c * kd) + std::exp(-a - c * kd)) + std::exp(-2.0 * c * kd);
  }
  return prod;
}

Complex phi(Complex z, const ModelParams& p) {
  return phi(z, p, phi_terms(z, p, kDefaultTol));
}

double euler_prefactor(const ModelParams& p, long K) {
  if (K < 1) throw DomainError("euler_prefactor requires K >= 1");
  const double c = 4.0 * kPi * kPi / p.t;
  double log_prod = 0.0;
  for (long k = 1; k <= K; ++k) log_prod += std::log1p(-std::exp(-c * static_cast<double>(k)));
  return std::exp(log_prod);
}

double euler_prefactor_tail(const ModelParams& p, long K) {
  const double q = std::exp(-4.0 * kPi * kPi / p.t);
  const double qk = std::pow(q, static_cast<double>(K + 1));
  return std::expm1(qk / ((1.0 - q) * (1.0 - qk)));
}

double euler_prefactor(const ModelParams& p) {
  long K = 1;
  while (euler_prefactor_tail(p, K) > kDefaultTol) ++K;
  return euler_prefactor(p, K);
}

Complex kernel_K(const ThetaArgs& args, BranchMode branch, double pole_floor) {
  const ModelParams& p = args.p;
  const Complex u = (args.z + kPi) / 2.0;
  const Complex c = std::cos(u);
  if (std::abs(c) < pole_floor) throw PoleProximity("kernel_K evaluated at a pole of cos^-(2n+theta)");
  const Complex log_c = branch.kind == BranchMode::Kind::PhaseTracked ? branch.tracker->log(c) : std::log(c);
  const Complex w = kPi + args.z;
  const double power = 2.0 * static_cast<double>(args.n) + p.theta;
  return std::sin(u) * std::exp(-w * w / (2.0 * p.t) - power * log_c);
}

Complex theta_product_form(Complex z, const ModelParams& p) {
  if (!is_integer_theta(p.theta)) throw IntegerThetaRequired("the factored theta form needs integer theta");
  const Complex wp = kPi + z;
  const Complex wm = kPi - z;
  const Complex head = std::exp(-wp * wp / (2.0 * p.t)) + theta_sign(p.theta) * std::exp(-wm * wm / (2.0 * p.t));
  return head * euler_prefactor(p) * phi(z, p);
}

Complex psi(Complex z, long n, const ModelParams& p, BranchMode branch) {
  const Complex c = std::cos(z);
  Complex log_c;
  if (branch.kind == BranchMode::Kind::PhaseTracked) {
    log_c = branch.tracker->log(c);
  } else {
    if (c.real() <= 0.0 && std::abs(c.imag()) <= 1e-15 * std::abs(c)) {
      throw BranchCut("psi: cos z lies on the principal log cut");
    }
    log_c = std::log(c);
  }
  return -2.0 * z * z - (2.0 * static_cast<double>(n) + p.theta) * p.t * log_c;
}

std::vector<double> psi_taylor_coeffs(long n, const ModelParams& p, int m) {
  if (m < 1) throw DomainError("psi_taylor_coeffs requires m >= 1");
  const auto b = bernoulli_even_exact(m);
  const double scale = (2.0 * static_cast<double>(n) + p.theta) * p.t;
  std::vector<double> out(static_cast<std::size_t>(m));
  for (int j = 1; j <= m; ++j) {
    // (-1)^{j+1} 2^{2j} (2^{2j}-1) B_{2j} / (2j (2j)!)
    mpz_class pow4 = 1;
    mpz_mul_2exp(pow4.get_mpz_t(), pow4.get_mpz_t(), static_cast<unsigned long>(2 * j));
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(2 * j));
    mpq_class c = mpq_class(pow4 * (pow4 - 1)) * b[static_cast<std::size_t>(j - 1)] /
                  mpq_class(mpz_class(2 * j) * fact);
    if (j % 2 == 0) c = -c;
    out[static_cast<std::size_t>(j - 1)] = scale * c.get_d();
  }
  out[0] -= 2.0;
  return out;
}

double steep_profile(double y, long n, const ModelParams& p) {
  if (!(y >= 0.0 && y <= kTwoPi)) throw DomainError("steep_profile requires 0 <= y <= 2 pi");
  const double scale = (2.0 * static_cast<double>(n) + p.theta) * p.t / 2.0;
  return -scale * std::log((std::cosh(y) + std::cos(y)) / 2.0);
}

}  // namespace kingman
