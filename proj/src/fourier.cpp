#include "fsi/fourier.hpp"

#include <cmath>
#include <stdexcept>

#include "fsi/common.hpp"

namespace fsi {

PeriodicField::PeriodicField(int max_mode) : K_(max_mode), c_(2 * max_mode + 1, cplx(0.0, 0.0)) {
  if (max_mode < 0) throw std::invalid_argument("negative mode cap");
}

PeriodicField PeriodicField::constant(double c, int max_mode) {
  PeriodicField f(max_mode);
  f.set_coeff(0, c);
  return f;
}

PeriodicField PeriodicField::from_cos_sin(double mean, const std::vector<double>& a,
                                          const std::vector<double>& b) {
  int K = static_cast<int>(std::max(a.size(), b.size()));
  PeriodicField f(K);
  f.set_coeff(0, mean);
  for (int k = 1; k <= K; ++k) {
    double ak = k - 1 < static_cast<int>(a.size()) ? a[k - 1] : 0.0;
    double bk = k - 1 < static_cast<int>(b.size()) ? b[k - 1] : 0.0;
    f.set_coeff(k, cplx(0.5 * ak, -0.5 * bk));
  }
  return f;
}

PeriodicField PeriodicField::from_samples(const std::vector<double>& samples, int max_mode) {
  const int n = static_cast<int>(samples.size());
  if (2 * max_mode >= n) throw std::invalid_argument("from_samples: need more than 2K samples");
  PeriodicField f(max_mode);
  for (int k = 0; k <= max_mode; ++k) {
    cplx acc(0.0, 0.0);
    const cplx w = std::polar(1.0, -kTwoPi * k / n);
    cplx z(1.0, 0.0);
    for (int j = 0; j < n; ++j) {
      acc += samples[j] * z;
      z *= w;
      if ((j & 63) == 63) z = std::polar(1.0, -kTwoPi * k * double(j + 1) / n);
    }
    f.set_coeff(k, acc / double(n));
  }
  return f;
}

PeriodicField PeriodicField::from_real_vector(const Eigen::VectorXd& v) {
  const int K = static_cast<int>(v.size() - 1) / 2;
  PeriodicField f(K);
  f.set_coeff(0, v(0));
  for (int k = 1; k <= K; ++k) f.set_coeff(k, cplx(0.5 * v(2 * k - 1), -0.5 * v(2 * k)));
  return f;
}

Eigen::VectorXd PeriodicField::real_vector() const {
  Eigen::VectorXd v(2 * K_ + 1);
  v(0) = coeff(0).real();
  for (int k = 1; k <= K_; ++k) {
    v(2 * k - 1) = 2.0 * coeff(k).real();
    v(2 * k) = -2.0 * coeff(k).imag();
  }
  return v;
}

cplx PeriodicField::coeff(int k) const {
  if (k < -K_ || k > K_) return cplx(0.0, 0.0);
  return c_[k + K_];
}

void PeriodicField::set_coeff(int k, cplx c) {
  if (k < 0) {
    k = -k;
    c = std::conj(c);
  }
  if (k > K_) throw std::out_of_range("set_coeff beyond mode cap");
  if (k == 0) {
    c_[K_] = cplx(c.real(), 0.0);
    return;
  }
  c_[K_ + k] = c;
  c_[K_ - k] = std::conj(c);
}

void PeriodicField::eval(double y, int n_deriv, double* out) const {
  for (int p = 0; p <= n_deriv; ++p) out[p] = 0.0;
  out[0] = c_[K_].real();
  const cplx base = std::polar(1.0, kTwoPi * y);
  cplx z(1.0, 0.0);
  for (int k = 1; k <= K_; ++k) {
    z *= base;
    if ((k & 31) == 0) z = std::polar(1.0, kTwoPi * k * y);
    cplx term = c_[K_ + k] * z;
    const cplx ik(0.0, kTwoPi * k);
    for (int p = 0; p <= n_deriv; ++p) {
      out[p] += 2.0 * term.real();
      term *= ik;
    }
  }
}

double PeriodicField::derivative(double y, int order) const {
  double buf[8];
  if (order > 7) throw std::invalid_argument("derivative order > 7");
  eval(y, order, buf);
  return buf[order];
}

PeriodicField PeriodicField::differentiate(int order) const {
  PeriodicField d(K_);
  for (int k = 1; k <= K_; ++k) d.set_coeff(k, coeff(k) * std::pow(cplx(0.0, kTwoPi * k), order));
  if (order == 0) d.set_coeff(0, coeff(0));
  return d;
}

PeriodicField PeriodicField::resized(int max_mode) const {
  PeriodicField r(max_mode);
  for (int k = 0; k <= std::min(K_, max_mode); ++k) r.set_coeff(k, coeff(k));
  return r;
}

std::vector<double> PeriodicField::sample(int n) const {
  std::vector<double> s(n);
  for (int j = 0; j < n; ++j) s[j] = (*this)(double(j) / n);
  return s;
}

double PeriodicField::max_abs(int n) const {
  double m = 0.0;
  for (int j = 0; j < n; ++j) m = std::max(m, std::abs((*this)(double(j) / n)));
  return m;
}

double PeriodicField::l2_norm() const {
  double s = 0.0;
  for (const auto& c : c_) s += std::norm(c);
  return std::sqrt(s);
}

bool PeriodicField::is_zero() const {
  for (const auto& c : c_)
    if (c != cplx(0.0, 0.0)) return false;
  return true;
}

double PeriodicField::symmetry_defect() const {
  double d = std::abs(c_[K_].imag());
  for (int k = 1; k <= K_; ++k) d = std::max(d, std::abs(c_[K_ - k] - std::conj(c_[K_ + k])));
  return d;
}

PeriodicField& PeriodicField::operator+=(const PeriodicField& o) {
  if (o.K_ > K_) *this = resized(o.K_);
  for (int k = -o.K_; k <= o.K_; ++k) c_[k + K_] += o.c_[k + o.K_];
  return *this;
}

PeriodicField& PeriodicField::operator-=(const PeriodicField& o) {
  if (o.K_ > K_) *this = resized(o.K_);
  for (int k = -o.K_; k <= o.K_; ++k) c_[k + K_] -= o.c_[k + o.K_];
  return *this;
}

PeriodicField& PeriodicField::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

}  // namespace fsi
