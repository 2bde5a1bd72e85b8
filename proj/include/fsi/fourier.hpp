#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace fsi {

using cplx = std::complex<double>;

/// Real periodic function on [0,1) as a truncated Fourier series
///   f(y) = sum_{|k|<=K} c_k exp(2 pi i k y),  c_{-k} = conj(c_k).
class PeriodicField {
 public:
  PeriodicField() : PeriodicField(0) {}
  explicit PeriodicField(int max_mode);

  static PeriodicField constant(double c, int max_mode = 0);
  /// mean + sum_k a_k cos(2 pi k y) + b_k sin(2 pi k y), k = 1..size.
  static PeriodicField from_cos_sin(double mean, const std::vector<double>& a,
                                    const std::vector<double>& b);
  /// Interpolating/least-squares fit from n equispaced samples at y_j = j/n.
  static PeriodicField from_samples(const std::vector<double>& samples, int max_mode);
  /// Real-basis vector [a0, a1, b1, a2, b2, ...] (a0 is the mean).
  static PeriodicField from_real_vector(const Eigen::VectorXd& v);

  int max_mode() const { return K_; }
  cplx coeff(int k) const;
  /// Sets c_k and c_{-k} = conj(c_k). For k = 0 only the real part is kept.
  void set_coeff(int k, cplx c);

  double operator()(double y) const { return derivative(y, 0); }
  double derivative(double y, int order) const;
  /// Value and derivatives 0..n_deriv in one pass.
  void eval(double y, int n_deriv, double* out) const;

  PeriodicField differentiate(int order = 1) const;
  PeriodicField resized(int max_mode) const;
  std::vector<double> sample(int n) const;
  Eigen::VectorXd real_vector() const;

  double mean() const { return coeff(0).real(); }
  /// sup |f| estimated on n equispaced samples.
  double max_abs(int n) const;
  double l2_norm() const;  ///< Parseval
  bool is_zero() const;
  /// Largest deviation from conjugate symmetry of the stored coefficients.
  double symmetry_defect() const;

  PeriodicField& operator+=(const PeriodicField& o);
  PeriodicField& operator-=(const PeriodicField& o);
  PeriodicField& operator*=(double s);
  friend PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
  friend PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
  friend PeriodicField operator*(double s, PeriodicField a) { return a *= s; }
  friend PeriodicField operator*(PeriodicField a, double s) { return a *= s; }

 private:
  int K_ = 0;
  std::vector<cplx> c_;  // index k + K
};

}  // namespace fsi
