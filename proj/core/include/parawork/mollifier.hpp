#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "parawork/pgeom.hpp"

namespace parawork {

/// Box widths of the one-dimensional profile: h_1 = head and
/// h_j = c / j^2 for j >= 2, with sum_{j >= 2} h_j = tail_sum.
struct MollifierShape {
  double head = 0.75;
  double tail_sum = 0.2;
};

/// phi(x, s) = b(x) b(s), where b is the infinite convolution of the
/// normalised boxes h_j^{-1} 1_{[0, h_j]}, centred on 1/2. b is smooth,
/// non-negative, has integral 1, support [1/2 - H/2, 1/2 + H/2] with
/// H = head + tail_sum < 1, and sup b <= 1 / head. Its transform is the
/// exact product b^(k) = e^{-i pi k} prod_j sinc(pi k h_j).
class Mollifier {
 public:
  Mollifier() : Mollifier(MollifierShape{}) {}
  /// Throws BadParams unless 1/sqrt(2) <= head, tail_sum > 0, H < 1 and
  /// h_2 < head, so that ||phi||_inf <= 2 and the box widths decrease.
  explicit Mollifier(MollifierShape shape);

  const MollifierShape& shape() const noexcept { return shape_; }
  double width(int j) const;  ///< h_j, j >= 1
  double support_lo() const noexcept { return lo_; }
  double support_hi() const noexcept { return hi_; }
  double sup_bound() const noexcept { return 1.0 / (shape_.head * shape_.head); }

  /// P(k) = prod_j sinc(pi k h_j), real and even; b^(k) = e^{-i pi k} P(k).
  double profile_hat_real(double k) const;
  std::complex<double> profile_hat(double k) const;
  std::complex<double> hat(double xi1, double xi2) const;

  /// b(t) and B(t) = integral of b over [0, t], from the Fourier series of
  /// b on [0, 1]; exactly 0 (or 1 for B) outside the support.
  double profile(double t) const;
  double profile_cdf(double t) const;
  double operator()(Point p) const { return profile(p.x) * profile(p.s); }

  /// Integral of phi over [x0, x1] x [s0, s1].
  double box_integral(double x0, double x1, double s0, double s1) const;
  double integral(const ParabolicRect& q) const;
  /// Integral of phi over every generation-j rectangle, indexed like
  /// ParabolicRect::index. Sums to 1 up to rounding.
  std::vector<double> cell_integrals(int j) const;

  /// E(k) = prod_j min(1, 1 / (pi |k| h_j)) >= |P(k)|, non-increasing in |k|.
  double envelope(double k) const;
  /// Integral of E over [a, infinity), a >= 0, in closed form.
  double envelope_tail(double a) const;

 private:
  double tail_moment(int r, std::uint64_t from) const;  // sum_{j >= from} h_j^{2r}

  MollifierShape shape_;
  double c_ = 0.0;
  double lo_ = 0.0, hi_ = 1.0;
  std::vector<double> coeff_;                   // coeff_[n] = (-1)^n P(n), n >= 1
  std::vector<std::vector<double>> zeta_tail_;  // zeta_tail_[r][N] = sum_{j >= N} j^{-4(r+1)}
};

struct TailReport {
  double A = 0.0;
  double radius = 0.0;             ///< A^{1/5}
  double truncation_radius = 0.0;  ///< quadrature covers radius <= |xi| <= truncation_radius
  double quadrature = 0.0;         ///< integral of |phi^| over that band
  double remainder = 0.0;          ///< envelope bound for |xi| >= truncation_radius
  double total = 0.0;
  double target = 0.0;             ///< A^{-3}
  bool certified = false;          ///< total <= target
};

/// Integral of |phi^| over |xi| >= A^{1/5}: quadrature on a band of the given
/// width plus an upper bound for the rest from the product envelope.
/// Beyond radius 1e4 the band is dropped. Throws BadParams unless
/// 1 <= A <= 1e30.
TailReport mollifier_tail(const Mollifier& phi, double A, double band = 4.0);

struct TailScan {
  std::vector<TailReport> steps;  ///< A = 1, 2, 4, ... in order
  std::optional<double> first_certified;
};

/// Doubling scan A = 2^0 .. 2^max_doublings, stopping at the first
/// certified A.
TailScan scan_tail(const Mollifier& phi, int max_doublings = 80);

}  // namespace parawork
