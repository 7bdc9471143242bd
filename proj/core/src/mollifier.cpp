#include "parawork/mollifier.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "parawork/error.hpp"
#include "parawork/parallel.hpp"

namespace parawork {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kZetaTable = 8192;
// log(sin x / x) = -sum_r a_r x^{2r}; four terms suffice for |x| <= 0.1.
constexpr std::array<double, 4> kLogSinc{1.0 / 6.0, 1.0 / 180.0, 1.0 / 2835.0, 1.0 / 37800.0};
constexpr double kSmallArg = 0.1;

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// sum_{j >= n} j^{-s} for s >= 4 by 32 explicit terms and Euler-Maclaurin.
double zeta_tail_direct(double s, double n) {
  double acc = 0.0;
  for (int i = 0; i < 32; ++i) acc += std::pow(n + i, -s);
  const double M = n + 32.0;
  acc += std::pow(M, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(M, -s) + s / 12.0 * std::pow(M, -s - 1.0) -
         s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(M, -s - 3.0);
  return acc;
}

}  // namespace

Mollifier::Mollifier(MollifierShape shape) : shape_(shape) {
  require(shape.head >= std::sqrt(0.5) && shape.tail_sum > 0.0 && shape.head + shape.tail_sum < 1.0,
          ErrorKind::BadParams, "mollifier shape needs 1/sqrt(2) <= head, tail_sum > 0, head + tail_sum < 1");
  c_ = shape.tail_sum / (kPi * kPi / 6.0 - 1.0);
  require(c_ / 4.0 < shape.head, ErrorKind::BadParams, "box widths must decrease");
  const double H = shape.head + shape.tail_sum;
  lo_ = 0.5 - 0.5 * H;
  hi_ = 0.5 + 0.5 * H;

  zeta_tail_.assign(kLogSinc.size(), std::vector<double>(kZetaTable + 1, 0.0));
  for (std::size_t r = 0; r < kLogSinc.size(); ++r) {
    const double s = 4.0 * static_cast<double>(r + 1);
    auto& t = zeta_tail_[r];
    t[kZetaTable] = zeta_tail_direct(s, static_cast<double>(kZetaTable));
    for (std::uint64_t n = kZetaTable; n-- > 1;) t[n] = t[n + 1] + std::pow(static_cast<double>(n), -s);
  }

  // Fourier coefficients until the envelope is far below double resolution.
  coeff_.push_back(0.0);
  for (int n = 1;; ++n) {
    const double P = profile_hat_real(n);
    coeff_.push_back((n % 2 == 0 ? 1.0 : -1.0) * P);
    if (n >= 16 && envelope(n) < 1e-19) break;
  }
}

double Mollifier::width(int j) const {
  require(j >= 1, ErrorKind::BadParams, "box index starts at 1");
  return j == 1 ? shape_.head : c_ / (static_cast<double>(j) * j);
}

double Mollifier::tail_moment(int r, std::uint64_t from) const {
  const double zt = from <= kZetaTable ? zeta_tail_[static_cast<std::size_t>(r) - 1][from]
                                       : zeta_tail_direct(4.0 * r, static_cast<double>(from));
  return std::pow(c_, 2.0 * r) * zt;
}

double Mollifier::profile_hat_real(double k) const {
  const double ak = std::abs(k);
  if (ak == 0.0) return 1.0;
  double p = sinc(kPi * ak * shape_.head);
  std::uint64_t j = 2;
  for (; kPi * ak * c_ / (static_cast<double>(j) * j) > kSmallArg; ++j) p *= sinc(kPi * ak * c_ / (static_cast<double>(j) * j));
  // Remaining factors all have argument <= 0.1.
  double log_tail = 0.0;
  const double pk2 = (kPi * ak) * (kPi * ak);
  double pw = 1.0;
  for (std::size_t r = 0; r < kLogSinc.size(); ++r) {
    pw *= pk2;
    log_tail -= kLogSinc[r] * pw * tail_moment(static_cast<int>(r) + 1, j);
  }
  return p * std::exp(log_tail);
}

std::complex<double> Mollifier::profile_hat(double k) const {
  return std::polar(1.0, -kPi * k) * profile_hat_real(k);
}

std::complex<double> Mollifier::hat(double xi1, double xi2) const { return profile_hat(xi1) * profile_hat(xi2); }

double Mollifier::profile(double t) const {
  if (t <= lo_ || t >= hi_) return 0.0;
  double acc = 1.0;
  for (std::size_t n = 1; n < coeff_.size(); ++n) acc += 2.0 * coeff_[n] * std::cos(2.0 * kPi * n * t);
  return std::max(acc, 0.0);
}

double Mollifier::profile_cdf(double t) const {
  if (t <= lo_) return 0.0;
  if (t >= hi_) return 1.0;
  double acc = t;
  for (std::size_t n = 1; n < coeff_.size(); ++n) acc += coeff_[n] * std::sin(2.0 * kPi * n * t) / (kPi * n);
  return std::clamp(acc, 0.0, 1.0);
}

double Mollifier::box_integral(double x0, double x1, double s0, double s1) const {
  // Series rounding can make B dip by ~1e-18 near the support edge.
  return std::max(0.0, profile_cdf(x1) - profile_cdf(x0)) * std::max(0.0, profile_cdf(s1) - profile_cdf(s0));
}

double Mollifier::integral(const ParabolicRect& q) const {
  return box_integral(q.x(), q.x() + q.width(), q.s(), q.s() + q.height());
}

std::vector<double> Mollifier::cell_integrals(int j) const {
  require(j >= 0 && j <= kMaxDepth, ErrorKind::BadConfig, "generation outside the supported range");
  const std::uint64_t nc = cols_at(j), nr = rows_at(j);
  std::vector<double> bx(nc + 1), bs(nr + 1);
  for (std::uint64_t i = 0; i <= nc; ++i) bx[i] = profile_cdf(std::ldexp(static_cast<double>(i), -j));
  for (std::uint64_t i = 0; i <= nr; ++i) bs[i] = profile_cdf(std::ldexp(static_cast<double>(i), -2 * j));
  std::vector<double> out(nc * nr);
  for (std::uint64_t a = 0; a < nc; ++a)
    for (std::uint64_t b = 0; b < nr; ++b) out[a * nr + b] = std::max(0.0, bx[a + 1] - bx[a]) * std::max(0.0, bs[b + 1] - bs[b]);
  return out;
}

double Mollifier::envelope(double k) const {
  const double ak = std::abs(k);
  double log_e = 0.0;
  for (int j = 1;; ++j) {
    const double x = kPi * ak * width(j);
    if (x <= 1.0) break;
    log_e -= std::log(x);
  }
  return std::exp(log_e);
}

double Mollifier::envelope_tail(double a) const {
  require(a >= 0.0, ErrorKind::BadParams, "envelope tail starts at a >= 0");
  // On [kappa_m, kappa_{m+1}) with kappa_j = 1 / (pi h_j), E(k) = e^{-L_m} k^{-m}.
  auto kappa = [&](int j) { return 1.0 / (kPi * width(j)); };
  int m = 0;
  double L = 0.0;
  while (kappa(m + 1) < a) {
    ++m;
    L += std::log(kPi * width(m));
  }
  double lo = a, sum = 0.0;
  for (;;) {
    const double hi = kappa(m + 1);
    double term = 0.0;
    if (m == 0) {
      term = hi - lo;
    } else if (m == 1) {
      term = std::exp(-L) * std::log(hi / lo);
    } else {
      term = std::exp(-L - (m - 1) * std::log(lo)) * (-std::expm1((m - 1) * std::log(lo / hi))) / (m - 1);
    }
    sum += term;
    if (m >= 3 && term <= 1e-17 * sum) break;
    ++m;
    L += std::log(kPi * width(m));
    lo = hi;
  }
  return sum;
}

TailReport mollifier_tail(const Mollifier& phi, double A, double band) {
  require(A >= 1.0, ErrorKind::BadParams, "A must be at least 1");
  require(A <= 1e30, ErrorKind::BadParams, "A beyond the evaluable range (1e30)");
  require(band > 0.0, ErrorKind::BadParams, "quadrature band must be positive");
  TailReport r;
  r.A = A;
  r.radius = std::pow(A, 0.2);
  // Past radius 1e4 the envelope bound alone is used.
  r.truncation_radius = r.radius <= 1e4 ? r.radius + band : r.radius;
  r.target = std::pow(A, -3.0);

  // |phi^| is invariant under sign flips and the swap, so one octant suffices.
  using boost::math::quadrature::gauss;
  const double R0 = r.radius, R1 = r.truncation_radius;
  const auto n_rad = static_cast<std::size_t>(std::ceil(R1 - R0));
  const auto n_ang = n_rad == 0 ? std::size_t{0} : static_cast<std::size_t>(std::ceil(0.25 * kPi * R1));
  const double dr = n_rad ? (R1 - R0) / static_cast<double>(n_rad) : 0.0;
  const double dth = n_ang ? 0.25 * kPi / static_cast<double>(n_ang) : 0.0;
  const auto& xs = gauss<double, 8>::abscissa();
  const auto& ws = gauss<double, 8>::weights();
  std::vector<double> slot(n_ang, 0.0);
  parallel_chunks(n_ang, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t ia = lo; ia < hi; ++ia) {
      double acc = 0.0;
      for (std::size_t ka = 0; ka < 2 * xs.size(); ++ka) {
        const std::size_t na = ka % xs.size();
        const double ua = ka < xs.size() ? xs[na] : -xs[na];
        if (ka >= xs.size() && xs[na] == 0.0) continue;
        const double th = dth * (static_cast<double>(ia) + 0.5 + 0.5 * ua);
        const double ct = std::cos(th), st = std::sin(th);
        double radial = 0.0;
        for (std::size_t ir = 0; ir < n_rad; ++ir)
          for (std::size_t kr = 0; kr < 2 * xs.size(); ++kr) {
            const std::size_t nr = kr % xs.size();
            if (kr >= xs.size() && xs[nr] == 0.0) continue;
            const double ur = kr < xs.size() ? xs[nr] : -xs[nr];
            const double rad = R0 + dr * (static_cast<double>(ir) + 0.5 + 0.5 * ur);
            radial += ws[nr] * rad * std::abs(phi.profile_hat_real(rad * ct) * phi.profile_hat_real(rad * st));
          }
        acc += ws[na] * 0.5 * dr * radial;
      }
      slot[ia] = 0.5 * dth * acc;
    }
  });
  for (double v : slot) r.quadrature += v;
  r.quadrature *= 8.0;

  // Upper step sums for 8 * int_0^inf E(t) G(max(t, sqrt(R1^2 - t^2))) dt,
  // G(a) = int_a^inf E: E(t) falls and the inner lower limit rises on each
  // step, so left values bound the integrand from above.
  const double diag = R1 / std::sqrt(2.0);
  double sum = 0.0, t = 0.0;
  for (;;) {
    const double step = 0.05 + 0.002 * t;
    const double t1 = t + step;
    const double inner = std::max(t, std::sqrt(std::max(0.0, R1 * R1 - t1 * t1)));
    sum += step * phi.envelope(t) * phi.envelope_tail(inner);
    t = t1;
    if (t >= diag) {
      const double g = phi.envelope_tail(t);
      // Beyond the diagonal the rest is at most G(t)^2.
      if (g * g <= 1e-6 * sum || sum == 0.0) {
        sum += g * g;
        break;
      }
    }
  }
  r.remainder = 8.0 * sum;
  r.total = r.quadrature + r.remainder;
  r.certified = r.total <= r.target;
  return r;
}

TailScan scan_tail(const Mollifier& phi, int max_doublings) {
  require(max_doublings >= 0, ErrorKind::BadParams, "max_doublings must be non-negative");
  TailScan scan;
  for (int d = 0; d <= max_doublings; ++d) {
    scan.steps.push_back(mollifier_tail(phi, std::ldexp(1.0, d)));
    if (scan.steps.back().certified) {
      scan.first_certified = scan.steps.back().A;
      break;
    }
  }
  return scan;
}

}  // namespace parawork
