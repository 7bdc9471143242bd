#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>

#include "parawork/error.hpp"
#include "parawork/fft.hpp"
#include "parawork/parallel.hpp"
#include "parawork/pgeom.hpp"

namespace parawork {

namespace {

using boost::math::quadrature::gauss;
using Quad = std::array<double, 4>;  // monomials (i, j) in order 00, 01, 10, 11

// (1/p_ij) * integral_0^L c^{i+1} t^j (c^2 + t^2)^{-sigma/2} dt for all four
// (i, j), where p_ij = i + j + 2 - sigma. This is one edge of the polar
// decomposition of the corner integral; panels double in length from the
// natural scale c so the integrand is resolved near t = 0 and in the tail.
Quad edge_integrals(double c, double L, double sigma, bool swap) {
  Quad out{};
  if (c <= 0.0 || L <= 0.0) return out;
  auto accumulate = [&](double a, double b) {
    for (int r = 0; r < 2; ++r) {
      const double v = gauss<double, 12>::integrate(
          [&](double t) { return (r ? t : 1.0) * std::pow(c * c + t * t, -0.5 * sigma); }, a, b);
      if (!swap) {
        // c is the first coordinate, t the second: c^{i+1} t^j with j = r.
        out[0 * 2 + r] += c * v;      // i = 0
        out[1 * 2 + r] += c * c * v;  // i = 1
      } else {
        // c is the second coordinate, t the first: t^i c^{j+1} with i = r.
        out[r * 2 + 0] += c * v;      // j = 0
        out[r * 2 + 1] += c * c * v;  // j = 1
      }
    }
  };
  double a = 0.0, b = std::min(c, L);
  accumulate(a, b);
  while (b < L) {
    a = b;
    b = std::min(2.0 * b, L);
    accumulate(a, b);
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i * 2 + j] /= (i + j + 2 - sigma);
  return out;
}

// F_ij(A, B) = integral over [0, A] x [0, B] of a^i b^j |(a, b)|^-sigma, A, B >= 0.
Quad corner_integrals(double A, double B, double sigma) {
  Quad out{};
  if (A <= 0.0 || B <= 0.0) return out;
  const Quad e1 = edge_integrals(A, B, sigma, false);
  const Quad e2 = edge_integrals(B, A, sigma, true);
  for (int k = 0; k < 4; ++k) out[k] = e1[k] + e2[k];
  return out;
}

// Signed extension to all quadrants: G_ij(a, b) = sgn(a)^{i+1} sgn(b)^{j+1} F_ij(|a|, |b|).
Quad signed_corner(double a, double b, double sigma) {
  Quad f = corner_integrals(std::abs(a), std::abs(b), sigma);
  const double sa = a < 0 ? -1.0 : 1.0, sb = b < 0 ? -1.0 : 1.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double sign = (i == 0 ? sa : 1.0) * (j == 0 ? sb : 1.0);
      f[i * 2 + j] *= sign;
    }
  return f;
}

std::vector<double> breakpoints(double center, double half) {
  std::vector<double> v{center - half, center, center + half};
  if (center - half < 0.0 && 0.0 < center + half && center != 0.0) v.push_back(0.0);
  std::sort(v.begin(), v.end());
  return v;
}

// Tent density (1 - |u - c| / half) / half on one side of its peak, as alpha0 + alpha1 u.
std::array<double, 2> tent_linear(double c, double half, double mid) {
  if (mid < c) return {(1.0 - c / half) / half, 1.0 / (half * half)};
  return {(1.0 + c / half) / half, -1.0 / (half * half)};
}

double kernel_exact(double dx, double ds, double w, double h, double sigma) {
  const auto xs = breakpoints(dx, w), ss = breakpoints(ds, h);
  std::vector<Quad> g(xs.size() * ss.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t k = 0; k < ss.size(); ++k) g[i * ss.size() + k] = signed_corner(xs[i], ss[k], sigma);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const auto al = tent_linear(dx, w, 0.5 * (xs[i] + xs[i + 1]));
    for (std::size_t k = 0; k + 1 < ss.size(); ++k) {
      const auto be = tent_linear(ds, h, 0.5 * (ss[k] + ss[k + 1]));
      const Quad& g11 = g[(i + 1) * ss.size() + k + 1];
      const Quad& g01 = g[i * ss.size() + k + 1];
      const Quad& g10 = g[(i + 1) * ss.size() + k];
      const Quad& g00 = g[i * ss.size() + k];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const int idx = a * 2 + b;
          total += al[a] * be[b] * (g11[idx] - g01[idx] - g10[idx] + g00[idx]);
        }
    }
  }
  return total;
}

// Tent-weighted Gauss-Legendre on each half of both tents.
double kernel_quadrature(double dx, double ds, double w, double h, double sigma) {
  const auto& nodes = gauss<double, 10>::abscissa();
  const auto& weights = gauss<double, 10>::weights();
  // Full symmetric rule on [-1, 1] from the stored half.
  std::vector<double> tn, tw;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] == 0.0) {
      tn.push_back(0.0);
      tw.push_back(weights[i]);
    } else {
      tn.push_back(nodes[i]);
      tw.push_back(weights[i]);
      tn.push_back(-nodes[i]);
      tw.push_back(weights[i]);
    }
  }
  // Points and weights on [-1, 1] against the tent 1 - |u|: halves [-1, 0] and [0, 1].
  std::vector<double> un, uw;
  for (int side = 0; side < 2; ++side)
    for (std::size_t i = 0; i < tn.size(); ++i) {
      const double u = side == 0 ? -0.5 + 0.5 * tn[i] : 0.5 + 0.5 * tn[i];
      un.push_back(u);
      uw.push_back(0.5 * tw[i] * (1.0 - std::abs(u)));
    }
  double acc = 0.0;
  for (std::size_t i = 0; i < un.size(); ++i) {
    const double a = dx + w * un[i];
    double row = 0.0;
    for (std::size_t k = 0; k < un.size(); ++k) {
      const double b = ds + h * un[k];
      row += uw[k] * std::pow(a * a + b * b, -0.5 * sigma);
    }
    acc += uw[i] * row;
  }
  return acc;
}

// Centre value plus the second-order tent variance correction.
double kernel_taylor(double dx, double ds, double w, double h, double sigma) {
  const double r2 = dx * dx + ds * ds;
  const double f = std::pow(r2, -0.5 * sigma);
  const double base = -sigma * f / r2;
  const double faa = base + sigma * (sigma + 2) * dx * dx * f / (r2 * r2);
  const double fbb = base + sigma * (sigma + 2) * ds * ds * f / (r2 * r2);
  return f + 0.5 * (w * w / 6.0 * faa + h * h / 6.0 * fbb);
}

void check_sigma(double sigma) {
  require(sigma > 0.0 && sigma < 2.0, ErrorKind::BadExponent, "Riesz exponent must satisfy 0 < sigma < 2");
}

constexpr std::int64_t kNearCols = 2;
constexpr double kNearRowsInWidths = 4.0;
constexpr double kFarInWidths = 16.0;

}  // namespace

double cell_pair_kernel(int m, std::int64_t dix, std::int64_t dis, double sigma) {
  check_sigma(sigma);
  const double w = std::ldexp(1.0, -m), h = std::ldexp(1.0, -2 * m);
  const double dx = static_cast<double>(std::llabs(dix)) * w, ds = static_cast<double>(std::llabs(dis)) * h;
  if (std::llabs(dix) <= kNearCols && ds <= kNearRowsInWidths * w) return kernel_exact(dx, ds, w, h, sigma);
  if (dx * dx + ds * ds >= kFarInWidths * kFarInWidths * w * w) return kernel_taylor(dx, ds, w, h, sigma);
  return kernel_quadrature(dx, ds, w, h, sigma);
}

double riesz_fourier_constant(double sigma) {
  return std::pow(std::numbers::pi, sigma - 1.0) * std::tgamma((2.0 - sigma) / 2.0) / std::tgamma(sigma / 2.0);
}

MeasureFourier::MeasureFourier(const GridMeasure& mu) : m_(mu.depth()) {
  const std::uint64_t cols = cols_at(m_), rows = rows_at(m_);
  col_start_.assign(cols + 1, 0);
  for (std::uint64_t i = 0; i < cols; ++i) {
    for (std::uint64_t k = 0; k < rows; ++k) {
      const double v = mu.weight(i * rows + k);
      if (v != 0.0) {
        row_.push_back(static_cast<std::uint32_t>(k));
        w_.push_back(v);
      }
    }
    col_start_[i + 1] = row_.size();
  }
}

std::complex<double> MeasureFourier::operator()(double xi1, double xi2) const {
  const std::uint64_t cols = cols_at(m_), rows = rows_at(m_);
  const double w = std::ldexp(1.0, -m_), h = std::ldexp(1.0, -2 * m_);
  auto sinc = [](double t) { return std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t; };
  const double pi = std::numbers::pi;
  // Row phases exp(-2 pi i s_k xi2) at centres s_k = (k + 1/2) h, by recurrence
  // re-seeded every 256 steps.
  std::vector<std::complex<double>> ph(rows);
  const std::complex<double> step = std::polar(1.0, -2.0 * pi * h * xi2);
  for (std::uint64_t k = 0; k < rows; ++k) {
    if (k % 256 == 0) {
      ph[k] = std::polar(1.0, -2.0 * pi * (static_cast<double>(k) + 0.5) * h * xi2);
    } else {
      ph[k] = ph[k - 1] * step;
    }
  }
  std::complex<double> acc{};
  for (std::uint64_t i = 0; i < cols; ++i) {
    if (col_start_[i] == col_start_[i + 1]) continue;
    std::complex<double> colsum{};
    for (std::uint64_t t = col_start_[i]; t < col_start_[i + 1]; ++t) colsum += w_[t] * ph[row_[t]];
    acc += colsum * std::polar(1.0, -2.0 * pi * (static_cast<double>(i) + 0.5) * w * xi1);
  }
  return acc * sinc(pi * xi1 * w) * sinc(pi * xi2 * h);
}

std::complex<double> measure_fourier(const GridMeasure& mu, double xi1, double xi2) {
  return MeasureFourier(mu)(xi1, xi2);
}

EnergyReport riesz_energy(const GridMeasure& mu, double sigma, EnergyMode mode) {
  check_sigma(sigma);
  const int m = mu.depth();
  const std::uint64_t cols = cols_at(m), rows = rows_at(m);
  const auto corr = cols * rows <= 4096 ? autocorrelate2d_direct(mu.weights(), cols, rows)
                                        : autocorrelate2d(mu.weights(), cols, rows);
  const std::uint64_t ocols = 2 * rows - 1;
  // Kernel values depend on |dix|, |dis| only; fill the quarter table where needed.
  std::vector<double> table(cols * rows, -1.0);
  std::vector<std::uint8_t> needed(cols * rows, 0);
  for (std::uint64_t i = 0; i < 2 * cols - 1; ++i)
    for (std::uint64_t k = 0; k < ocols; ++k)
      if (corr[i * ocols + k] > 0.0) {
        const auto di = static_cast<std::uint64_t>(std::llabs(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(cols - 1)));
        const auto dk = static_cast<std::uint64_t>(std::llabs(static_cast<std::int64_t>(k) - static_cast<std::int64_t>(rows - 1)));
        needed[di * rows + dk] = 1;
      }
  parallel_chunks(cols * rows, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t)
      if (needed[t])
        table[t] = cell_pair_kernel(m, static_cast<std::int64_t>(t / rows), static_cast<std::int64_t>(t % rows), sigma);
  }, 256);

  double energy = 0.0;
  for (std::uint64_t i = 0; i < 2 * cols - 1; ++i)
    for (std::uint64_t k = 0; k < ocols; ++k) {
      const double c = corr[i * ocols + k];
      if (c <= 0.0) continue;
      const auto di = static_cast<std::uint64_t>(std::llabs(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(cols - 1)));
      const auto dk = static_cast<std::uint64_t>(std::llabs(static_cast<std::int64_t>(k) - static_cast<std::int64_t>(rows - 1)));
      energy += c * table[di * rows + dk];
    }

  EnergyReport r;
  r.sigma = sigma;
  r.direct = energy;
  if (mode == EnergyMode::DirectAndFourier) {
    // c(2, sigma) * integral over |xi| <= R of |mu^|^2 |xi|^{sigma - 2}, in polar
    // coordinates. Radial panels have width 1/2; on the first one u = r^sigma
    // absorbs the weight r^{sigma - 1}, which is singular at 0 when sigma < 1.
    constexpr double kRadius = 32.0;
    constexpr int kAngles = 128;  // over [0, pi); |mu^(-xi)| = |mu^(xi)|
    constexpr double kPanel = 0.5;
    const MeasureFourier ft(mu);
    const double pi = std::numbers::pi;
    std::vector<double> per_angle(kAngles, 0.0);
    parallel_chunks(kAngles, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t t = lo; t < hi; ++t) {
        const double th = pi * (static_cast<double>(t) + 0.5) / kAngles;
        const double ct = std::cos(th), st = std::sin(th);
        auto g = [&](double rr) { return std::norm(ft(rr * ct, rr * st)); };
        double radial = gauss<double, 8>::integrate(
                            [&](double u) { return g(std::pow(u, 1.0 / sigma)); }, 0.0, std::pow(kPanel, sigma)) /
                        sigma;
        for (double a = kPanel; a < kRadius; a += kPanel)
          radial += gauss<double, 8>::integrate([&](double rr) { return g(rr) * std::pow(rr, sigma - 1.0); }, a,
                                                std::min(a + kPanel, kRadius));
        per_angle[t] = radial;
      }
    });
    double s = 0.0;
    for (double v : per_angle) s += v;
    r.fourier_side = riesz_fourier_constant(sigma) * 2.0 * (pi / kAngles) * s;
    r.fourier_radius = kRadius;
  }
  return r;
}

}  // namespace parawork
