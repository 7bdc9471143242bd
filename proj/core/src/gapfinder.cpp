#include "parawork/gapfinder.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "parawork/fft.hpp"
#include "parawork/parallel.hpp"

namespace parawork {

namespace {

constexpr double kPi = std::numbers::pi;

// Gaussian factors below e^{-pi 3.6^2} ~ 2e-18 of the peak are dropped.
constexpr double kGaussReach = 3.6;

double ell_pow(int j, double s) { return std::pow(2.0, -static_cast<double>(j) * s); }

// Average of g(t + u), g(v) = e^{-pi v^2 / eps^2} / eps, over the tent
// density (a - |u|) / a^2 on [-a, a]. Even in t; callers pass |t|.
double tent_gauss(double t, double a, double eps) {
  if (a < 0.05 * eps) {
    const double al = kPi / (eps * eps);
    const double t2 = t * t;
    const double g = std::exp(-al * t2) / eps;
    const double q2 = 4.0 * al * al * t2 - 2.0 * al;
    const double q4 = 16.0 * al * al * al * al * t2 * t2 - 48.0 * al * al * al * t2 + 12.0 * al * al;
    return std::max(0.0, g * (1.0 + a * a / 12.0 * q2 + a * a * a * a / 360.0 * q4));
  }
  // Second antiderivative of g.
  auto H = [&](double u) {
    return 0.5 * u * std::erf(std::sqrt(kPi) * u / eps) + eps / (2.0 * kPi) * std::exp(-kPi * u * u / (eps * eps));
  };
  return std::max(0.0, (H(t + a) - 2.0 * H(t) + H(t - a)) / (a * a));
}

double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

}  // namespace

// ---- parameters ------------------------------------------------------------

double GapParams::auto_B(double A, int T) {
  return std::exp((static_cast<double>(T) * std::numbers::ln2 - 3.0 * std::log(A)) / 6.0);
}

GapParams GapParams::make(double A, std::optional<double> B, int T, double C_frost, double C_sigma) {
  require(std::isfinite(A) && A >= 1.0, ErrorKind::BadParams, "A must be at least 1");
  require(T >= 1 && T <= 60, ErrorKind::BadParams, "T must lie in 1..60");
  require(C_frost >= 1.0 && C_sigma >= 1.0, ErrorKind::BadParams, "C and C_sigma must be at least 1");
  GapParams p;
  p.A = A;
  p.T = T;
  p.B = B.value_or(auto_B(A, T));
  require(std::isfinite(p.B) && p.B > 0.0, ErrorKind::BadParams, "B must be positive");
  // 2^{-T} B^6 <= A^{-3} in logarithms; the slack absorbs rounding of auto_B.
  const double excess = 6.0 * std::log(p.B) - T * std::numbers::ln2 + 3.0 * std::log(A);
  require(excess <= 1e-12, ErrorKind::BadParams,
          "2^{-T} B^6 <= A^{-3} violated (B = " + std::to_string(p.B) + ", largest allowed " +
              std::to_string(auto_B(A, T)) + ")");
  p.C_frost = C_frost;
  p.C_sigma = C_sigma;
  p.delta = std::ldexp(1.0, -3 * T) / 8.0;
  return p;
}

CertifyReport certify(const GapParams& p, const Mollifier& phi) {
  CertifyReport r;
  r.log10_B0 = 5.0 / (p.sigma - 1.5) * std::log10(p.A * p.C_frost * p.C_sigma);
  r.B_meets_B0 = std::log10(p.B) >= r.log10_B0;
  r.T_for_B0 = 6.0 * r.log10_B0 * std::numbers::log2e * std::numbers::ln10 + 3.0 * std::log2(p.A);
  r.tail = mollifier_tail(phi, p.A);
  return r;
}

// ---- parabola and kernel ---------------------------------------------------

ParabolaMeasure::ParabolaMeasure(double A, std::size_t n) : A_(A) {
  require(std::isfinite(A) && A >= 1.0, ErrorKind::BadParams, "A must be at least 1");
  require(n != 1, ErrorKind::BadParams, "a branch needs 0 or at least 2 nodes");
  const double a = 1.0 / (A * A);
  if (n == 0 || a >= 1.0) return;
  const double dz = (1.0 - a) / static_cast<double>(n - 1);
  z_.reserve(2 * n);
  w_.reserve(2 * n);
  for (int sign : {-1, 1})
    for (std::size_t i = 0; i < n; ++i) {
      // Negative branch runs from -1 up to -a, positive from a up to 1.
      const double mag = sign < 0 ? 1.0 - dz * static_cast<double>(i) : a + dz * static_cast<double>(i);
      const double z = sign * (i == n - 1 ? (sign < 0 ? a : 1.0) : mag);
      const double end = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      z_.push_back(z);
      w_.push_back(end * std::sqrt(1.0 + 4.0 * z * z) * dz);
    }
}

double ParabolaMeasure::total() const {
  double t = 0.0;
  for (double w : w_) t += w;
  return t;
}

ParabolaMeasure ParabolaMeasure::mirrored() const {
  ParabolaMeasure out;
  out.A_ = A_;
  out.w_ = w_;
  out.z_.reserve(z_.size());
  for (double z : z_) out.z_.push_back(-z);
  return out;
}

double ParabolaMeasure::arclength_from_origin(double z) {
  return 0.5 * z * std::sqrt(1.0 + 4.0 * z * z) + 0.25 * std::asinh(2.0 * z);
}

double ParabolaMeasure::exact_total(double A) {
  require(A >= 1.0, ErrorKind::BadParams, "A must be at least 1");
  return 2.0 * (arclength_from_origin(1.0) - arclength_from_origin(1.0 / (A * A)));
}

double GaussianKernel::psi(double x, double s) { return std::exp(-kPi * (x * x + s * s)); }

double GaussianKernel::c_psi() { return std::sqrt(std::numbers::ln2 / kPi); }

double GaussianKernel::operator()(double x, double s) const { return psi(x / delta, s / delta) / (delta * delta); }

double GaussianKernel::hat(double xi1, double xi2) const {
  return std::exp(-kPi * delta * delta * (xi1 * xi1 + xi2 * xi2));
}

// ---- spectral gap integral -------------------------------------------------

double spectral_gap_integral(const std::function<std::complex<double>(double, double)>& f, double A, double B,
                             AnnulusQuadrature quad) {
  require(std::isfinite(A) && A >= 1.0 && B > 0.0, ErrorKind::BadAnnulus, "need A >= 1 and B > 0");
  const double r0 = std::pow(A, 0.2), r1 = B * B;
  require(r1 > r0, ErrorKind::BadAnnulus,
          "empty annulus: B^2 = " + std::to_string(r1) + " <= A^{1/5} = " + std::to_string(r0));
  require(quad.angles >= 2 && quad.angles % 2 == 0 && quad.radial_per_unit >= 1, ErrorKind::BadConfig,
          "angles must be even and positive, radial density positive");

  using boost::math::quadrature::gauss;
  const auto& xs = gauss<double, 8>::abscissa();
  const auto& ws = gauss<double, 8>::weights();
  const auto panels = static_cast<std::size_t>(
      std::max(1.0, std::ceil((r1 - r0) * static_cast<double>(quad.radial_per_unit) / 8.0)));
  const double dr = (r1 - r0) / static_cast<double>(panels);
  std::vector<std::pair<double, double>> radial;  // (node, weight * r)
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = r0 + dr * (static_cast<double>(p) + 0.5);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double wgt = 0.5 * dr * ws[i];
      for (double sg : {-1.0, 1.0}) {
        if (sg > 0.0 && xs[i] == 0.0) continue;
        const double r = mid + sg * 0.5 * dr * xs[i];
        radial.emplace_back(r, wgt * r);
      }
    }
  }

  const auto half = static_cast<std::size_t>(quad.angles / 2);
  const double dth = 2.0 * kPi / quad.angles;
  std::vector<double> per_angle(half, 0.0);
  parallel_chunks(half, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t a = lo; a < hi; ++a) {
      const double th = dth * (static_cast<double>(a) + 0.5);
      const double c = std::cos(th), s = std::sin(th);
      double acc = 0.0;
      for (const auto& [r, w] : radial) acc += w * std::norm(f(r * c, r * s));
      per_angle[a] = acc;
    }
  });
  double total = 0.0;
  for (double v : per_angle) total += v;
  // Opposite angles contribute equally.
  return 2.0 * dth * total;
}

double spectral_gap_integral(const GridMeasure& mu, double A, double B, AnnulusQuadrature quad) {
  const MeasureFourier ft(mu);
  return spectral_gap_integral([&](double a, double b) { return ft(a, b); }, A, B, quad);
}

// ---- pipeline --------------------------------------------------------------

GapResult build_gap_measure(const GridSet& k, double s, const GapParams& params, const Mollifier& phi,
                            std::uint64_t seed, AnnulusQuadrature quad) {
  const int m = k.depth();
  const int T = params.T;
  require(T <= m, ErrorKind::BadParams, "generation-T children are finer than the grid");
  const ContentResult cr = content_dp(k, s);
  const ParabolicRect Q = find_dense_rect(k, s, params.delta, m - T);

  GapReport rep;
  rep.params = params;
  rep.s = s;
  rep.dense_rect = Q;
  rep.dense_content = cr.f[static_cast<std::size_t>(Q.j)][Q.index()];

  const int g = Q.j + T;
  const std::uint64_t ncx = cols_at(T), ncs = rows_at(T);
  const double half_cap = 0.5 * ell_pow(g, s);
  std::vector<ParabolicRect> failing;
  rep.children.reserve(ncx * ncs);
  for (std::uint64_t a = 0; a < ncx; ++a)
    for (std::uint64_t b = 0; b < ncs; ++b) {
      ChildReport c;
      c.rect = ParabolicRect{g, (Q.ix << T) + a, (Q.is << (2 * T)) + b};
      c.content = cr.f[static_cast<std::size_t>(g)][c.rect.index()];
      if (!(c.content >= half_cap)) failing.push_back(c.rect);
      rep.children.push_back(c);
    }
  if (!failing.empty()) {
    const auto& f0 = failing.front();
    throw ChildDensityError(failing, std::to_string(failing.size()) + " of " + std::to_string(rep.children.size()) +
                                         " generation-T children have content below ell^s / 2, first (j=" +
                                         std::to_string(f0.j) + ", ix=" + std::to_string(f0.ix) +
                                         ", is=" + std::to_string(f0.is) + ")");
  }

  const GridMeasure mu0 = frostman_below(k.restrict_to(Q), s, g);
  const int d = m - Q.j;       // depth of the blown-up grid
  const int sub = m - g;       // cell levels inside one child
  const std::uint64_t rows_m = rows_at(m), rows_d = rows_at(d);
  const std::uint64_t x0 = Q.ix << d, s0 = Q.is << (2 * d);
  auto child_of = [&](std::uint64_t a, std::uint64_t b) { return (a >> sub) * ncs + (b >> (2 * sub)); };

  for (std::uint64_t a = 0; a < cols_at(d); ++a)
    for (std::uint64_t b = 0; b < rows_d; ++b)
      rep.children[child_of(a, b)].frostman_mass += mu0.weight((x0 + a) * rows_m + s0 + b);

  const std::vector<double> w = phi.cell_integrals(T);
  const double lq = ell_pow(Q.j, s);
  for (std::size_t c = 0; c < rep.children.size(); ++c) {
    auto& ch = rep.children[c];
    require(ch.frostman_mass > 0.0, ErrorKind::InvariantViolation, "Frostman measure vanished on a dense child");
    ch.weight = w[c];
    ch.mass = ch.weight * lq;
  }

  // mu = ell(Q)^{-s} T_Q mu_Q with mu_Q = sum over children of w ell^s / ||mu^0|| mu^0.
  std::vector<double> out(cells_at(d), 0.0);
  for (std::uint64_t a = 0; a < cols_at(d); ++a)
    for (std::uint64_t b = 0; b < rows_d; ++b) {
      const auto& ch = rep.children[child_of(a, b)];
      const double v = mu0.weight((x0 + a) * rows_m + s0 + b);
      if (v > 0.0) out[a * rows_d + b] = (ch.mass / ch.frostman_mass) * v / lq;
    }
  GridMeasure mu(d, std::move(out));

  std::vector<double> at_T(ncx * ncs, 0.0);
  for (std::uint64_t a = 0; a < cols_at(d); ++a)
    for (std::uint64_t b = 0; b < rows_d; ++b) at_T[child_of(a, b)] += mu.weight(a * rows_d + b);
  for (std::size_t c = 0; c < at_T.size(); ++c)
    rep.cell_mass_defect = std::max(rep.cell_mass_defect, std::abs(at_T[c] - w[c]));
  rep.total_mass = mu.total();
  rep.frostman_constant = empirical_frostman(mu, s, BallKind::Parabolic, seed).constant;
  rep.dyadic_ratio = max_dyadic_ratio(mu, s);
  if (params.B * params.B > std::pow(params.A, 0.2))
    rep.spectral_gap_value = spectral_gap_integral(mu, params.A, params.B, quad);
  return GapResult{std::move(mu), std::move(rep)};
}

FourierComparison fourier_comparison(const GridMeasure& mu, const Mollifier& phi, int T,
                                     std::span<const std::pair<double, double>> xi_samples) {
  require(T >= 0, ErrorKind::BadParams, "T must be non-negative");
  const MeasureFourier ft(mu);
  const double scale = std::ldexp(1.0, -T);
  FourierComparison out;
  out.ratios.resize(xi_samples.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_chunks(xi_samples.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto [a, b] = xi_samples[i];
      const double norm = std::hypot(a, b);
      if (norm == 0.0) continue;
      out.ratios[i] = std::abs(ft(a, b) - phi.hat(a, b)) / (norm * scale);
    }
  });
  for (std::size_t i = 0; i < out.ratios.size(); ++i)
    if (!std::isnan(out.ratios[i]) && out.ratios[i] > out.max_ratio) {
      out.max_ratio = out.ratios[i];
      out.worst_xi = xi_samples[i];
    }
  return out;
}

std::vector<std::pair<double, double>> polar_samples(double r_min, double r_max, int radii, int angles) {
  require(r_min > 0.0 && r_max >= r_min && radii >= 1 && angles >= 1, ErrorKind::BadConfig,
          "need 0 < r_min <= r_max and positive counts");
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<std::size_t>(radii) * static_cast<std::size_t>(angles));
  for (int i = 0; i < radii; ++i) {
    const double r = radii == 1 ? r_min : r_min * std::pow(r_max / r_min, static_cast<double>(i) / (radii - 1));
    for (int j = 0; j < angles; ++j) {
      const double th = kPi * j / angles;
      out.emplace_back(r * std::cos(th), r * std::sin(th));
    }
  }
  return out;
}

// ---- functional ------------------------------------------------------------

double convolution_functional(const GridMeasure& mu, const ParabolaMeasure& pi, double delta) {
  require(std::isfinite(delta) && delta > 0.0, ErrorKind::BadDelta, "delta must be positive");
  if (pi.size() == 0) return 0.0;
  const int m = mu.depth();
  const std::uint64_t cols = cols_at(m), rows = rows_at(m);
  const auto corr = cols * rows <= 4096 ? autocorrelate2d_direct(mu.weights(), cols, rows)
                                        : autocorrelate2d(mu.weights(), cols, rows);
  const auto orow = static_cast<std::int64_t>(2 * rows - 1);
  const auto ic = static_cast<std::int64_t>(cols), ir = static_cast<std::int64_t>(rows);
  const double w = std::ldexp(1.0, -m), h = std::ldexp(1.0, -2 * m);
  std::vector<std::uint8_t> live(2 * cols - 1, 0);
  for (std::int64_t dx = 0; dx < 2 * ic - 1; ++dx)
    for (std::int64_t ds = 0; ds < orow; ++ds)
      if (corr[static_cast<std::size_t>(dx * orow + ds)] > 0.0) {
        live[static_cast<std::size_t>(dx)] = 1;
        break;
      }

  const auto nodes = pi.nodes();
  const auto weights = pi.weights();
  std::vector<double> slot(nodes.size(), 0.0);
  parallel_chunks(nodes.size(), [&](std::size_t lo, std::size_t hi) {
    std::vector<double> S;
    for (std::size_t k = lo; k < hi; ++k) {
      const double z = nodes[k], zz = z * z;
      const double reach_s = kGaussReach * delta + h, reach_x = kGaussReach * delta + w;
      const std::int64_t s_lo = std::max<std::int64_t>(-(ir - 1), static_cast<std::int64_t>(std::ceil((zz - reach_s) / h)));
      const std::int64_t s_hi = std::min<std::int64_t>(ir - 1, static_cast<std::int64_t>(std::floor((zz + reach_s) / h)));
      const std::int64_t x_lo = std::max<std::int64_t>(-(ic - 1), static_cast<std::int64_t>(std::ceil((z - reach_x) / w)));
      const std::int64_t x_hi = std::min<std::int64_t>(ic - 1, static_cast<std::int64_t>(std::floor((z + reach_x) / w)));
      if (s_lo > s_hi || x_lo > x_hi) continue;
      S.resize(static_cast<std::size_t>(s_hi - s_lo + 1));
      for (std::int64_t ds = s_lo; ds <= s_hi; ++ds)
        S[static_cast<std::size_t>(ds - s_lo)] = tent_gauss(std::abs(static_cast<double>(ds) * h - zz), h, delta);
      double acc = 0.0;
      for (std::int64_t dx = x_lo; dx <= x_hi; ++dx) {
        const auto row = static_cast<std::size_t>(dx + ic - 1);
        if (!live[row]) continue;
        const double X = tent_gauss(std::abs(static_cast<double>(dx) * w - z), w, delta);
        if (X == 0.0) continue;
        const double* c = corr.data() + row * static_cast<std::size_t>(orow) + static_cast<std::size_t>(s_lo + ir - 1);
        acc += X * dot(c, S.data(), S.size());
      }
      slot[k] = weights[k] * acc;
    }
  }, 16);
  double total = 0.0;
  for (double v : slot) total += v;
  return total;
}

Lemma1Report lemma1_diagnostics(const GridMeasure& mu, const ParabolaMeasure& pi, const GapParams& params,
                                double delta) {
  require(delta > 0.0 && delta < 1.0 / params.B, ErrorKind::BadDelta, "need 0 < delta < 1/B");
  const double fa = convolution_functional(mu, pi, 1.0 / params.A);
  const double fb = convolution_functional(mu, pi, 1.0 / params.B);
  const double fd = convolution_functional(mu, pi, delta);
  Lemma1Report r;
  r.I1 = fa;
  r.I2 = fb - fa;
  r.I3 = fd - fb;
  r.total = fd;
  r.kappa = params.A * fa;
  return r;
}

}  // namespace parawork
