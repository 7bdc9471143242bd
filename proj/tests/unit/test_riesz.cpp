#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "parawork/error.hpp"
#include "parawork/pgeom.hpp"
#include "support/frozen.hpp"
#include "support/gen.hpp"

namespace parawork {
namespace {

using testing::for_all;
using testing::Gen;
constexpr double kSigma = 10.0 / 6.0;

// Average of |u - v|^-sigma over two cells, written as an integral against
// the difference density: a product of tents of half-widths w and h.
double kernel_oracle(int m, std::int64_t dix, std::int64_t dis, double sigma) {
  const double w = std::ldexp(1.0, -m), h = std::ldexp(1.0, -2 * m);
  const double dx = static_cast<double>(dix) * w, ds = static_cast<double>(dis) * h;
  boost::math::quadrature::tanh_sinh<double> ts;
  auto pieces = [](double c, double half) {
    std::vector<double> v{c - half, c, c + half};
    if (c - half < 0.0 && 0.0 < c + half && c != 0.0) v.push_back(0.0);
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto xa = pieces(dx, w), sb = pieces(ds, h);
  auto tent = [](double u, double c, double half) { return std::max(0.0, 1.0 - std::abs(u - c) / half) / half; };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xa.size(); ++i)
    for (std::size_t k = 0; k + 1 < sb.size(); ++k)
      total += ts.integrate(
          [&](double a) {
            return tent(a, dx, w) * ts.integrate(
                                        [&](double b) {
                                          const double r2 = a * a + b * b;
                                          return r2 == 0.0 ? 0.0 : tent(b, ds, h) * std::pow(r2, -0.5 * sigma);
                                        },
                                        sb[k], sb[k + 1]);
          },
          xa[i], xa[i + 1]);
  return total;
}

TEST(CellPairKernel, MatchesQuadratureOracleInEveryRegime) {
  struct Case {
    int m;
    std::int64_t dix, dis;
    double rel;
  };
  // Near offsets use the closed form, mid-range ones Gauss-Legendre and far
  // ones the second-order expansion; tolerances follow that order.
  const Case cases[] = {{2, 0, 0, 1e-9},  {2, 1, 0, 1e-9},  {2, 0, 1, 1e-9},  {2, 1, 3, 1e-9},  {3, 2, 30, 1e-9},
                        {1, 0, 0, 1e-9},  {3, 3, 0, 1e-7},  {3, 0, 60, 1e-7}, {3, 5, 9, 1e-7},  {2, 3, 1, 1e-7},
                        {4, 20, 0, 1e-5}, {5, 40, 0, 1e-5}, {4, 12, 200, 1e-5}};
  for (const auto& c : cases) {
    SCOPED_TRACE(::testing::Message() << "m=" << c.m << " offset=(" << c.dix << "," << c.dis << ")");
    const double want = kernel_oracle(c.m, c.dix, c.dis, kSigma);
    EXPECT_NEAR(cell_pair_kernel(c.m, c.dix, c.dis, kSigma), want, c.rel * want);
  }
  EXPECT_NEAR(cell_pair_kernel(2, 1, 2, 0.5), kernel_oracle(2, 1, 2, 0.5), 1e-9);
}

TEST(CellPairKernel, Symmetric) {
  for_all(71, 40, [](Gen& g, int) {
    const int m = static_cast<int>(g.uniform(0, 4));
    const auto dx = static_cast<std::int64_t>(g.uniform(0, 12)), ds = static_cast<std::int64_t>(g.uniform(0, 200));
    const double k = cell_pair_kernel(m, dx, ds, kSigma);
    ASSERT_EQ(cell_pair_kernel(m, -dx, ds, kSigma), k);
    ASSERT_EQ(cell_pair_kernel(m, dx, -ds, kSigma), k);
    ASSERT_GT(k, 0.0);
  });
}

TEST(RieszEnergy, UniformMatchesFrozenAtEveryDepth) {
  for (int m = 0; m <= 4; ++m) {
    const GridMeasure uni(m, std::vector<double>(cells_at(m), 1.0 / static_cast<double>(cells_at(m))));
    EXPECT_NEAR(riesz_energy(uni, kSigma).direct, testing::frozen::kUniformEnergy, 1e-7) << "m=" << m;
  }
}

TEST(RieszEnergy, UniformMatchesImportanceSampledMonteCarlo) {
  // Energy of Lebesgue measure on the unit square: integral of |u|^-sigma
  // (1 - |u1|)(1 - |u2|) over [-1, 1]^2. In polar form the radius is drawn
  // with density proportional to r^{1 - sigma}, leaving a bounded weight.
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double R = std::numbers::sqrt2, p = 2.0 - kSigma;
  const double scale = 2.0 * std::numbers::pi * std::pow(R, p) / p;
  const int n = 2'000'000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = R * std::pow(U(rng), 1.0 / p), th = 2.0 * std::numbers::pi * U(rng);
    const double a = std::abs(r * std::cos(th)), b = std::abs(r * std::sin(th));
    const double v = a < 1.0 && b < 1.0 ? scale * (1.0 - a) * (1.0 - b) : 0.0;
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
  EXPECT_NEAR(mean, testing::frozen::kUniformEnergy, 5.0 * se);
  EXPECT_LT(se / mean, 1e-3);
}

TEST(RieszEnergy, TwoDistantCells) {
  const int m = 3;
  GridMeasure mu(m);
  const std::uint64_t a = 3 * rows_at(m) + 5, b = 6 * rows_at(m) + 50;
  mu.set_weight(a, 0.5);
  mu.set_weight(b, 0.5);
  const Point pa = cell_center(m, a), pb = cell_center(m, b);
  const double d = std::hypot(pa.x - pb.x, pa.s - pb.s);
  const double cross = riesz_energy(mu, kSigma).direct - 0.5 * cell_pair_kernel(m, 0, 0, kSigma);
  EXPECT_NEAR(cross, 0.5 * std::pow(d, -kSigma), 1e-3 * std::pow(d, -kSigma));
}

TEST(RieszEnergy, ConcentratingPointMassGrows) {
  double prev = 0.0;
  for (int m = 0; m <= 5; ++m) {
    GridMeasure mu(m);
    mu.set_weight(0, 1.0);
    const double e = riesz_energy(mu, kSigma).direct;
    EXPECT_NEAR(e, cell_pair_kernel(m, 0, 0, kSigma), 1e-12 * e);
    EXPECT_GT(e, prev);
    prev = e;
  }
}

TEST(RieszEnergy, QuadraticInTheMeasure) {
  for_all(73, 10, [](Gen& g, int) {
    const GridMeasure mu = g.grid_measure(2, 0.6);
    std::vector<double> w(mu.weights().begin(), mu.weights().end());
    for (auto& x : w) x *= 3.0;
    const double e = riesz_energy(mu, kSigma).direct;
    EXPECT_NEAR(riesz_energy(GridMeasure(2, w), kSigma).direct, 9.0 * e, 1e-12 * e);
  });
}

TEST(RieszEnergy, FourierSideApproachesDirect) {
  const GridMeasure uni(2, std::vector<double>(cells_at(2), 1.0 / cells_at(2)));
  const EnergyReport r = riesz_energy(uni, kSigma, EnergyMode::DirectAndFourier);
  ASSERT_TRUE(r.fourier_side.has_value());
  // The Fourier integral stops at a finite radius, so it undershoots.
  EXPECT_LE(*r.fourier_side, r.direct);
  EXPECT_NEAR(*r.fourier_side, r.direct, 0.05 * r.direct);
}

TEST(RieszEnergy, BadExponent) {
  const GridMeasure uni(1, std::vector<double>(8, 0.125));
  for (double s : {0.0, -1.0, 2.0, 2.5}) {
    try {
      riesz_energy(uni, s);
      FAIL() << s;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::BadExponent);
    }
  }
}

TEST(MeasureFourier, MatchesCellSum) {
  for_all(74, 20, [](Gen& g, int) {
    const int m = static_cast<int>(g.uniform(0, 3));
    const GridMeasure mu = g.grid_measure(m, 0.5);
    const MeasureFourier ft(mu);
    const double w = std::ldexp(1.0, -m), h = std::ldexp(1.0, -2 * m), pi = std::numbers::pi;
    EXPECT_NEAR(std::abs(ft(0, 0) - mu.total()), 0.0, 1e-12);
    for (int t = 0; t < 5; ++t) {
      const double x1 = g.real(-40, 40), x2 = g.real(-40, 40);
      std::complex<double> want{};
      for (std::uint64_t c = 0; c < mu.cells(); ++c) {
        const Point p = cell_center(m, c);
        want += mu.weight(c) * std::polar(1.0, -2.0 * pi * (p.x * x1 + p.s * x2));
      }
      auto sinc = [](double v) { return v == 0.0 ? 1.0 : std::sin(v) / v; };
      want *= sinc(pi * x1 * w) * sinc(pi * x2 * h);
      ASSERT_LT(std::abs(ft(x1, x2) - want), 1e-11);
      ASSERT_LT(std::abs(measure_fourier(mu, x1, x2) - want), 1e-11);
    }
  });
}

TEST(RieszFourierConstant, KnownValue) {
  // sigma = 1: c = Gamma(1/2) / Gamma(1/2) = 1.
  EXPECT_NEAR(riesz_fourier_constant(1.0), 1.0, 1e-15);
  EXPECT_NEAR(riesz_fourier_constant(0.5), std::pow(std::numbers::pi, -0.5) * std::tgamma(0.75) / std::tgamma(0.25),
              1e-15);
}

}  // namespace
}  // namespace parawork
