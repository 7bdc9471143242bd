#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "parawork/gapfinder.hpp"
#include "parawork/tools/oracles.hpp"
#include "support/frozen.hpp"
#include "support/gen.hpp"

namespace parawork {
namespace {

using testing::for_all;
using testing::Gen;
constexpr double kPi = std::numbers::pi;

GridMeasure uniform(int m) { return GridMeasure(m, std::vector<double>(cells_at(m), 1.0 / static_cast<double>(cells_at(m)))); }

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvariantViolation;
}

TEST(GapParams, AutoBSaturatesTheConstraint) {
  const GapParams p = GapParams::make(10.0, std::nullopt, 12);
  EXPECT_NEAR(std::ldexp(std::pow(p.B, 6), -12), 1e-3, 1e-15);
  EXPECT_EQ(p.delta, std::ldexp(1.0, -36) / 8.0);
  EXPECT_EQ(p.sigma, 10.0 / 6.0);
  EXPECT_EQ(GapParams::make(1.0, 0.5, 1).B, 0.5);
  EXPECT_EQ(kind_of([] { GapParams::make(1.0, 1.2, 1); }), ErrorKind::BadParams);
  EXPECT_EQ(kind_of([] { GapParams::make(0.5, std::nullopt, 1); }), ErrorKind::BadParams);
  EXPECT_EQ(kind_of([] { GapParams::make(1.0, std::nullopt, 0); }), ErrorKind::BadParams);
  EXPECT_EQ(kind_of([] { GapParams::make(1.0, std::nullopt, 1, 0.5); }), ErrorKind::BadParams);
  EXPECT_EQ(kind_of([] { GapParams::make(1.0, -1.0, 1); }), ErrorKind::BadParams);
}

TEST(Certify, ExponentsAndDepth) {
  const Mollifier phi;
  const GapParams p = GapParams::make(1.0, std::nullopt, 1);
  const CertifyReport r = certify(p, phi);
  EXPECT_EQ(r.log10_B0, 0.0);
  EXPECT_TRUE(r.B_meets_B0);
  EXPECT_NEAR(r.T_for_B0, 0.0, 1e-15);
  const GapParams q = GapParams::make(4.0, std::nullopt, 30, 2.0, 1.0);
  const CertifyReport s = certify(q, phi);
  // B_0 = 8^{30}, so 2^{-T} B_0^6 <= 4^{-3} needs T >= 540 + 6.
  EXPECT_NEAR(s.log10_B0, 30.0 * std::log10(8.0), 1e-12);
  EXPECT_NEAR(s.T_for_B0, 546.0, 1e-9);
  EXPECT_FALSE(s.B_meets_B0);
  EXPECT_FALSE(s.tail.certified);
}

TEST(ParabolaMeasure, MassAndNodes) {
  for (double A : {1.5, 2.0, 10.0}) {
    const ParabolaMeasure pm(A, 4096);
    EXPECT_EQ(pm.size(), 8192u);
    EXPECT_NEAR(pm.total(), ParabolaMeasure::exact_total(A), 1e-6);
    // Arclength against quadrature of sqrt(1 + 4 z^2).
    const double q = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [](double z) { return std::sqrt(1 + 4 * z * z); }, 1.0 / (A * A), 1.0);
    EXPECT_NEAR(ParabolaMeasure::exact_total(A), 2 * q, 1e-13);
    for (double z : pm.nodes()) {
      ASSERT_GE(std::abs(z), 1.0 / (A * A) - 1e-15);
      ASSERT_LE(std::abs(z), 1.0);
    }
    const ParabolaMeasure mir = pm.mirrored();
    for (std::size_t i = 0; i < pm.size(); ++i) ASSERT_EQ(mir.nodes()[i], -pm.nodes()[i]);
  }
  EXPECT_EQ(ParabolaMeasure(1.0).size(), 0u);
  EXPECT_EQ(ParabolaMeasure(3.0, 0).size(), 0u);
  EXPECT_EQ(kind_of([] { ParabolaMeasure(3.0, 1); }), ErrorKind::BadParams);
  EXPECT_EQ(kind_of([] { ParabolaMeasure(0.9); }), ErrorKind::BadParams);
}

TEST(GaussianKernel, ThresholdAndTransform) {
  const double c = GaussianKernel::c_psi();
  EXPECT_NEAR(GaussianKernel::psi(c, 0), 0.5, 1e-15);
  EXPECT_GT(GaussianKernel::psi(0.99 * c, 0), 0.5);
  const GaussianKernel k{0.3};
  EXPECT_NEAR(k(0.1, 0.2), std::exp(-kPi * (0.05 / 0.09)) / 0.09, 1e-12);
  for (double xi : {0.0, 0.7, 2.0}) {
    // One-dimensional factor of the transform by quadrature.
    const double re = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return std::exp(-kPi * x * x / 0.09) / 0.3 * std::cos(2 * kPi * x * xi); }, -5.0, 5.0);
    EXPECT_NEAR(k.hat(xi, 0.0), re, 1e-12);
    EXPECT_NEAR(k.hat(xi, 1.1), re * k.hat(0.0, 1.1), 1e-12);
  }
}

TEST(SpectralGapIntegral, ClosedForms) {
  // |f| = 1 gives the annulus area.
  for (auto [A, B] : {std::pair{1.0, 2.0}, std::pair{10.0, 3.0}, std::pair{32.0, 1.5}}) {
    const double v = spectral_gap_integral([](double, double) { return std::complex<double>(1.0); }, A, B);
    EXPECT_NEAR(v, kPi * (std::pow(B, 4) - std::pow(A, 0.4)), 1e-9);
  }
  // Gaussian: integral of exp(-2 r^2) over the annulus.
  const double A = 3.0, B = 1.6, r0 = std::pow(A, 0.2), r1 = B * B;
  const double v = spectral_gap_integral(
      [](double a, double b) { return std::complex<double>(std::exp(-(a * a + b * b)), 0.0); }, A, B);
  EXPECT_NEAR(v, 0.5 * kPi * (std::exp(-2 * r0 * r0) - std::exp(-2 * r1 * r1)), 1e-12);
  EXPECT_EQ(kind_of([] { spectral_gap_integral([](double, double) { return std::complex<double>(1.0); }, 32.0, 1.0); }),
            ErrorKind::BadAnnulus);
  EXPECT_EQ(kind_of([] { spectral_gap_integral([](double, double) { return std::complex<double>(1.0); }, 0.5, 2.0); }),
            ErrorKind::BadAnnulus);
}

TEST(SpectralGapIntegral, UniformMatchesFrozenAndFinerRule) {
  const GridMeasure mu = uniform(6);
  const double B = GapParams::auto_B(10.0, 12);
  const double v = spectral_gap_integral(mu, 10.0, B);
  EXPECT_NEAR(v, testing::frozen::kUniformGap, 1e-12 * testing::frozen::kUniformGap);
  const double fine = spectral_gap_integral(mu, 10.0, B, AnnulusQuadrature{2048, 32});
  EXPECT_NEAR(fine, v, 1e-9 * v);
}

GridSet missing_most_of_one_child() {
  // Keeps 3 of the 8 cells under child (1, 2): that child falls below half
  // its cap while the unit rectangle stays dense at s = 2.9.
  GridSet k = GridSet::full(2);
  const ParabolicRect bad = ParabolicRect::unit().child(1, 2);
  int kept = 0;
  for (std::uint64_t c = 0; c < k.cells(); ++c)
    if (bad.contains(cell_rect(2, c)) && kept++ >= 3) k.set(c, false);
  return k;
}

TEST(BuildGapMeasure, IdentitiesOnFullAndRandomSets) {
  const Mollifier phi;
  for_all(81, 6, [&](Gen& g, int i) {
    const int m = 4;
    const GridSet k = i == 0 ? GridSet::full(m) : g.grid_set(m, 0.95);
    const double s = 2.9;
    const GapParams p = GapParams::make(1.0, 1.1, 1);
    std::optional<GapResult> built;
    try {
      built.emplace(build_gap_measure(k, s, p, phi));
    } catch (const ChildDensityError&) {
      return;
    }
    const GapResult& r = *built;
    const GapReport& rep = r.report;
    EXPECT_EQ(r.mu.depth(), m - rep.dense_rect.j);
    EXPECT_NEAR(rep.total_mass, 1.0, 1e-12);
    EXPECT_LE(rep.cell_mass_defect, 1e-12);
    const auto w = phi.cell_integrals(1);
    const double lq = std::pow(rep.dense_rect.ell(), s);
    for (std::size_t c = 0; c < rep.children.size(); ++c) {
      const auto& ch = rep.children[c];
      EXPECT_EQ(ch.weight, w[c]);
      EXPECT_NEAR(ch.mass, ch.weight * lq, 1e-15);
      EXPECT_GE(ch.content, 0.5 * std::pow(ch.rect.ell(), s));
      EXPECT_TRUE(rep.dense_rect.contains(ch.rect));
      const ParabolicRect img = ParabolicRect::from_index(1, c);
      EXPECT_NEAR(r.mu.mass(img), w[c], 1e-12);
    }
    EXPECT_GE(rep.dense_content, (1.0 - p.delta) * lq);
    EXPECT_TRUE(rep.spectral_gap_value.has_value());
    EXPECT_GT(rep.frostman_constant, 0.0);
    EXPECT_GT(rep.dyadic_ratio, 0.0);
  });
}

TEST(BuildGapMeasure, NoGapValueWhenAnnulusIsEmpty) {
  const Mollifier phi;
  const GapResult r = build_gap_measure(GridSet::full(3), 2.9, GapParams::make(10.0, std::nullopt, 1), phi);
  EXPECT_FALSE(r.report.spectral_gap_value.has_value());
}

TEST(BuildGapMeasure, ReportsSparseChildren) {
  const Mollifier phi;
  const GridSet k = missing_most_of_one_child();
  EXPECT_EQ(find_dense_rect(k, 2.9, 1.0 / 64, 1), ParabolicRect::unit());
  try {
    build_gap_measure(k, 2.9, GapParams::make(1.0, std::nullopt, 1), phi);
    FAIL() << "expected a child density failure";
  } catch (const ChildDensityError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ChildDensityFailure);
    ASSERT_EQ(e.failing().size(), 1u);
    EXPECT_EQ(e.failing()[0], ParabolicRect::unit().child(1, 2));
  }
}

TEST(BuildGapMeasure, RejectsTooDeepT) {
  const Mollifier phi;
  EXPECT_EQ(kind_of([&] { build_gap_measure(GridSet::full(2), 2.9, GapParams::make(1.0, std::nullopt, 3), phi); }),
            ErrorKind::BadParams);
  EXPECT_EQ(kind_of([&] { build_gap_measure(GridSet(2), 2.9, GapParams::make(1.0, std::nullopt, 1), phi); }),
            ErrorKind::EmptyContent);
}

TEST(FourierComparison, RatiosMatchDirectEvaluation) {
  const Mollifier phi;
  const GapResult r = build_gap_measure(GridSet::full(4), 2.9, GapParams::make(1.0, 1.1, 2), phi);
  auto xi = polar_samples(0.5, 4.0, 3, 4);
  xi.emplace_back(0.0, 0.0);
  const FourierComparison fc = fourier_comparison(r.mu, phi, 2, xi);
  ASSERT_EQ(fc.ratios.size(), xi.size());
  EXPECT_TRUE(std::isnan(fc.ratios.back()));
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < xi.size(); ++i) {
    const auto [a, b] = xi[i];
    const double want = std::abs(measure_fourier(r.mu, a, b) - phi.hat(a, b)) / (std::hypot(a, b) / 4.0);
    EXPECT_NEAR(fc.ratios[i], want, 1e-12);
    worst = std::max(worst, want);
  }
  EXPECT_NEAR(fc.max_ratio, worst, 1e-12);
}

TEST(PolarSamples, Layout) {
  const auto xi = polar_samples(0.5, 8.0, 5, 6);
  ASSERT_EQ(xi.size(), 30u);
  double rmin = 1e9, rmax = 0;
  for (auto [a, b] : xi) {
    const double r = std::hypot(a, b);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
    EXPECT_GE(std::atan2(b, a), -1e-12);
  }
  EXPECT_NEAR(rmin, 0.5, 1e-12);
  EXPECT_NEAR(rmax, 8.0, 1e-12);
  EXPECT_EQ(kind_of([] { polar_samples(0.0, 1.0, 2, 2); }), ErrorKind::BadConfig);
}

// Uniform measure on the unit square: per node the functional factors into
// tent-weighted one-dimensional Gaussian integrals.
double functional_uniform_oracle(const ParabolaMeasure& pm, double delta) {
  auto factor = [&](double c) {
    auto g = [&](double u) { return (1 - std::abs(u)) * std::exp(-kPi * (u - c) * (u - c) / (delta * delta)) / delta; };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    return GK::integrate(g, -1.0, 0.0, 15, 1e-14) + GK::integrate(g, 0.0, 1.0, 15, 1e-14);
  };
  double f = 0.0;
  for (std::size_t i = 0; i < pm.size(); ++i) {
    const double z = pm.nodes()[i];
    f += pm.weights()[i] * factor(z) * factor(z * z);
  }
  return f;
}

TEST(ConvolutionFunctional, UniformAgainstQuadratureOracle) {
  const ParabolaMeasure pm(2.0, 256);
  for (double delta : {0.05, 0.1, 0.5}) {
    const double want = functional_uniform_oracle(pm, delta);
    EXPECT_NEAR(convolution_functional(uniform(2), pm, delta), want, 1e-10 * want) << delta;
  }
}

TEST(ConvolutionFunctional, FrozenUniformValueAtEveryDepth) {
  const ParabolaMeasure pm(2.0, 4096);
  for (int m : {1, 3}) EXPECT_NEAR(convolution_functional(uniform(m), pm, 0.1), testing::frozen::kUniformFunctional, 1e-9);
}

TEST(ConvolutionFunctional, MonteCarloAgrees) {
  const auto mc = oracle::functional_uniform_mc(2.0, 0.1, 1'000'000, 82);
  EXPECT_NEAR(mc.mean, testing::frozen::kUniformFunctional, 5 * mc.stderr_);
}

TEST(ConvolutionFunctional, ZeroNodesAndReflection) {
  EXPECT_EQ(convolution_functional(uniform(2), ParabolaMeasure(2.0, 0), 0.1), 0.0);
  EXPECT_EQ(convolution_functional(uniform(2), ParabolaMeasure(1.0), 0.1), 0.0);
  for_all(83, 5, [](Gen& g, int) {
    const int m = 2;
    const GridMeasure mu = g.grid_measure(m, 0.5);
    // Reflect x -> 1 - x by reversing the columns.
    GridMeasure ref(m);
    for (std::uint64_t ix = 0; ix < cols_at(m); ++ix)
      for (std::uint64_t is = 0; is < rows_at(m); ++is)
        ref.set_weight((cols_at(m) - 1 - ix) * rows_at(m) + is, mu.weight(ix * rows_at(m) + is));
    const ParabolaMeasure pm(3.0, 64);
    const double a = convolution_functional(mu, pm, 0.2), b = convolution_functional(ref, pm.mirrored(), 0.2);
    EXPECT_NEAR(a, b, 1e-12 * a);
  });
  EXPECT_EQ(kind_of([] { convolution_functional(uniform(1), ParabolaMeasure(2.0), 0.0); }), ErrorKind::BadDelta);
}

TEST(FunctionalSplit, PartsSumToTotal) {
  const GridMeasure mu = uniform(3);
  const ParabolaMeasure pm(2.0, 512);
  const GapParams p = GapParams::make(2.0, 0.3, 6);
  const Lemma1Report r = lemma1_diagnostics(mu, pm, p, 0.1);
  EXPECT_NEAR(r.I1 + r.I2 + r.I3, r.total, 1e-12);
  EXPECT_NEAR(r.total, convolution_functional(mu, pm, 0.1), 1e-12);
  EXPECT_NEAR(r.I1, convolution_functional(mu, pm, 0.5), 1e-12);
  EXPECT_NEAR(r.kappa, 2.0 * r.I1, 1e-12);
  EXPECT_EQ(kind_of([&] { lemma1_diagnostics(mu, pm, p, 4.0); }), ErrorKind::BadDelta);
  EXPECT_EQ(kind_of([&] { lemma1_diagnostics(mu, pm, p, 0.0); }), ErrorKind::BadDelta);
}

}  // namespace
}  // namespace parawork
