#include <gtest/gtest.h>

#include <cmath>

#include "parawork/pgeom.hpp"
#include "parawork/tools/oracles.hpp"
#include "support/gen.hpp"

namespace parawork {
namespace {

using testing::for_all;
using testing::Gen;

TEST(ParabolicDist, SpecExamples) {
  EXPECT_EQ(parabolic_dist({0, 0}, {0, 0}), 0.0);
  EXPECT_EQ(parabolic_dist({0, 0}, {0.5, 0}), 0.5);
  EXPECT_EQ(parabolic_dist({0, 0}, {0, 0.25}), 0.5);
}

TEST(ParabolicDist, MetricAxioms) {
  for_all(51, 10000, [](Gen& g, int) {
    const Point a = g.point(-2, 2), b = g.point(-2, 2), c = g.point(-2, 2);
    ASSERT_EQ(parabolic_dist(a, b), parabolic_dist(b, a));
    ASSERT_EQ(parabolic_dist(a, a), 0.0);
    ASSERT_GT(parabolic_dist(a, b), 0.0);
    ASSERT_LE(parabolic_dist(a, c), parabolic_dist(a, b) + parabolic_dist(b, c) + 1e-12);
  });
}

TEST(Rect, GeometryAndChildren) {
  const ParabolicRect u = ParabolicRect::unit();
  EXPECT_EQ(u.width(), 1.0);
  const ParabolicRect c = u.child(1, 3);
  EXPECT_EQ(c.j, 1);
  EXPECT_EQ(c.x(), 0.5);
  EXPECT_EQ(c.s(), 0.75);
  EXPECT_EQ(c.height(), 0.25);
  EXPECT_EQ(c.ancestor(0), u);
  EXPECT_TRUE(u.contains(c));
  EXPECT_FALSE(c.contains(u));
  for (int j = 0; j <= 3; ++j)
    for (std::uint64_t i = 0; i < cells_at(j); ++i) ASSERT_EQ(ParabolicRect::from_index(j, i).index(), i);
  // Children tile the parent.
  double area = 0.0;
  for (int cx = 0; cx < 2; ++cx)
    for (int cs = 0; cs < 4; ++cs) {
      const ParabolicRect ch = c.child(cx, cs);
      EXPECT_TRUE(c.contains(ch));
      area += ch.width() * ch.height();
    }
  EXPECT_DOUBLE_EQ(area, c.width() * c.height());
  EXPECT_EQ(parabolic_dist({c.x(), c.s()}, {c.x() + c.width(), c.s() + c.height()}), c.ell());
}

TEST(Rescale, SpecExamplesAndScaling) {
  const ParabolicRect q = ParabolicRect::unit().child(0, 0);
  const Point o = rescale(q, {0, 0});
  EXPECT_EQ(o.x, 0.0);
  EXPECT_EQ(o.s, 0.0);
  const Point h = rescale(q, {0.25, 0.125});
  EXPECT_EQ(h.x, 0.5);
  EXPECT_EQ(h.s, 0.5);
  for_all(52, 2000, [](Gen& g, int) {
    ParabolicRect r = ParabolicRect::unit();
    const int j = static_cast<int>(g.uniform(0, 6));
    for (int k = 0; k < j; ++k) r = r.child(static_cast<int>(g.uniform(0, 1)), static_cast<int>(g.uniform(0, 3)));
    const Point a = g.point(), b = g.point();
    const double d = parabolic_dist(a, b);
    ASSERT_NEAR(parabolic_dist(rescale(r, a), rescale(r, b)), std::ldexp(d, j), 1e-12 * std::ldexp(1.0, j));
    const Point back = unrescale(r, rescale(r, a));
    ASSERT_NEAR(back.x, a.x, 1e-12);
    ASSERT_NEAR(back.s, a.s, 1e-12);
    const Point inside{r.x() + 0.3 * r.width(), r.s() + 0.7 * r.height()};
    const Point img = rescale(r, inside);
    ASSERT_NEAR(img.x, 0.3, 1e-9);
    ASSERT_NEAR(img.s, 0.7, 1e-9);
  });
}

// Blow-up recomputed through cell centres.
GridMeasure blow_up_oracle(const GridMeasure& mu, const ParabolicRect& q) {
  const int m = mu.depth(), d = m - q.j;
  std::vector<double> w(cells_at(d), 0.0);
  double total = 0.0;
  for (std::uint64_t c = 0; c < mu.cells(); ++c) {
    const Point p = cell_center(m, c);
    if (!q.contains(p)) continue;
    const Point t = rescale(q, p);
    const auto ix = static_cast<std::uint64_t>(t.x * cols_at(d)), is = static_cast<std::uint64_t>(t.s * rows_at(d));
    w[ix * rows_at(d) + is] += mu.weight(c);
    total += mu.weight(c);
  }
  for (auto& x : w) x /= total;
  return GridMeasure(d, std::move(w));
}

TEST(BlowUp, Examples) {
  const int m = 4;
  const GridMeasure uni(m, std::vector<double>(cells_at(m), 1.0 / cells_at(m)));
  const ParabolicRect q = ParabolicRect::unit().child(1, 2).child(0, 3);
  const GridMeasure b = blow_up(uni, q);
  EXPECT_EQ(b.depth(), 2);
  for (double w : b.weights()) EXPECT_DOUBLE_EQ(w, 1.0 / cells_at(2));
  // Supported in one child of q: the image lives in that child's image.
  GridMeasure one(m);
  const ParabolicRect ch = q.child(1, 1);
  for (std::uint64_t c = 0; c < one.cells(); ++c)
    if (ch.contains(cell_rect(m, c))) one.set_weight(c, 0.5);
  const GridMeasure bo = blow_up(one, q);
  const ParabolicRect img = ParabolicRect::unit().child(1, 1);
  EXPECT_DOUBLE_EQ(bo.mass(img), 1.0);
  EXPECT_THROW(blow_up(GridMeasure(m), q), Error);
}

TEST(BlowUp, MatchesCentreOracle) {
  for_all(53, 40, [](Gen& g, int) {
    const int m = static_cast<int>(g.uniform(1, 4));
    const GridMeasure mu = g.grid_measure(m, 0.7);
    const int j = static_cast<int>(g.uniform(0, m));
    const ParabolicRect q = ParabolicRect::from_index(j, g.uniform(0, cells_at(j) - 1));
    if (mu.mass(q) == 0.0) return;
    const GridMeasure a = blow_up(mu, q), b = blow_up_oracle(mu, q);
    ASSERT_EQ(a.depth(), b.depth());
    for (std::uint64_t c = 0; c < a.cells(); ++c) ASSERT_NEAR(a.weight(c), b.weight(c), 1e-15);
    EXPECT_NEAR(a.total(), 1.0, 1e-14);
  });
}

TEST(GridMeasure, PyramidRefineAndMass) {
  for_all(54, 20, [](Gen& g, int) {
    const int m = static_cast<int>(g.uniform(0, 4));
    const GridMeasure mu = g.grid_measure(m, 0.5);
    const auto lv = mu.pyramid();
    ASSERT_EQ(lv.size(), static_cast<std::size_t>(m + 1));
    const double tol = 1e-14 * (1.0 + mu.total());
    EXPECT_NEAR(lv[0][0], mu.total(), tol);
    for (int j = 0; j <= m; ++j)
      for (std::uint64_t i = 0; i < cells_at(j); ++i)
        ASSERT_NEAR(lv[j][i], mu.mass(ParabolicRect::from_index(j, i)), tol);
    const GridMeasure fine = mu.refine(m + 1);
    for (std::uint64_t c = 0; c < mu.cells(); ++c) ASSERT_NEAR(fine.mass(cell_rect(m, c)), mu.weight(c), 1e-15);
  });
  EXPECT_THROW(GridMeasure(1, std::vector<double>(8, -1.0)), Error);
  EXPECT_THROW(GridMeasure(1, std::vector<double>(7, 0.0)), Error);
}

TEST(Content, SpecExamples) {
  for (int m = 1; m <= 5; ++m)
    for (double s : {1.0, 2.0, 2.9}) EXPECT_DOUBLE_EQ(dyadic_content(GridSet::full(m), s), 1.0);
  for (int m = 1; m <= 5; ++m) {
    GridSet one(m);
    one.set(cells_at(m) - 3);
    EXPECT_DOUBLE_EQ(dyadic_content(one, 2.8), std::pow(2.0, -m * 2.8));
  }
  EXPECT_EQ(dyadic_content(GridSet(3), 2.0), 0.0);
  EXPECT_THROW(dyadic_content(GridSet(2), 0.0), Error);
  EXPECT_THROW(dyadic_content(GridSet(2), 3.5), Error);
}

TEST(Content, DepthTwoAgainstExhaustiveCovers) {
  for_all(55, 100, [](Gen& g, int) {
    const GridSet k = g.grid_set(2);
    for (double s : {2.0, 2.5, 2.8, 2.9}) {
      const auto ex = oracle::min_cover_depth2(k, s);
      ASSERT_NEAR(dyadic_content(k, s), ex.value, 1e-14);
    }
  });
}

TEST(Content, MonotoneAndSubadditive) {
  for_all(56, 60, [](Gen& g, int) {
    const int m = static_cast<int>(g.uniform(1, 4));
    const double s = g.real(0.5, 3.0);
    const GridSet a = g.grid_set(m, g.real(0, 0.5)), b = g.grid_set(m, g.real(0, 0.5));
    const GridSet u = a.unite(b);
    EXPECT_TRUE(a.subset_of(u));
    EXPECT_LE(dyadic_content(a, s), dyadic_content(u, s) + 1e-15);
    EXPECT_LE(dyadic_content(u, s), dyadic_content(a, s) + dyadic_content(b, s) + 1e-12);
    EXPECT_LE(dyadic_content(u, s), 1.0);
    const ContentResult r = content_dp(u, s);
    double v = 0.0;
    for (std::size_t j = 0; j < r.count.size(); ++j) v += static_cast<double>(r.count[j]) * std::pow(2.0, -double(j) * s);
    EXPECT_EQ(v, r.value);
  });
}

TEST(DenseRect, Examples) {
  EXPECT_EQ(find_dense_rect(GridSet::full(4), 2.9, 0.1), ParabolicRect::unit());
  GridSet one(3);
  one.set(77);
  EXPECT_EQ(find_dense_rect(one, 2.9, 0.0), cell_rect(3, 77));
  EXPECT_THROW(find_dense_rect(GridSet(3), 2.9, 0.1), Error);
  for_all(57, 40, [](Gen& g, int) {
    const int m = static_cast<int>(g.uniform(2, 5));
    const GridSet k = g.grid_set(m, g.real(0.01, 0.6));
    if (k.empty()) return;
    const double s = g.real(2.0, 2.95), delta = g.real(0.0, 0.5);
    const ParabolicRect q = find_dense_rect(k, s, delta);
    EXPECT_GE(dyadic_content(k.restrict_to(q), s), (1.0 - delta) * std::pow(q.ell(), s) * (1 - 1e-12));
  });
}

TEST(Frostman, Examples) {
  GridSet one(4);
  one.set(1000);
  EXPECT_DOUBLE_EQ(frostman(one, 2.5).total(), std::pow(2.0, -4 * 2.5));
  const GridMeasure full = frostman(GridSet::full(3), 3.0);
  EXPECT_NEAR(full.total(), 1.0, 1e-14);
  const auto lv = full.pyramid();
  for (int j = 0; j <= 3; ++j)
    for (double v : lv[j]) EXPECT_NEAR(v, std::pow(2.0, -3.0 * j), 1e-15);
}

TEST(Frostman, CapsAndMassOnFixtures) {
  for_all(58, 30, [](Gen& g, int) {
    const int m = static_cast<int>(g.uniform(1, 5));
    const double s = g.real(1.5, 3.0);
    const GridSet k = g.grid_set(m, g.real(0.0, 1.0));
    const GridMeasure mu = frostman(k, s);
    const auto lv = mu.pyramid();
    for (int j = 0; j <= m; ++j)
      for (double v : lv[j]) ASSERT_LE(v, std::pow(2.0, -j * s) * (1 + 1e-12));
    EXPECT_GE(mu.total(), dyadic_content(k, s) * (1 - 1e-12));
    EXPECT_LE(max_dyadic_ratio(mu, s), 1 + 1e-12);
    for (std::uint64_t c = 0; c < mu.cells(); ++c)
      if (!k.test(c)) {
        ASSERT_EQ(mu.weight(c), 0.0);
      }
  });
}

TEST(Frostman, WithinAndBelowAgree) {
  Gen g(59);
  const GridSet k = g.grid_set(4, 0.6);
  const double s = 2.7;
  const GridMeasure below = frostman_below(k, s, 2);
  for (std::uint64_t i = 0; i < cells_at(2); ++i) {
    const ParabolicRect q = ParabolicRect::from_index(2, i);
    const GridMeasure w = frostman_within(k, s, q);
    for (std::uint64_t c = 0; c < w.cells(); ++c)
      if (q.contains(cell_rect(4, c))) {
        ASSERT_NEAR(w.weight(c), below.weight(c), 1e-15);
      } else {
        ASSERT_EQ(w.weight(c), 0.0);
      }
  }
  const GridMeasure a = frostman_below(k, s, 0), b = frostman(k, s);
  for (std::uint64_t c = 0; c < a.cells(); ++c) ASSERT_EQ(a.weight(c), b.weight(c));
}

TEST(Frostman, EmpiricalConstantsAndEuclideanTransfer) {
  // Parabolic balls of the sampled radii meet at most 9 rectangles one or
  // two generations up, which bounds the parabolic constant by 9 (4/3)^3.
  for_all(60, 12, [](Gen& g, int) {
    const int m = 5;
    const double s = g.real(2.2, 3.0);
    const GridMeasure mu = frostman(g.grid_set(m, g.real(0.05, 1.0)), s);
    if (mu.total() == 0.0) return;
    const double cp = empirical_frostman(mu, s, BallKind::Parabolic, 7).constant;
    EXPECT_LE(cp, 9.0 * std::pow(4.0 / 3.0, 3));
    // Euclidean boxes of half-side r split into at most 5 / r parabolic ones.
    const double ce = empirical_frostman(mu, s - 1.0, BallKind::Euclidean, 7).constant;
    EXPECT_LE(ce, 5.0 * 9.0 * std::pow(4.0 / 3.0, 3));
  });
}

TEST(Frostman, EuclideanToParabolicExponent) {
  // Lebesgue measure (Euclidean exponent 2) and a horizontal segment
  // (exponent 1) pass the parabolic check at 2s - 1.
  const int m = 5;
  GridMeasure uni(m, std::vector<double>(cells_at(m), 1.0 / cells_at(m)));
  GridMeasure seg(m);
  for (std::uint64_t ix = 0; ix < cols_at(m); ++ix) seg.set_weight(ix * rows_at(m) + rows_at(m) / 2, 1.0 / cols_at(m));
  for (auto [mu, s] : {std::pair{&uni, 2.0}, std::pair{&seg, 1.0}}) {
    const double ce = empirical_frostman(*mu, s, BallKind::Euclidean, 1, 4096).constant;
    const double cp = empirical_frostman(*mu, 2 * s - 1, BallKind::Parabolic, 1, 4096).constant;
    EXPECT_LE(cp, 2.0 * ce);
  }
}

TEST(BoxMass, MatchesCellSums) {
  Gen g(61);
  const GridMeasure mu = g.grid_measure(3, 0.8);
  const BoxMass bm(mu);
  EXPECT_NEAR(bm(0, 1, 0, 1), mu.total(), 1e-12);
  EXPECT_NEAR(bm(-1, 2, -1, 2), mu.total(), 1e-12);
  const ParabolicRect q = ParabolicRect::from_index(2, 17);
  EXPECT_NEAR(bm(q.x(), q.x() + q.width(), q.s(), q.s() + q.height()), mu.mass(q), 1e-12);
  // Half a cell in x gets half the weight.
  const ParabolicRect c = cell_rect(3, 100);
  EXPECT_NEAR(bm(c.x(), c.x() + c.width() / 2, c.s(), c.s() + c.height()), mu.weight(100) / 2, 1e-12);
}

TEST(GridSetFixtures, RestrictUniteSubset) {
  Gen g(62);
  const GridSet k = g.grid_set(3, 0.5);
  const ParabolicRect q = ParabolicRect::from_index(1, 5);
  const GridSet r = k.restrict_to(q);
  EXPECT_TRUE(r.subset_of(k));
  for (std::uint64_t c = 0; c < r.cells(); ++c)
    if (r.test(c)) {
      EXPECT_TRUE(q.contains(cell_rect(3, c)));
    }
  EXPECT_EQ(k.unite(GridSet(3)), k);
  EXPECT_EQ(GridSet::full(2).count(), 64u);
}

}  // namespace
}  // namespace parawork
