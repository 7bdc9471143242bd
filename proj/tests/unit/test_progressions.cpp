#include <gtest/gtest.h>

#include <cmath>
#include <unordered_set>

#include "parawork/progressions.hpp"
#include "parawork/tools/oracles.hpp"
#include "support/gen.hpp"

namespace parawork {
namespace {

using testing::for_all;
using testing::Gen;

// Second counting implementation: a hash set of members and a loop over
// members and z only.
std::uint64_t hash_recount(const PointSet2& a, bool nontrivial_only) {
  const FieldCtx& f = a.ctx();
  const std::uint32_t q = f.q();
  std::unordered_set<std::uint64_t> members;
  for (auto c : a.members()) members.insert(c);
  std::uint64_t n = 0;
  for (auto c : members) {
    const std::uint32_t x = static_cast<std::uint32_t>(c / q), y = static_cast<std::uint32_t>(c % q);
    for (std::uint32_t z = nontrivial_only ? 1 : 0; z < q; ++z)
      n += members.count(std::uint64_t{f.add(x, z)} * q + f.add(y, f.square(z)));
  }
  return n;
}

TEST(CountPairs, SpecExamples) {
  const FieldCtx f = parse_field("5");
  const CountReport full = count_pairs(PointSet2::full(f));
  EXPECT_EQ(full.total, 125u);
  EXPECT_EQ(full.trivial, 25u);
  EXPECT_EQ(full.nontrivial, 100u);
  PointSet2 one(f);
  one.insert(2u, 3u);
  const CountReport r1 = count_pairs(one);
  EXPECT_EQ(r1.total, 1u);
  EXPECT_EQ(r1.nontrivial, 0u);
  EXPECT_FALSE(r1.witness.has_value());
}

TEST(CountPairs, ResidueProductAgainstHashRecount) {
  const FieldCtx f = parse_field("5");
  PointSet2 a(f);
  for (std::uint32_t x = 0; x < 5; ++x)
    for (std::uint32_t y : {0u, 1u, 4u}) a.insert(x, y);
  const CountReport r = count_pairs(a);
  EXPECT_EQ(r.total, hash_recount(a, false));
  EXPECT_EQ(r.nontrivial, hash_recount(a, true));
  EXPECT_EQ(r.total, oracle::brute_pair_count(a, false));
}

TEST(CountPairs, PropertiesOnRandomSets) {
  for_all(31, 150, [](Gen& g, int) {
    const FieldCtx f = g.field(27);
    const PointSet2 a = g.point_set(f);
    const CountReport r = count_pairs(a);
    EXPECT_EQ(r.total, r.trivial + r.nontrivial);
    EXPECT_EQ(r.trivial, a.size());
    EXPECT_EQ(r.witness.has_value(), r.nontrivial > 0);
    EXPECT_EQ(r.nontrivial, hash_recount(a, true));
    if (r.witness) {
      EXPECT_TRUE(oracle::is_witness(a, *r.witness));
      // Lexicographically first.
      std::optional<Triple> first;
      const std::uint32_t q = f.q();
      for (std::uint32_t x = 0; x < q && !first; ++x)
        for (std::uint32_t y = 0; y < q && !first; ++y)
          for (std::uint32_t z = 1; z < q && !first; ++z)
            if (oracle::is_witness(a, {x, y, z})) first = Triple{x, y, z};
      EXPECT_EQ(first, r.witness);
    }
    const double alpha = a.alpha();
    EXPECT_NEAR(r.bound, (alpha - 1.0 / std::sqrt(double(f.q()))) * alpha * std::pow(double(f.q()), 3), 1e-9);
    EXPECT_GE(static_cast<double>(r.total), r.bound);
    // Translation invariance.
    const auto v1 = g.element(f), v2 = g.element(f);
    const CountReport t = count_pairs(a.translate(v1, v2));
    EXPECT_EQ(t.total, r.total);
  });
}

TEST(CountPairs, SpectralIdentityGivesExactCount) {
  for_all(32, 40, [](Gen& g, int) {
    const FieldCtx f = g.field(27);
    const PointSet2 a = g.point_set(f);
    const Grid2 ind = a.indicator();
    const cplx spectral = progression_sum_spectral(f, ind, ind);
    EXPECT_NEAR(spectral.imag(), 0.0, 1e-6);
    EXPECT_NEAR(std::round(spectral.real()) - static_cast<double>(count_pairs(a).total), 0.0, 1e-6);
  });
}

TEST(CountingError, SpecExamples) {
  const FieldCtx f5 = parse_field("5");
  const std::vector<cplx> ones(25, 1.0);
  const CountingError e = counting_error(f5, ones, ones);
  EXPECT_NEAR(e.lhs_direct, 0.0, 1e-9);
  EXPECT_NEAR(e.lhs_spectral, 0.0, 1e-9);

  // Parabola indicator: the defect from the direct sum equals the spectral one.
  std::vector<cplx> par(25, 0.0);
  for (std::uint32_t z = 0; z < 5; ++z) par[std::size_t{z} * 5 + f5.square(z)] = 1.0;
  const CountingError p = counting_error(f5, par, par);
  EXPECT_NEAR(p.lhs_direct, p.lhs_spectral, 1e-7 * std::max(1.0, p.lhs_direct));
  EXPECT_LE(p.lhs_direct, p.rhs_bound);
  EXPECT_THROW(counting_error(f5, ones, std::vector<cplx>(24)), Error);
}

TEST(CountingError, SignFunctionsOnF9) {
  for_all(33, 50, [](Gen& g, int) {
    const FieldCtx f = parse_field("3^2");
    const auto a = g.sign_grid(81), b = g.sign_grid(81);
    const CountingError e = counting_error(f, a, b);
    EXPECT_LE(e.lhs_direct, e.rhs_bound);
    EXPECT_NEAR(e.lhs_direct, e.lhs_spectral, 1e-7 * std::max(1.0, e.lhs_direct));
  });
}

TEST(Threshold, SpecExamples) {
  const FieldCtx f9 = parse_field("3^2");
  const ThresholdVerdict full = check_threshold(PointSet2::full(f9));
  EXPECT_TRUE(full.above_threshold);
  EXPECT_TRUE(full.witness.has_value());
  EXPECT_EQ(threshold_size(25), 250u);
  EXPECT_EQ(threshold_size(9), 54u);
  EXPECT_EQ(threshold_size(5), 23u);  // 2 * 5^{3/2} = 22.36
  Gen g(34);
  const FieldCtx f25 = parse_field("5^2");
  PointSet2 a(f25);
  std::vector<std::uint32_t> cells(625);
  for (std::uint32_t i = 0; i < 625; ++i) cells[i] = i;
  std::shuffle(cells.begin(), cells.end(), g.rng());
  for (std::size_t i = 0; i < 250; ++i) a.insert(cells[i]);
  const ThresholdVerdict v = check_threshold(a);
  EXPECT_TRUE(v.above_threshold);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_TRUE(oracle::is_witness(a, *v.witness));
  const ThresholdVerdict empty = check_threshold(PointSet2(parse_field("5")));
  EXPECT_FALSE(empty.above_threshold);
  EXPECT_FALSE(empty.witness.has_value());
  EXPECT_EQ(empty.summary, "below threshold, none found");
}

TEST(LowerBound, ExactAlphaForm) {
  EXPECT_DOUBLE_EQ(progression_lower_bound(25, 5), (1.0 - 1.0 / std::sqrt(5.0)) * 125.0);
  EXPECT_DOUBLE_EQ(progression_lower_bound(0, 7), 0.0);
}

TEST(PointSet, BasicOperations) {
  const FieldCtx f = parse_field("7");
  PointSet2 a(f);
  a.insert(3u, 4u);
  a.insert(0u, 6u);
  EXPECT_EQ(a.size(), 2u);
  EXPECT_TRUE(a.contains(3u, 4u));
  EXPECT_EQ(a.members(), (std::vector<std::uint32_t>{6, 25}));
  a.erase(std::size_t{25});
  EXPECT_EQ(a.size(), 1u);
  const PointSet2 t = a.translate(1, 1);
  EXPECT_TRUE(t.contains(1u, 0u));
  EXPECT_EQ(a.alpha_den(), 49u);
}

}  // namespace
}  // namespace parawork
