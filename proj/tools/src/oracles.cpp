#include "parawork/tools/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "parawork/error.hpp"

namespace parawork::oracle {

std::uint64_t brute_pair_count(const PointSet2& a, bool nontrivial_only) {
  const FieldCtx& f = a.ctx();
  const std::uint32_t q = f.q();
  std::uint64_t n = 0;
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = 0; y < q; ++y) {
      if (!a.contains(x, y)) continue;
      for (std::uint32_t z = nontrivial_only ? 1 : 0; z < q; ++z)
        if (a.contains(f.add(x, z), f.add(y, f.mul(z, z)))) ++n;
    }
  return n;
}

bool is_witness(const PointSet2& a, const Triple& t) {
  const FieldCtx& f = a.ctx();
  return t.z != 0 && a.contains(t.x, t.y) && a.contains(f.add(t.x, t.z), f.add(t.y, f.mul(t.z, t.z)));
}

std::uint64_t max_avoider_by_subsets(const FieldCtx& ctx) {
  const std::uint32_t q = ctx.q();
  const std::uint32_t n = q * q;
  require(n <= 25, ErrorKind::TooLarge, "subset enumeration needs q^2 <= 25");
  // bad[i] has bit j set when cells i and j form a pair in either order.
  std::vector<std::uint32_t> bad(n, 0);
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = 0; y < q; ++y)
      for (std::uint32_t z = 1; z < q; ++z) {
        const std::uint32_t u = x * q + y;
        const std::uint32_t v = ctx.add(x, z) * q + ctx.add(y, ctx.mul(z, z));
        bad[u] |= 1u << v;
        bad[v] |= 1u << u;
      }
  std::uint64_t best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const auto m = static_cast<std::uint32_t>(mask);
    const auto size = static_cast<std::uint64_t>(std::popcount(m));
    if (size <= best) continue;
    bool ok = true;
    for (std::uint32_t i = 0; i < n && ok; ++i)
      if ((m >> i & 1u) && (bad[i] & m)) ok = false;
    if (ok) best = size;
  }
  return best;
}

std::uint64_t max_avoider_1d_by_subsets(const FieldCtx& ctx) {
  const std::uint32_t q = ctx.q();
  require(q <= 20, ErrorKind::TooLarge, "subset enumeration needs q <= 20");
  std::vector<std::uint32_t> bad(q, 0);
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t z = 1; z < q; ++z) {
      const std::uint32_t v = ctx.add(x, ctx.mul(z, z));
      bad[x] |= 1u << v;
      bad[v] |= 1u << x;
    }
  std::uint64_t best = 0;
  for (std::uint32_t m = 0; m < (1u << q); ++m) {
    const auto size = static_cast<std::uint64_t>(std::popcount(m));
    if (size <= best) continue;
    bool ok = true;
    for (std::uint32_t i = 0; i < q && ok; ++i)
      if ((m >> i & 1u) && (bad[i] & m)) ok = false;
    if (ok) best = size;
  }
  return best;
}

double gauss_modulus_case(std::uint32_t a_index, std::uint32_t b_index, std::uint32_t q) {
  if (b_index != 0) return std::sqrt(static_cast<double>(q));
  return a_index == 0 ? static_cast<double>(q) : 0.0;
}

CoverOptimum min_cover_depth2(const GridSet& k, double s) {
  require(k.depth() == 2, ErrorKind::BadConfig, "depth-2 grids only");
  // Occupied leaves below each of the 8 generation-1 rectangles. A child
  // (cx, cs) of the root owns leaves with ix in {2cx, 2cx+1} and
  // is in 4cs .. 4cs+3.
  std::uint64_t leaves[8] = {};
  for (std::uint64_t cell = 0; cell < k.cells(); ++cell) {
    if (!k.test(cell)) continue;
    const std::uint64_t ix = cell / 16, is = cell % 16;
    const std::uint64_t parent = (ix / 2) * 4 + is / 4;
    ++leaves[parent];
  }
  const double w1 = std::pow(2.0, -s), w2 = std::pow(2.0, -2.0 * s);
  CoverOptimum best{std::numeric_limits<double>::infinity(), {}};
  auto value_of = [&](std::uint64_t n0, std::uint64_t n1, std::uint64_t n2) {
    return static_cast<double>(n0) * 1.0 + static_cast<double>(n1) * w1 + static_cast<double>(n2) * w2;
  };
  bool any = false;
  for (std::uint64_t l : leaves) any = any || l > 0;
  if (!any) return {0.0, {0, 0, 0}};
  // The root alone.
  best = {value_of(1, 0, 0), {1, 0, 0}};
  // Every subset of generation-1 rectangles taken whole; the rest of K is
  // covered leaf by leaf. Covers with redundant pieces only cost more.
  for (std::uint32_t take = 0; take < 256; ++take) {
    std::uint64_t n1 = 0, n2 = 0;
    for (int c = 0; c < 8; ++c) {
      if (take >> c & 1u)
        ++n1;
      else
        n2 += leaves[c];
    }
    const double v = value_of(0, n1, n2);
    if (v < best.value) best = {v, {0, n1, n2}};
  }
  return best;
}

MonteCarlo functional_uniform_mc(double A, double delta, std::uint64_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double z0 = 1.0 / (A * A);
  const double span = 1.0 - z0;
  const double inv_d2 = 1.0 / (delta * delta);
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double x1 = unit(rng), x2 = unit(rng), y1 = unit(rng), y2 = unit(rng);
    double z = z0 + span * unit(rng);
    if (unit(rng) < 0.5) z = -z;
    // Uniform z on both branches has density 1 / (2 span); the arclength
    // element is sqrt(1 + 4 z^2).
    const double jac = 2.0 * span * std::sqrt(1.0 + 4.0 * z * z);
    const double d1 = x1 - y1 - z, d2 = x2 - y2 - z * z;
    const double v = jac * inv_d2 * std::exp(-std::numbers::pi * (d1 * d1 + d2 * d2) * inv_d2);
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  return {mean, std::sqrt(std::max(0.0, sum2 / n - mean * mean) / n)};
}

}  // namespace parawork::oracle
