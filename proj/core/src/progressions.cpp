#include "parawork/progressions.hpp"

#include <algorithm>
#include <bit>
#include <tuple>
#include <cmath>

#include "parawork/error.hpp"
#include "parawork/parallel.hpp"

namespace parawork {

PointSet2::PointSet2(FieldCtx ctx) : ctx_(std::move(ctx)), words_((cells() + 63) / 64, 0) {}

PointSet2 PointSet2::full(const FieldCtx& ctx) {
  PointSet2 s(ctx);
  for (std::size_t c = 0; c < s.cells(); ++c) s.insert(c);
  return s;
}

PointSet2 PointSet2::from_indices(const FieldCtx& ctx, std::span<const std::uint32_t> cells) {
  PointSet2 s(ctx);
  for (auto c : cells) s.insert(c);
  return s;
}

void PointSet2::insert(std::size_t cell) {
  require(cell < cells(), ErrorKind::ShapeMismatch, "cell index outside F_q^2");
  words_[cell >> 6] |= std::uint64_t{1} << (cell & 63);
}

void PointSet2::erase(std::size_t cell) {
  require(cell < cells(), ErrorKind::ShapeMismatch, "cell index outside F_q^2");
  words_[cell >> 6] &= ~(std::uint64_t{1} << (cell & 63));
}

std::uint64_t PointSet2::size() const noexcept {
  std::uint64_t n = 0;
  for (auto w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
  return n;
}

std::vector<std::uint32_t> PointSet2::members() const {
  std::vector<std::uint32_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w)
    for (std::uint64_t bits = words_[w]; bits; bits &= bits - 1)
      out.push_back(static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
  return out;
}

PointSet2 PointSet2::translate(std::uint32_t vx, std::uint32_t vy) const {
  PointSet2 out(ctx_);
  const std::uint32_t qq = q();
  for (auto c : members()) out.insert(ctx_.add(c / qq, vx), ctx_.add(c % qq, vy));
  return out;
}

Grid2 PointSet2::indicator() const {
  Grid2 f(cells(), cplx{});
  for (auto c : members()) f[c] = 1.0;
  return f;
}

double progression_lower_bound(std::uint64_t size, std::uint32_t q) {
  const double qd = q;
  const double alpha = static_cast<double>(size) / (qd * qd);
  return (alpha - 1.0 / std::sqrt(qd)) * alpha * qd * qd * qd;
}

CountReport count_pairs(const PointSet2& a) {
  const FieldCtx& ctx = a.ctx();
  const std::uint32_t q = ctx.q();
  const auto pts = a.members();

  // One slot per z; reduced in z order afterwards.
  std::vector<std::uint64_t> per_z(q, 0);
  std::vector<std::optional<Triple>> first(q);
  parallel_chunks(q, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t zi = lo; zi < hi; ++zi) {
      const auto z = static_cast<std::uint32_t>(zi);
      const std::uint32_t z2 = ctx.square(z);
      std::uint64_t n = 0;
      for (auto c : pts) {
        const std::uint32_t x = c / q, y = c % q;
        if (a.contains(ctx.add(x, z), ctx.add(y, z2))) {
          if (n == 0) first[z] = Triple{x, y, z};
          ++n;
        }
      }
      per_z[z] = n;
    }
  });

  CountReport r;
  r.trivial = per_z[0];
  for (std::uint32_t z = 1; z < q; ++z) {
    r.nontrivial += per_z[z];
    // members() is ascending, so first[z] is the smallest (x, y) for this z.
    if (first[z]) {
      const Triple& t = *first[z];
      if (!r.witness || std::tie(t.x, t.y, t.z) < std::tie(r.witness->x, r.witness->y, r.witness->z)) r.witness = t;
    }
  }
  r.total = r.trivial + r.nontrivial;
  r.bound = progression_lower_bound(a.size(), q);
  require(r.trivial == a.size(), ErrorKind::InvariantViolation, "z = 0 slice must count every point once");
  require(static_cast<double>(r.total) >= r.bound - 1e-9 * std::max(1.0, std::abs(r.bound)),
          ErrorKind::InvariantViolation, "progression count below the Fourier lower bound");
  return r;
}

cplx progression_sum_direct(const FieldCtx& ctx, std::span<const cplx> f, std::span<const cplx> g) {
  const std::size_t q = ctx.q();
  require(f.size() == q * q && g.size() == q * q, ErrorKind::ShapeMismatch, "f and g must have q^2 entries");
  std::vector<cplx> per_z(q);
  parallel_chunks(q, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t zi = lo; zi < hi; ++zi) {
      const auto z = static_cast<std::uint32_t>(zi);
      const std::uint32_t z2 = ctx.square(z);
      cplx s{};
      for (std::uint32_t x = 0; x < q; ++x) {
        const std::size_t row = std::size_t{ctx.add(x, z)} * q;
        for (std::uint32_t y = 0; y < q; ++y) s += f[std::size_t{x} * q + y] * g[row + ctx.add(y, z2)];
      }
      per_z[zi] = s;
    }
  });
  cplx total{};
  for (const auto& v : per_z) total += v;
  return total;
}

cplx progression_sum_spectral(const FieldCtx& ctx, std::span<const cplx> f, std::span<const cplx> g,
                              bool exclude_origin) {
  const std::uint32_t q = ctx.q();
  const Spectrum pi = parabola_spectrum(ctx);
  const Spectrum fh = fourier_transform(ctx, f);
  const Spectrum gh = fourier_transform(ctx, g);
  const double q4 = std::pow(static_cast<double>(q), 4);
  cplx s{};
  for (std::uint32_t a = 0; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b) {
      if (exclude_origin && a == 0 && b == 0) continue;
      s += pi.at(a, b) * fh.at(a, b) * gh.at(ctx.neg(a), ctx.neg(b));
    }
  return q4 * s;
}

CountingError counting_error(const FieldCtx& ctx, std::span<const cplx> f, std::span<const cplx> g) {
  const std::size_t q = ctx.q();
  require(f.size() == q * q && g.size() == q * q, ErrorKind::ShapeMismatch, "f and g must have q^2 entries");
  cplx sf{}, sg{};
  for (const auto& v : f) sf += v;
  for (const auto& v : g) sg += v;
  const cplx main = sf * sg / static_cast<double>(q);

  CountingError e;
  e.lhs_direct = std::abs(progression_sum_direct(ctx, f, g) - main);
  e.lhs_spectral = std::abs(progression_sum_spectral(ctx, f, g, true));
  e.rhs_bound = std::pow(static_cast<double>(q), 2.5) * l2_norm(ctx, f) * l2_norm(ctx, g);

  const double scale = std::max({e.lhs_direct, e.lhs_spectral, 1e-6 * e.rhs_bound});
  require(std::abs(e.lhs_direct - e.lhs_spectral) <= 1e-7 * scale, ErrorKind::InvariantViolation,
          "direct and spectral defect evaluations disagree");
  require(e.lhs_direct <= e.rhs_bound * (1.0 + 1e-9), ErrorKind::InvariantViolation,
          "counting defect exceeds q^{5/2} ||f|| ||g||");
  return e;
}

std::uint64_t threshold_size(std::uint32_t q) {
  const std::uint64_t q3 = std::uint64_t{q} * q * q;
  auto k = static_cast<std::uint64_t>(std::floor(2.0 * std::pow(static_cast<double>(q), 1.5)));
  while (k > 0 && (k - 1) * (k - 1) >= 4 * q3) --k;
  while (k * k < 4 * q3) ++k;
  return k;
}

ThresholdVerdict check_threshold(const PointSet2& a) {
  ThresholdVerdict v;
  v.size = a.size();
  const std::uint64_t q = a.q();
  v.above_threshold = v.size * v.size >= 4 * q * q * q;
  const CountReport r = count_pairs(a);
  v.witness = r.witness;
  if (v.above_threshold) {
    require(v.witness.has_value(), ErrorKind::InvariantViolation,
            "set of size >= 2 q^{3/2} without a nontrivial progression");
    v.summary = "above threshold, witness found";
  } else {
    v.summary = v.witness ? "below threshold, witness found" : "below threshold, none found";
  }
  return v;
}

}  // namespace parawork
