#include "parawork/spectral.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>

#include "parawork/error.hpp"
#include "parawork/parallel.hpp"

namespace parawork {

namespace {

std::vector<cplx> roots_of_unity(std::uint32_t p) {
  std::vector<cplx> w(p);
  for (std::uint32_t k = 0; k < p; ++k) {
    const double ang = 2.0 * std::numbers::pi * k / p;
    w[k] = {std::cos(ang), std::sin(ang)};
  }
  return w;
}

// trace(a x) for all a, x.
std::vector<std::uint32_t> trace_table(const FieldCtx& ctx) {
  const std::uint32_t q = ctx.q();
  std::vector<std::uint32_t> t(std::size_t{q} * q);
  for (std::uint32_t a = 0; a < q; ++a)
    for (std::uint32_t x = 0; x < q; ++x) t[std::size_t{a} * q + x] = ctx.trace(ctx.mul(a, x));
  return t;
}

}  // namespace

cplx char_eval(const FieldCtx& ctx, std::uint32_t a, std::uint32_t x) {
  const double ang = 2.0 * std::numbers::pi * ctx.trace(ctx.mul(a, x)) / ctx.p();
  return {std::cos(ang), std::sin(ang)};
}

cplx char_eval(const FieldCtx& ctx, const FieldElement& a, const FieldElement& x) {
  return char_eval(ctx, ctx.index(a), ctx.index(x));
}

cplx char_sum(const FieldCtx& ctx, std::uint32_t a) {
  const auto w = roots_of_unity(ctx.p());
  cplx s{};
  for (std::uint32_t x = 0; x < ctx.q(); ++x) s += w[ctx.trace(ctx.mul(a, x))];
  return s;
}

cplx char_sum(const FieldCtx& ctx, const FieldElement& a) { return char_sum(ctx, ctx.index(a)); }

std::vector<std::uint32_t> trace_dual_permutation(const FieldCtx& ctx) {
  const std::uint32_t q = ctx.q(), p = ctx.p(), n = ctx.n();
  std::vector<std::uint32_t> basis(n);  // index of t^j
  for (std::uint32_t j = 0; j < n; ++j) {
    std::uint32_t idx = 1;
    for (std::uint32_t k = 0; k < j; ++k) idx *= p;
    basis[j] = idx;
  }
  std::vector<std::uint32_t> perm(q);
  for (std::uint32_t a = 0; a < q; ++a) {
    std::uint32_t out = 0;
    for (std::uint32_t j = n; j-- > 0;) out = out * p + ctx.trace(ctx.mul(a, basis[j]));
    perm[a] = out;
  }
  return perm;
}

double Spectrum::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s);
}

void Spectrum::write_csv(std::ostream& os) const {
  const std::uint32_t q = ctx_.q();
  os << "a_index,b_index,re,im,modulus\n";
  os << std::setprecision(12);
  for (std::uint32_t a = 0; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b) {
      const cplx v = at(a, b);
      os << a << ',' << b << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v) << '\n';
    }
}

double l2_norm(const FieldCtx& ctx, std::span<const cplx> f) {
  const std::size_t q = ctx.q();
  require(f.size() == q * q, ErrorKind::ShapeMismatch, "function must have q^2 entries");
  double s = 0.0;
  for (const auto& v : f) s += std::norm(v);
  return std::sqrt(s / static_cast<double>(q * q));
}

namespace {

// Shared by the forward and inverse naive paths: out(a,b) = sum f(x,y) w^{sign(tr(ax) + tr(by))}.
std::vector<cplx> naive_transform(const FieldCtx& ctx, std::span<const cplx> f, int sign) {
  const std::uint32_t q = ctx.q(), p = ctx.p();
  const auto tr = trace_table(ctx);
  auto w = roots_of_unity(p);
  if (sign < 0)
    for (auto& v : w) v = std::conj(v);
  std::vector<cplx> out(std::size_t{q} * q);
  parallel_chunks(q, [&](std::size_t lo, std::size_t hi) {
    std::vector<cplx> partial(q);
    for (std::size_t a = lo; a < hi; ++a) {
      // Inner transform over x first, then over y.
      for (std::uint32_t y = 0; y < q; ++y) {
        cplx s{};
        for (std::uint32_t x = 0; x < q; ++x) s += f[std::size_t{x} * q + y] * w[tr[a * q + x]];
        partial[y] = s;
      }
      for (std::uint32_t b = 0; b < q; ++b) {
        cplx s{};
        for (std::uint32_t y = 0; y < q; ++y) s += partial[y] * w[tr[std::size_t{b} * q + y]];
        out[a * q + b] = s;
      }
    }
  });
  return out;
}

std::vector<std::size_t> digit_dims(const FieldCtx& ctx) {
  return std::vector<std::size_t>(2 * ctx.n(), ctx.p());
}

}  // namespace

Spectrum fourier_transform(const FieldCtx& ctx, std::span<const cplx> f, TransformPath path) {
  const std::size_t q = ctx.q();
  require(f.size() == q * q, ErrorKind::ShapeMismatch,
          "function has " + std::to_string(f.size()) + " entries, expected q^2 = " + std::to_string(q * q));
  const double norm = 1.0 / static_cast<double>(q * q);
  std::vector<cplx> out;
  if (path == TransformPath::Naive) {
    out = naive_transform(ctx, f, +1);
  } else {
    std::vector<cplx> buf(f.begin(), f.end());
    const auto dims = digit_dims(ctx);
    dft_nd(buf, dims, +1);
    const auto perm = trace_dual_permutation(ctx);
    out.resize(q * q);
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = 0; b < q; ++b) out[a * q + b] = buf[std::size_t{perm[a]} * q + perm[b]];
  }
  for (auto& v : out) v *= norm;
  return Spectrum(ctx, std::move(out));
}

Grid2 inverse_transform(const Spectrum& s, TransformPath path) {
  const FieldCtx& ctx = s.ctx();
  const std::size_t q = ctx.q();
  if (path == TransformPath::Naive) return naive_transform(ctx, s.values(), -1);
  const auto perm = trace_dual_permutation(ctx);
  std::vector<cplx> buf(q * q);
  for (std::size_t a = 0; a < q; ++a)
    for (std::size_t b = 0; b < q; ++b) buf[std::size_t{perm[a]} * q + perm[b]] = s.at(a, b);
  const auto dims = digit_dims(ctx);
  dft_nd(buf, dims, -1);
  return buf;
}

cplx parabola_raw_sum(const FieldCtx& ctx, std::uint32_t a, std::uint32_t b) {
  const auto w = roots_of_unity(ctx.p());
  cplx s{};
  for (std::uint32_t z = 0; z < ctx.q(); ++z) {
    const std::uint32_t t = (ctx.trace(ctx.mul(a, z)) + ctx.trace(ctx.mul(b, ctx.square(z)))) % ctx.p();
    s += w[t];
  }
  return s;
}

cplx parabola_raw_sum(const FieldCtx& ctx, const FieldElement& a, const FieldElement& b) {
  return parabola_raw_sum(ctx, ctx.index(a), ctx.index(b));
}

double parabola_expected_modulus(const FieldCtx& ctx, std::uint32_t a, std::uint32_t b) {
  if (b != 0) return std::sqrt(static_cast<double>(ctx.q()));
  return a == 0 ? static_cast<double>(ctx.q()) : 0.0;
}

Spectrum parabola_spectrum(const FieldCtx& ctx) {
  const std::size_t q = ctx.q();
  std::vector<cplx> ind(q * q, cplx{});
  for (std::uint32_t z = 0; z < q; ++z) ind[std::size_t{z} * q + ctx.square(z)] = 1.0;
  return fourier_transform(ctx, ind, TransformPath::Fast);
}

}  // namespace parawork
