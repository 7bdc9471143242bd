#pragma once

#include <complex>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "parawork/ffield.hpp"
#include "parawork/fft.hpp"

namespace parawork {

/// Functions on F_q^2 are dense arrays of length q^2 indexed by
/// x_index * q + y_index.
using Grid2 = std::vector<cplx>;

/// The additive character xi_a(x) = exp(2 pi i Tr(a x) / p).
cplx char_eval(const FieldCtx& ctx, const FieldElement& a, const FieldElement& x);
cplx char_eval(const FieldCtx& ctx, std::uint32_t a, std::uint32_t x);

/// Sum of xi_a over the field.
cplx char_sum(const FieldCtx& ctx, const FieldElement& a);
cplx char_sum(const FieldCtx& ctx, std::uint32_t a);

enum class TransformPath { Fast, Naive };

/// Values of f^(a, b) = q^-2 sum f(x, y) xi_a(x) xi_b(y), indexed like Grid2
/// by a_index * q + b_index.
class Spectrum {
 public:
  const FieldCtx& ctx() const noexcept { return ctx_; }
  std::span<const cplx> values() const noexcept { return values_; }
  cplx at(std::uint32_t a, std::uint32_t b) const { return values_[std::size_t{a} * ctx_.q() + b]; }
  /// (sum over characters of |f^|^2)^(1/2).
  double l2_norm() const;

  /// Columns a_index, b_index, re, im, modulus.
  void write_csv(std::ostream& os) const;

 private:
  Spectrum(FieldCtx ctx, std::vector<cplx> v) : ctx_(std::move(ctx)), values_(std::move(v)) {}
  friend Spectrum fourier_transform(const FieldCtx&, std::span<const cplx>, TransformPath);
  FieldCtx ctx_;
  std::vector<cplx> values_;
};

/// Throws ShapeMismatch unless f.size() == q^2.
Spectrum fourier_transform(const FieldCtx& ctx, std::span<const cplx> f, TransformPath path = TransformPath::Fast);

/// f(x, y) = sum f^(a, b) conj(xi_a(x) xi_b(y)).
Grid2 inverse_transform(const Spectrum& s, TransformPath path = TransformPath::Fast);

/// (q^-2 sum |f|^2)^(1/2).
double l2_norm(const FieldCtx& ctx, std::span<const cplx> f);

/// Transform of the indicator of {(z, z^2)}.
Spectrum parabola_spectrum(const FieldCtx& ctx);

/// S(a, b) = sum_z xi_a(z) xi_b(z^2), unnormalized.
cplx parabola_raw_sum(const FieldCtx& ctx, std::uint32_t a, std::uint32_t b);
cplx parabola_raw_sum(const FieldCtx& ctx, const FieldElement& a, const FieldElement& b);

/// Exact modulus class of S(a, b): q at the origin, 0 when only b vanishes,
/// sqrt(q) when b != 0.
double parabola_expected_modulus(const FieldCtx& ctx, std::uint32_t a, std::uint32_t b);

/// Index of M a, where M is the trace form matrix Tr(t^i t^j) in the
/// coefficient basis. Characters of F_q become standard characters of
/// (Z_p)^n under this relabelling, which is what the fast path exploits.
std::vector<std::uint32_t> trace_dual_permutation(const FieldCtx& ctx);

}  // namespace parawork
