#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parawork/ffield.hpp"
#include "parawork/spectral.hpp"

namespace parawork {

/// A subset of F_q^2 stored as a dense bitset over x_index * q + y_index.
class PointSet2 {
 public:
  explicit PointSet2(FieldCtx ctx);
  static PointSet2 full(const FieldCtx& ctx);
  static PointSet2 from_indices(const FieldCtx& ctx, std::span<const std::uint32_t> cells);

  const FieldCtx& ctx() const noexcept { return ctx_; }
  std::uint32_t q() const noexcept { return ctx_.q(); }
  std::size_t cells() const noexcept { return std::size_t{ctx_.q()} * ctx_.q(); }

  bool contains(std::size_t cell) const noexcept { return (words_[cell >> 6] >> (cell & 63)) & 1u; }
  bool contains(std::uint32_t x, std::uint32_t y) const noexcept { return contains(std::size_t{x} * q() + y); }
  void insert(std::size_t cell);
  void erase(std::size_t cell);
  void insert(std::uint32_t x, std::uint32_t y) { insert(std::size_t{x} * q() + y); }

  std::uint64_t size() const noexcept;
  /// alpha = size / q^2 as an exact ratio.
  std::uint64_t alpha_num() const noexcept { return size(); }
  std::uint64_t alpha_den() const noexcept { return cells(); }
  double alpha() const noexcept { return static_cast<double>(size()) / static_cast<double>(cells()); }

  std::vector<std::uint32_t> members() const;
  PointSet2 translate(std::uint32_t vx, std::uint32_t vy) const;
  /// Indicator as a complex grid.
  Grid2 indicator() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  bool operator==(const PointSet2& o) const { return ctx_.describe() == o.ctx_.describe() && words_ == o.words_; }

 private:
  FieldCtx ctx_;
  std::vector<std::uint64_t> words_;
};

struct Triple {
  std::uint32_t x = 0, y = 0, z = 0;
  bool operator==(const Triple&) const = default;
};

struct CountReport {
  std::uint64_t total = 0;
  std::uint64_t trivial = 0;
  std::uint64_t nontrivial = 0;
  /// (alpha - q^-1/2) alpha q^3
  double bound = 0.0;
  /// Lexicographically first (x, y, z) with z != 0.
  std::optional<Triple> witness;
};

/// Exact count of (x, y, z) with (x, y) and (x + z, y + z^2) in A.
/// Throws InvariantViolation if the count falls below report.bound.
CountReport count_pairs(const PointSet2& a);

/// (alpha - q^-1/2) alpha q^3 with alpha held exactly until the final step.
double progression_lower_bound(std::uint64_t size, std::uint32_t q);

/// sum_{x,y,z} f(x,y) g(x+z, y+z^2), evaluated by direct summation.
cplx progression_sum_direct(const FieldCtx& ctx, std::span<const cplx> f, std::span<const cplx> g);

/// The same sum through q^4 sum_{(a,b)} 1_Pi^(a,b) f^(a,b) g^(-a,-b).
/// When exclude_origin is set the (0,0) term is dropped, leaving the
/// deviation from the main term (1/q)(sum f)(sum g).
cplx progression_sum_spectral(const FieldCtx& ctx, std::span<const cplx> f, std::span<const cplx> g,
                              bool exclude_origin = false);

struct CountingError {
  double lhs_direct = 0.0;    ///< |direct sum - main term|
  double lhs_spectral = 0.0;  ///< |sum over nontrivial characters|
  double rhs_bound = 0.0;     ///< q^{5/2} ||f||_2 ||g||_2
};

/// Throws ShapeMismatch for wrong lengths; InvariantViolation if the two
/// evaluations disagree beyond 1e-7 relative or the bound fails.
CountingError counting_error(const FieldCtx& ctx, std::span<const cplx> f, std::span<const cplx> g);

struct ThresholdVerdict {
  bool above_threshold = false;  ///< |A| >= 2 q^{3/2}, decided exactly as |A|^2 >= 4 q^3
  std::uint64_t size = 0;
  std::optional<Triple> witness;
  std::string summary;
};

ThresholdVerdict check_threshold(const PointSet2& a);

/// Smallest integer k with k >= 2 q^{3/2}.
std::uint64_t threshold_size(std::uint32_t q);

}  // namespace parawork
