#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace parawork {

using cplx = std::complex<double>;

/// Discrete Fourier transform of one fixed length, any n >= 1.
///
/// Computes X_k = sum_j x_j exp(sign * 2 pi i jk / n) without normalization.
/// Powers of two use an iterative radix-2 transform, short lengths a direct
/// sum from a precomputed root table, and everything else Bluestein's chirp
/// reduction onto a power-of-two convolution. Plans are immutable and may be
/// shared across threads.
class DftPlan {
 public:
  explicit DftPlan(std::size_t n);
  std::size_t size() const noexcept { return n_; }
  void run(std::span<cplx> data, int sign) const;

 private:
  enum class Kind { Direct, Radix2, Bluestein };
  std::size_t n_;
  Kind kind_;
  std::vector<cplx> roots_;  // exp(2 pi i k / n), k < n
  std::size_t m_ = 0;        // Bluestein convolution length
  std::vector<cplx> chirp_;  // exp(pi i k^2 / n), k < n
  std::vector<cplx> kernel_fwd_, kernel_inv_;  // transformed chirp filters
  std::shared_ptr<const DftPlan> inner_;
};

/// In-place radix-2 transform; data.size() must be a power of two.
void fft_radix2(std::span<cplx> data, int sign);

/// Transforms a dense row-major array along every axis. dims lists axis
/// lengths, slowest first; the product must equal data.size().
void dft_nd(std::span<cplx> data, std::span<const std::size_t> dims, int sign);

std::size_t next_pow2(std::size_t n) noexcept;

/// Linear autocorrelation of a real rows x cols array:
/// out[(dr + rows - 1) * (2 cols - 1) + dc + cols - 1] = sum a[r][c] a[r+dr][c+dc]
/// for |dr| < rows, |dc| < cols. Uses zero-padded FFTs; tiny negative values
/// from rounding are clamped to zero when the input is non-negative.
std::vector<double> autocorrelate2d(std::span<const double> a, std::size_t rows, std::size_t cols);

/// Same contract, computed by the direct quadratic double sum.
std::vector<double> autocorrelate2d_direct(std::span<const double> a, std::size_t rows, std::size_t cols);

}  // namespace parawork
