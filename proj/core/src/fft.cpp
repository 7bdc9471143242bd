#include "parawork/fft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "parawork/error.hpp"

namespace parawork {

namespace {

constexpr std::size_t kDirectMax = 16;

cplx unit_root(std::size_t k, std::size_t n) {
  const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(ang), std::sin(ang)};
}

}  // namespace

std::size_t next_pow2(std::size_t n) noexcept { return std::bit_ceil(std::max<std::size_t>(n, 1)); }

void fft_radix2(std::span<cplx> a, int sign) {
  const std::size_t n = a.size();
  require(std::has_single_bit(n), ErrorKind::InvariantViolation, "radix-2 length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    // Twiddles computed per stage from exact angles to avoid drift.
    std::vector<cplx> w(half);
    for (std::size_t k = 0; k < half; ++k) {
      const cplx r = unit_root(k, len);
      w[k] = sign > 0 ? r : std::conj(r);
    }
    for (std::size_t i = 0; i < n; i += len)
      for (std::size_t k = 0; k < half; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + half] * w[k];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
  }
}

DftPlan::DftPlan(std::size_t n) : n_(n) {
  require(n >= 1, ErrorKind::BadConfig, "transform length must be positive");
  roots_.resize(n);
  for (std::size_t k = 0; k < n; ++k) roots_[k] = unit_root(k, n);
  if (std::has_single_bit(n)) {
    kind_ = Kind::Radix2;
  } else if (n <= kDirectMax) {
    kind_ = Kind::Direct;
  } else {
    kind_ = Kind::Bluestein;
    m_ = next_pow2(2 * n - 1);
    chirp_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      // k^2 mod 2n keeps the angle argument small and exact.
      const std::size_t e = (k * k) % (2 * n);
      const double ang = std::numbers::pi * static_cast<double>(e) / static_cast<double>(n);
      chirp_[k] = {std::cos(ang), std::sin(ang)};
    }
    auto make_kernel = [&](int sign) {
      std::vector<cplx> b(m_, cplx{});
      for (std::size_t k = 0; k < n; ++k) {
        const cplx c = sign > 0 ? std::conj(chirp_[k]) : chirp_[k];
        b[k] = c;
        if (k) b[m_ - k] = c;
      }
      fft_radix2(b, -1);
      return b;
    };
    kernel_fwd_ = make_kernel(+1);
    kernel_inv_ = make_kernel(-1);
  }
}

void DftPlan::run(std::span<cplx> data, int sign) const {
  require(data.size() == n_, ErrorKind::ShapeMismatch, "transform length mismatch");
  switch (kind_) {
    case Kind::Radix2:
      fft_radix2(data, sign);
      return;
    case Kind::Direct: {
      std::vector<cplx> out(n_);
      for (std::size_t k = 0; k < n_; ++k) {
        cplx acc{};
        for (std::size_t j = 0; j < n_; ++j) {
          const cplx r = roots_[(j * k) % n_];
          acc += data[j] * (sign > 0 ? r : std::conj(r));
        }
        out[k] = acc;
      }
      std::copy(out.begin(), out.end(), data.begin());
      return;
    }
    case Kind::Bluestein: {
      // jk = (j^2 + k^2 - (k-j)^2) / 2
      std::vector<cplx> a(m_, cplx{});
      for (std::size_t j = 0; j < n_; ++j) a[j] = data[j] * (sign > 0 ? chirp_[j] : std::conj(chirp_[j]));
      fft_radix2(a, -1);
      const auto& ker = sign > 0 ? kernel_fwd_ : kernel_inv_;
      for (std::size_t i = 0; i < m_; ++i) a[i] *= ker[i];
      fft_radix2(a, +1);
      const double scale = 1.0 / static_cast<double>(m_);
      for (std::size_t k = 0; k < n_; ++k)
        data[k] = a[k] * scale * (sign > 0 ? chirp_[k] : std::conj(chirp_[k]));
      return;
    }
  }
}

void dft_nd(std::span<cplx> data, std::span<const std::size_t> dims, int sign) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  require(total == data.size(), ErrorKind::ShapeMismatch, "dimension product does not match data length");
  std::size_t stride = total;
  std::vector<cplx> line;
  for (std::size_t axis = 0; axis < dims.size(); ++axis) {
    const std::size_t len = dims[axis];
    stride /= len;
    if (len == 1) continue;
    const DftPlan plan(len);
    line.resize(len);
    const std::size_t block = len * stride;
    for (std::size_t base = 0; base < total; base += block)
      for (std::size_t off = 0; off < stride; ++off) {
        for (std::size_t k = 0; k < len; ++k) line[k] = data[base + off + k * stride];
        plan.run(line, sign);
        for (std::size_t k = 0; k < len; ++k) data[base + off + k * stride] = line[k];
      }
  }
}

std::vector<double> autocorrelate2d(std::span<const double> a, std::size_t rows, std::size_t cols) {
  require(a.size() == rows * cols, ErrorKind::ShapeMismatch, "autocorrelation input shape");
  const std::size_t R = next_pow2(2 * rows - 1), C = next_pow2(2 * cols - 1);
  std::vector<cplx> buf(R * C, cplx{});
  bool nonneg = true;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      buf[r * C + c] = a[r * cols + c];
      nonneg = nonneg && a[r * cols + c] >= 0.0;
    }
  const std::size_t dims[2] = {R, C};
  dft_nd(buf, dims, -1);
  for (auto& v : buf) v = std::norm(v);
  dft_nd(buf, dims, +1);
  const double scale = 1.0 / static_cast<double>(R * C);
  const std::size_t orows = 2 * rows - 1, ocols = 2 * cols - 1;
  std::vector<double> out(orows * ocols);
  for (std::size_t i = 0; i < orows; ++i)
    for (std::size_t j = 0; j < ocols; ++j) {
      const std::ptrdiff_t dr = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(rows - 1);
      const std::ptrdiff_t dc = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(cols - 1);
      const std::size_t rr = static_cast<std::size_t>((dr + static_cast<std::ptrdiff_t>(R)) % static_cast<std::ptrdiff_t>(R));
      const std::size_t cc = static_cast<std::size_t>((dc + static_cast<std::ptrdiff_t>(C)) % static_cast<std::ptrdiff_t>(C));
      double v = buf[rr * C + cc].real() * scale;
      if (nonneg && v < 0.0) v = 0.0;
      out[i * ocols + j] = v;
    }
  return out;
}

std::vector<double> autocorrelate2d_direct(std::span<const double> a, std::size_t rows, std::size_t cols) {
  require(a.size() == rows * cols, ErrorKind::ShapeMismatch, "autocorrelation input shape");
  const std::size_t orows = 2 * rows - 1, ocols = 2 * cols - 1;
  std::vector<double> out(orows * ocols, 0.0);
  for (std::size_t r1 = 0; r1 < rows; ++r1)
    for (std::size_t c1 = 0; c1 < cols; ++c1) {
      const double v1 = a[r1 * cols + c1];
      if (v1 == 0.0) continue;
      for (std::size_t r2 = 0; r2 < rows; ++r2)
        for (std::size_t c2 = 0; c2 < cols; ++c2) {
          const double v2 = a[r2 * cols + c2];
          if (v2 == 0.0) continue;
          out[(r2 + rows - 1 - r1) * ocols + (c2 + cols - 1 - c1)] += v1 * v2;
        }
    }
  return out;
}

}  // namespace parawork
