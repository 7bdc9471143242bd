#pragma once

#include <cstdint>
#include <vector>

// Schoolbook polynomial arithmetic over Z_p modulo a monic polynomial,
// written independently of the table-driven field code.
namespace parawork::testing {

struct PolyField {
  std::uint32_t p;
  std::vector<std::uint32_t> modulus;  // monic, constant term first

  std::uint32_t n() const { return static_cast<std::uint32_t>(modulus.size() - 1); }

  std::vector<std::uint32_t> digits(std::uint32_t index) const {
    std::vector<std::uint32_t> c(n());
    for (auto& d : c) {
      d = index % p;
      index /= p;
    }
    return c;
  }
  std::uint32_t index(const std::vector<std::uint32_t>& c) const {
    std::uint32_t v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * p + c[i];
    return v;
  }
  std::vector<std::uint32_t> add(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint32_t> r(n());
    for (std::uint32_t i = 0; i < n(); ++i) r[i] = (a[i] + b[i]) % p;
    return r;
  }
  std::vector<std::uint32_t> mul(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint64_t> prod(2 * n(), 0);
    for (std::uint32_t i = 0; i < n(); ++i)
      for (std::uint32_t j = 0; j < n(); ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
    for (std::size_t k = prod.size(); k-- > n();) {
      const std::uint64_t c = prod[k];
      if (c == 0) continue;
      // x^k = x^{k-n} * (-(modulus without leading term))
      for (std::uint32_t i = 0; i < n(); ++i)
        prod[k - n() + i] = (prod[k - n() + i] + (p - modulus[i]) % p * c) % p;
      prod[k] = 0;
    }
    std::vector<std::uint32_t> r(n());
    for (std::uint32_t i = 0; i < n(); ++i) r[i] = static_cast<std::uint32_t>(prod[i]);
    return r;
  }
  std::vector<std::uint32_t> pow(std::vector<std::uint32_t> a, std::uint64_t e) const {
    std::vector<std::uint32_t> r(n(), 0);
    r[0] = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  /// x + x^p + ... + x^{p^{n-1}}, which lies in Z_p.
  std::uint32_t trace(const std::vector<std::uint32_t>& a) const {
    std::vector<std::uint32_t> sum(n(), 0), term = a;
    for (std::uint32_t k = 0; k < n(); ++k) {
      sum = add(sum, term);
      term = pow(term, p);
    }
    return sum[0];
  }
};

}  // namespace parawork::testing
