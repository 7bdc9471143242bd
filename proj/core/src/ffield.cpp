#include "parawork/ffield.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

#include "parawork/error.hpp"

namespace parawork {

namespace {

using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo the monic polynomial m, over Z_p.
Poly poly_mod(Poly a, std::span<const std::uint32_t> m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    if (lead != 0) {
      for (std::size_t i = 0; i <= dm; ++i) {
        const std::uint64_t sub = (lead * m[i]) % p;
        a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
      }
    }
    a.pop_back();
    trim(a);
  }
  return a;
}

Poly poly_mul(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  }
  Poly out(acc.begin(), acc.end());
  trim(out);
  return out;
}

Poly pad(Poly a, std::size_t n) {
  a.resize(n, 0);
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

}  // namespace

struct FieldCtx::Tables {
  std::uint32_t p = 0, n = 0, q = 0;
  Poly modulus;
  std::vector<std::uint32_t> add;    // q*q, only for extension fields
  std::vector<std::uint32_t> exp;    // 2(q-1) entries: g^i
  std::vector<std::uint32_t> log;    // q entries, log[0] unused
  std::vector<std::uint32_t> trace;  // q entries
  std::vector<std::uint32_t> basis_trace;  // Tr(t^i), i < n

  std::uint32_t digit_add(std::uint32_t a, std::uint32_t b) const noexcept {
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t da = a % p, db = b % p;
      out += ((da + db) % p) * scale;
      a /= p;
      b /= p;
      scale *= p;
    }
    return out;
  }
  std::uint32_t digit_neg(std::uint32_t a) const noexcept {
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      out += ((p - a % p) % p) * scale;
      a /= p;
      scale *= p;
    }
    return out;
  }
};

bool is_prime(std::uint64_t v) noexcept {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> monic) {
  const std::size_t deg = monic.size() - 1;
  if (deg <= 1) return deg == 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t k = 0; k < count; ++k) {
      Poly f(d + 1);
      std::uint64_t r = k;
      for (std::size_t i = 0; i < d; ++i) {
        f[i] = static_cast<std::uint32_t>(r % p);
        r /= p;
      }
      f[d] = 1;
      if (poly_mod(Poly(monic.begin(), monic.end()), f, p).empty()) return false;
    }
  }
  return true;
}

FieldCtx make_field(std::uint32_t p, std::uint32_t n, std::optional<std::vector<std::uint32_t>> modulus,
                    std::uint32_t q_max) {
  require(is_prime(p), ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  require(p != 2, ErrorKind::EvenCharacteristic, "characteristic must be odd");
  require(n >= 1, ErrorKind::BadConfig, "extension degree must be at least 1");
  std::uint64_t q64 = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    q64 *= p;
    require(q64 <= q_max, ErrorKind::TooLarge,
            std::to_string(p) + "^" + std::to_string(n) + " exceeds the field size cap " + std::to_string(q_max));
  }
  const auto q = static_cast<std::uint32_t>(q64);

  auto t = std::make_shared<FieldCtx::Tables>();
  t->p = p;
  t->n = n;
  t->q = q;

  if (modulus) {
    const Poly& m = *modulus;
    require(m.size() == n + 1, ErrorKind::BadModulus, "modulus must have n + 1 coefficients");
    require(m.back() == 1, ErrorKind::BadModulus, "modulus must be monic");
    for (auto c : m) require(c < p, ErrorKind::BadModulus, "modulus coefficients must lie in [0, p)");
    require(is_irreducible(p, m), ErrorKind::Reducible, "modulus is reducible over Z_p");
    t->modulus = m;
  } else {
    // Lexicographic order on (c0, ..., c_{n-1}): c0 is the most significant digit.
    const std::uint32_t count = q;
    for (std::uint32_t k = 0; k < count; ++k) {
      Poly m(n + 1);
      std::uint32_t r = k;
      for (std::uint32_t i = n; i-- > 0;) {
        m[i] = r % p;
        r /= p;
      }
      m[n] = 1;
      if (is_irreducible(p, m)) {
        t->modulus = std::move(m);
        break;
      }
    }
    require(!t->modulus.empty(), ErrorKind::InvariantViolation, "no irreducible polynomial found");
  }

  FieldCtx ctx{t};
  auto& tab = *t;

  if (n > 1 && q <= 4096) {
    tab.add.resize(std::size_t{q} * q);
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) tab.add[std::size_t{a} * q + b] = tab.digit_add(a, b);
  }

  // Primitive element and log/exp tables.
  const auto factors = prime_factors(q - 1);
  std::uint32_t gen = 0;
  for (std::uint32_t cand = 1; cand < q && gen == 0; ++cand) {
    const FieldElement g = ctx.element(cand);
    bool primitive = true;
    for (auto r : factors)
      if (pow(ctx, g, (q - 1) / r) == ctx.one()) {
        primitive = false;
        break;
      }
    if (primitive) gen = cand;
  }
  require(gen != 0, ErrorKind::InvariantViolation, "no primitive element found");
  tab.exp.resize(2 * std::size_t{q - 1});
  tab.log.assign(q, 0);
  {
    const FieldElement g = ctx.element(gen);
    FieldElement cur = ctx.one();
    for (std::uint32_t i = 0; i < q - 1; ++i) {
      const std::uint32_t idx = ctx.index(cur);
      tab.exp[i] = idx;
      tab.exp[i + q - 1] = idx;
      tab.log[idx] = i;
      cur = mul(ctx, cur, g);
    }
    require(cur == ctx.one(), ErrorKind::InvariantViolation, "generator order mismatch");
  }

  // Trace of the basis t^i via Frobenius powering; the trace is Z_p-linear.
  tab.basis_trace.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    Poly ti(n, 0);
    ti[i] = 1;
    const FieldElement base{ti};
    FieldElement acc = ctx.zero();
    FieldElement frob = base;
    for (std::uint32_t k = 0; k < n; ++k) {
      acc = add(ctx, acc, frob);
      frob = pow(ctx, frob, p);
    }
    for (std::uint32_t k = 1; k < n; ++k)
      require(acc[k] == 0, ErrorKind::InvariantViolation, "trace left the prime subfield");
    tab.basis_trace[i] = acc[0];
  }
  tab.trace.resize(q);
  for (std::uint32_t a = 0; a < q; ++a) {
    std::uint64_t s = 0;
    std::uint32_t r = a;
    for (std::uint32_t i = 0; i < n; ++i) {
      s += std::uint64_t{r % p} * tab.basis_trace[i];
      r /= p;
    }
    tab.trace[a] = static_cast<std::uint32_t>(s % p);
  }
  return ctx;
}

FieldCtx parse_field(std::string_view spec, std::uint32_t q_max) {
  auto bad = [&](const std::string& why) {
    fail(ErrorKind::BadConfig, "field spec '" + std::string(spec) + "': " + why);
  };
  auto parse_uint = [&](std::string_view s) -> std::uint32_t {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) bad("expected an integer, got '" + std::string(s) + "'");
    return v;
  };
  std::string_view head = spec;
  std::optional<std::vector<std::uint32_t>> modulus;
  if (auto slash = spec.find('/'); slash != std::string_view::npos) {
    head = spec.substr(0, slash);
    std::vector<std::uint32_t> coeffs;
    std::string_view rest = spec.substr(slash + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      coeffs.push_back(parse_uint(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    modulus = std::move(coeffs);
  }
  std::uint32_t p = 0, n = 1;
  if (auto caret = head.find('^'); caret != std::string_view::npos) {
    p = parse_uint(head.substr(0, caret));
    n = parse_uint(head.substr(caret + 1));
  } else {
    p = parse_uint(head);
  }
  return make_field(p, n, std::move(modulus), q_max);
}

std::uint32_t FieldCtx::p() const noexcept { return t_->p; }
std::uint32_t FieldCtx::n() const noexcept { return t_->n; }
std::uint32_t FieldCtx::q() const noexcept { return t_->q; }
std::span<const std::uint32_t> FieldCtx::modulus() const noexcept { return t_->modulus; }

FieldElement FieldCtx::element(std::uint32_t index) const {
  require(index < t_->q, ErrorKind::BadConfig, "element index out of range");
  std::vector<std::uint32_t> c(t_->n);
  for (std::uint32_t i = 0; i < t_->n; ++i) {
    c[i] = index % t_->p;
    index /= t_->p;
  }
  return FieldElement{std::move(c)};
}

std::uint32_t FieldCtx::index(const FieldElement& e) const {
  check(e);
  std::uint32_t idx = 0;
  for (std::uint32_t i = t_->n; i-- > 0;) idx = idx * t_->p + e[i];
  return idx;
}

FieldElement FieldCtx::zero() const { return FieldElement{std::vector<std::uint32_t>(t_->n, 0)}; }

FieldElement FieldCtx::one() const {
  std::vector<std::uint32_t> c(t_->n, 0);
  c[0] = 1;
  return FieldElement{std::move(c)};
}

FieldElement FieldCtx::from_int(long long v) const {
  const long long p = t_->p;
  std::vector<std::uint32_t> c(t_->n, 0);
  c[0] = static_cast<std::uint32_t>(((v % p) + p) % p);
  return FieldElement{std::move(c)};
}

FieldElement FieldCtx::generator_t() const {
  Poly x{0, 1};
  return FieldElement{pad(poly_mod(x, t_->modulus, t_->p), t_->n)};
}

void FieldCtx::check(const FieldElement& e) const {
  require(e.degree_bound() == t_->n, ErrorKind::ShapeMismatch,
          "element has " + std::to_string(e.degree_bound()) + " coefficients, field degree is " + std::to_string(t_->n));
  for (auto c : e.coeffs()) require(c < t_->p, ErrorKind::BadConfig, "coefficient out of range [0, p)");
}

std::uint32_t FieldCtx::add(std::uint32_t a, std::uint32_t b) const noexcept {
  if (t_->n == 1) {
    const std::uint32_t s = a + b;
    return s >= t_->p ? s - t_->p : s;
  }
  if (!t_->add.empty()) return t_->add[std::size_t{a} * t_->q + b];
  return t_->digit_add(a, b);
}

std::uint32_t FieldCtx::neg(std::uint32_t a) const noexcept {
  if (t_->n == 1) return a == 0 ? 0 : t_->p - a;
  return t_->digit_neg(a);
}

std::uint32_t FieldCtx::sub(std::uint32_t a, std::uint32_t b) const noexcept { return add(a, neg(b)); }

std::uint32_t FieldCtx::mul(std::uint32_t a, std::uint32_t b) const noexcept {
  if (a == 0 || b == 0) return 0;
  if (t_->n == 1) return static_cast<std::uint32_t>(std::uint64_t{a} * b % t_->p);
  return t_->exp[std::size_t{t_->log[a]} + t_->log[b]];
}

std::uint32_t FieldCtx::square(std::uint32_t a) const noexcept { return mul(a, a); }

std::uint32_t FieldCtx::inv(std::uint32_t a) const {
  require(a != 0, ErrorKind::DivisionByZero, "inverse of zero");
  const std::uint32_t l = t_->log[a];
  return t_->exp[l == 0 ? 0 : (t_->q - 1) - l];
}

std::uint32_t FieldCtx::trace(std::uint32_t a) const noexcept { return t_->trace[a]; }

std::string FieldCtx::describe() const {
  std::ostringstream os;
  os << t_->p;
  const bool default_prime = t_->n == 1 && t_->modulus[0] == 0;
  if (default_prime) return os.str();
  os << '^' << t_->n << '/';
  for (std::size_t i = 0; i < t_->modulus.size(); ++i) os << (i ? "," : "") << t_->modulus[i];
  return os.str();
}

FieldElement add(const FieldCtx& ctx, const FieldElement& a, const FieldElement& b) {
  ctx.check(a);
  ctx.check(b);
  std::vector<std::uint32_t> c(ctx.n());
  for (std::uint32_t i = 0; i < ctx.n(); ++i) c[i] = (a[i] + b[i]) % ctx.p();
  return FieldElement{std::move(c)};
}

FieldElement neg(const FieldCtx& ctx, const FieldElement& a) {
  ctx.check(a);
  std::vector<std::uint32_t> c(ctx.n());
  for (std::uint32_t i = 0; i < ctx.n(); ++i) c[i] = (ctx.p() - a[i]) % ctx.p();
  return FieldElement{std::move(c)};
}

FieldElement sub(const FieldCtx& ctx, const FieldElement& a, const FieldElement& b) {
  return add(ctx, a, neg(ctx, b));
}

FieldElement mul(const FieldCtx& ctx, const FieldElement& a, const FieldElement& b) {
  ctx.check(a);
  ctx.check(b);
  Poly prod = poly_mul(a.coeffs(), b.coeffs(), ctx.p());
  return FieldElement{pad(poly_mod(std::move(prod), ctx.modulus(), ctx.p()), ctx.n())};
}

FieldElement pow(const FieldCtx& ctx, const FieldElement& a, std::uint64_t e) {
  FieldElement result = ctx.one();
  FieldElement base = a;
  while (e > 0) {
    if (e & 1) result = mul(ctx, result, base);
    base = mul(ctx, base, base);
    e >>= 1;
  }
  return result;
}

FieldElement inv(const FieldCtx& ctx, const FieldElement& a) {
  require(!(a == ctx.zero()), ErrorKind::DivisionByZero, "inverse of zero");
  return pow(ctx, a, std::uint64_t{ctx.q()} - 2);
}

std::uint32_t trace(const FieldCtx& ctx, const FieldElement& a) { return ctx.trace(ctx.index(a)); }

std::vector<FieldElement> enumerate(const FieldCtx& ctx) {
  std::vector<FieldElement> out;
  out.reserve(ctx.q());
  for (std::uint32_t i = 0; i < ctx.q(); ++i) out.push_back(ctx.element(i));
  return out;
}

}  // namespace parawork
