#include <gtest/gtest.h>

#include <set>

#include "parawork/error.hpp"
#include "parawork/ffield.hpp"
#include "support/gen.hpp"
#include "support/poly_oracle.hpp"

namespace parawork {
namespace {

using testing::for_all;
using testing::Gen;

std::vector<std::uint32_t> mod_of(const FieldCtx& f) { return {f.modulus().begin(), f.modulus().end()}; }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvariantViolation;
}

TEST(MakeField, PrimeFieldUsesModulusX) {
  const FieldCtx f = make_field(5, 1);
  EXPECT_EQ(f.q(), 5u);
  EXPECT_EQ(mod_of(f), (std::vector<std::uint32_t>{0, 1}));
}

TEST(MakeField, NineUsesLexSmallestIrreducible) {
  // Lex order on (c0, c1) with constant term most significant last: x^2 + 1
  // is the first monic quadratic without a root in Z_3.
  const FieldCtx f = make_field(3, 2);
  EXPECT_EQ(mod_of(f), (std::vector<std::uint32_t>{1, 0, 1}));
}

TEST(MakeField, DefaultModulusMatchesRootScan) {
  // For quadratics and cubics irreducible means no root; scan in the same
  // order and compare.
  for (auto [p, n] : {std::pair{3u, 2u}, {5u, 2u}, {7u, 2u}, {3u, 3u}, {5u, 3u}}) {
    std::vector<std::uint32_t> first;
    const std::uint32_t count = n == 2 ? p * p : p * p * p;
    for (std::uint32_t idx = 0; idx < count && first.empty(); ++idx) {
      std::vector<std::uint32_t> c(n + 1, 1);
      std::uint32_t v = idx;
      // Lexicographic on the coefficient list, so c0 is the slowest digit.
      for (std::uint32_t i = n; i-- > 0;) {
        c[i] = v % p;
        v /= p;
      }
      bool root = false;
      for (std::uint32_t x = 0; x < p && !root; ++x) {
        std::uint64_t acc = 0;
        for (std::size_t i = c.size(); i-- > 0;) acc = (acc * x + c[i]) % p;
        root = acc == 0;
      }
      if (!root) first = c;
    }
    EXPECT_EQ(mod_of(make_field(p, n)), first) << p << "^" << n;
  }
}

TEST(MakeField, Errors) {
  EXPECT_EQ(kind_of([] { make_field(2, 3); }), ErrorKind::EvenCharacteristic);
  EXPECT_EQ(kind_of([] { make_field(9, 1); }), ErrorKind::NotPrime);
  EXPECT_EQ(kind_of([] { make_field(3, 2, std::vector<std::uint32_t>{2, 0, 1}); }), ErrorKind::Reducible);
  EXPECT_EQ(kind_of([] { make_field(3, 8); }), ErrorKind::TooLarge);
  EXPECT_EQ(kind_of([] { parse_field("9"); }), ErrorKind::NotPrime);
  EXPECT_EQ(kind_of([] { parse_field("abc"); }), ErrorKind::BadConfig);
}

TEST(ParseField, Forms) {
  EXPECT_EQ(parse_field("7").q(), 7u);
  EXPECT_EQ(parse_field("3^2").q(), 9u);
  const FieldCtx f = parse_field("3^2/2,2,1");
  EXPECT_EQ(mod_of(f), (std::vector<std::uint32_t>{2, 2, 1}));
}

TEST(Arithmetic, SpecExamples) {
  const FieldCtx f5 = make_field(5, 1);
  EXPECT_EQ(f5.mul(2, 3), 1u);
  const FieldCtx f7 = make_field(7, 1);
  EXPECT_EQ(f7.inv(3), 5u);
  const FieldCtx f9 = make_field(3, 2);
  const std::uint32_t t = f9.index(f9.generator_t());
  EXPECT_EQ(t, 3u);
  EXPECT_EQ(f9.mul(t, t), 2u);
  EXPECT_EQ(kind_of([&] { f9.inv(0); }), ErrorKind::DivisionByZero);
}

TEST(Trace, SpecExamples) {
  const FieldCtx f9 = make_field(3, 2);
  EXPECT_EQ(f9.trace(1), 2u);
  EXPECT_EQ(f9.trace(3), 0u);  // t
  EXPECT_EQ(make_field(5, 1).trace(3), 3u);
}

TEST(Enumerate, PositionalOrder) {
  const FieldCtx f9 = make_field(3, 2);
  const auto all = enumerate(f9);
  ASSERT_EQ(all.size(), 9u);
  for (std::uint32_t i = 0; i < 9; ++i) {
    EXPECT_EQ(all[i][0] + 3 * all[i][1], i);
    EXPECT_EQ(f9.index(all[i]), i);
  }
  EXPECT_EQ(enumerate(make_field(3, 1)).size(), 3u);
}

TEST(Properties, TablesMatchPolynomialOracle) {
  for (const char* spec : {"3", "5", "3^2", "5^2", "3^3", "7^2", "3^4"}) {
    const FieldCtx f = parse_field(spec);
    const testing::PolyField pf{f.p(), mod_of(f)};
    const std::uint32_t q = f.q();
    for (std::uint32_t a = 0; a < q; ++a) {
      const auto da = pf.digits(a);
      ASSERT_EQ(f.trace(a), pf.trace(da)) << spec << " a=" << a;
      for (std::uint32_t b = 0; b < q; b += (q > 30 ? 7 : 1)) {
        const auto db = pf.digits(b);
        ASSERT_EQ(f.add(a, b), pf.index(pf.add(da, db)));
        ASSERT_EQ(f.mul(a, b), pf.index(pf.mul(da, db)));
      }
    }
  }
}

TEST(Properties, FieldAxiomsOnRandomTriples) {
  for_all(11, 400, [](Gen& g, int) {
    const FieldCtx f = g.field(81);
    const auto a = g.element(f), b = g.element(f), c = g.element(f);
    EXPECT_EQ(f.add(a, b), f.add(b, a));
    EXPECT_EQ(f.mul(a, b), f.mul(b, a));
    EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
    EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    EXPECT_EQ(f.add(a, f.neg(a)), 0u);
    EXPECT_EQ(f.sub(a, b), f.add(a, f.neg(b)));
    if (a != 0) {
      EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
      EXPECT_EQ(f.index(pow(f, f.element(a), f.q() - 1)), 1u);
    }
    EXPECT_EQ(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % f.p());
    EXPECT_EQ(f.trace(f.index(pow(f, f.element(a), f.p()))), f.trace(a));
    EXPECT_EQ(f.square(a), f.mul(a, a));
  });
}

TEST(Properties, EnumerateIsBijection) {
  for (const char* spec : {"3", "7", "3^2", "5^2", "3^3"}) {
    const FieldCtx f = parse_field(spec);
    std::set<std::vector<std::uint32_t>> seen;
    for (const auto& e : enumerate(f)) {
      f.check(e);
      seen.insert({e.coeffs().begin(), e.coeffs().end()});
    }
    EXPECT_EQ(seen.size(), f.q());
  }
}

TEST(ElementApi, FreeFunctionsAgreeWithIndices) {
  const FieldCtx f = parse_field("5^2");
  for (std::uint32_t a = 0; a < f.q(); a += 3)
    for (std::uint32_t b = 0; b < f.q(); b += 2) {
      const auto ea = f.element(a), eb = f.element(b);
      EXPECT_EQ(f.index(add(f, ea, eb)), f.add(a, b));
      EXPECT_EQ(f.index(sub(f, ea, eb)), f.sub(a, b));
      EXPECT_EQ(f.index(mul(f, ea, eb)), f.mul(a, b));
      EXPECT_EQ(f.index(neg(f, ea)), f.neg(a));
      EXPECT_EQ(trace(f, ea), f.trace(a));
      if (a) {
        EXPECT_EQ(f.index(inv(f, ea)), f.inv(a));
      }
    }
  EXPECT_EQ(f.from_int(-1), f.element(4));
}

}  // namespace
}  // namespace parawork
