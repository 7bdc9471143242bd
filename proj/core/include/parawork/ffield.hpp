#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parawork {

inline constexpr std::uint32_t kDefaultQMax = 2048;

/// An element of F_{p^n} as its residue polynomial, constant term first.
/// Elements are always stored fully reduced, so equality is coefficient-wise.
class FieldElement {
 public:
  FieldElement() = default;
  explicit FieldElement(std::vector<std::uint32_t> coeffs) : coeffs_(std::move(coeffs)) {}

  std::span<const std::uint32_t> coeffs() const noexcept { return coeffs_; }
  std::uint32_t operator[](std::size_t i) const { return coeffs_[i]; }
  std::size_t degree_bound() const noexcept { return coeffs_.size(); }

  bool operator==(const FieldElement&) const = default;

 private:
  std::vector<std::uint32_t> coeffs_;
};

/// Arithmetic context for F_{p^n}, p an odd prime.
///
/// Elements are addressed two ways: as FieldElement values (polynomial
/// arithmetic, used by the element-level free functions below) and as
/// indices in [0, q), where index = sum c_i p^i. The index form backs the
/// counting and transform kernels through precomputed tables. The context
/// is immutable and cheap to copy; copies share the tables.
class FieldCtx {
 public:
  std::uint32_t p() const noexcept;
  std::uint32_t n() const noexcept;
  std::uint32_t q() const noexcept;
  /// Monic modulus, n + 1 coefficients, constant term first.
  std::span<const std::uint32_t> modulus() const noexcept;
  bool is_prime_field() const noexcept { return n() == 1; }

  FieldElement element(std::uint32_t index) const;
  std::uint32_t index(const FieldElement& e) const;
  FieldElement zero() const;
  FieldElement one() const;
  /// Embeds an integer through the prime subfield.
  FieldElement from_int(long long v) const;
  /// Residue class of the polynomial variable t.
  FieldElement generator_t() const;

  /// Throws ShapeMismatch / BadConfig unless e is a canonical element of this field.
  void check(const FieldElement& e) const;

  // Index-level arithmetic, table backed.
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t neg(std::uint32_t a) const noexcept;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t square(std::uint32_t a) const noexcept;
  /// Requires a != 0.
  std::uint32_t inv(std::uint32_t a) const;
  /// Absolute trace of the element with this index, as a value in [0, p).
  std::uint32_t trace(std::uint32_t a) const noexcept;

  /// "p", or "p^n/c0,...,1" when n > 1.
  std::string describe() const;

  struct Tables;

 private:
  friend FieldCtx make_field(std::uint32_t, std::uint32_t, std::optional<std::vector<std::uint32_t>>,
                             std::uint32_t);
  explicit FieldCtx(std::shared_ptr<const Tables> t) : t_(std::move(t)) {}
  std::shared_ptr<const Tables> t_;
};

/// Builds a validated context. Without an explicit modulus, the modulus is the
/// lexicographically smallest monic irreducible of degree n, comparing
/// coefficient lists constant term first.
/// Errors: NotPrime, EvenCharacteristic, TooLarge, BadModulus, Reducible.
FieldCtx make_field(std::uint32_t p, std::uint32_t n,
                    std::optional<std::vector<std::uint32_t>> modulus = std::nullopt,
                    std::uint32_t q_max = kDefaultQMax);

/// Parses "p", "p^n" or "p^n/c0,c1,...,1".
FieldCtx parse_field(std::string_view spec, std::uint32_t q_max = kDefaultQMax);

// Element-level arithmetic on canonical residues. These go through
// polynomial multiplication and reduction, independently of the tables.
FieldElement add(const FieldCtx& ctx, const FieldElement& a, const FieldElement& b);
FieldElement sub(const FieldCtx& ctx, const FieldElement& a, const FieldElement& b);
FieldElement neg(const FieldCtx& ctx, const FieldElement& a);
FieldElement mul(const FieldCtx& ctx, const FieldElement& a, const FieldElement& b);
/// Throws DivisionByZero for a = 0.
FieldElement inv(const FieldCtx& ctx, const FieldElement& a);
FieldElement pow(const FieldCtx& ctx, const FieldElement& a, std::uint64_t e);

/// Absolute trace Tr(a) = a + a^p + ... + a^{p^{n-1}}, as a value in [0, p).
std::uint32_t trace(const FieldCtx& ctx, const FieldElement& a);

/// All q elements, ordered by index (coefficients read as base-p digits).
std::vector<FieldElement> enumerate(const FieldCtx& ctx);

bool is_prime(std::uint64_t v) noexcept;
/// Exhaustive factor test: true iff the monic polynomial (constant term
/// first) has no monic factor of degree 1..deg/2 over Z_p.
bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> monic);

}  // namespace parawork
