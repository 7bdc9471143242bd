#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "parawork/ffield.hpp"
#include "parawork/progressions.hpp"

namespace parawork {

inline constexpr std::size_t kExactVertexCap = 100;
inline constexpr std::uint32_t kExact1DCap = 49;

/// Dense adjacency rows, one bitset per vertex.
using BitRows = std::vector<std::vector<std::uint64_t>>;

/// Cayley graph on F_q^2 with connection set S u (-S), S = {(z, z^2) : z != 0}.
/// A set avoids the pair pattern iff it is independent here.
class AvoiderGraph {
 public:
  explicit AvoiderGraph(FieldCtx ctx);

  const FieldCtx& ctx() const noexcept { return ctx_; }
  std::size_t vertices() const noexcept { return std::size_t{ctx_.q()} * ctx_.q(); }
  /// Connection set as cell indices, ascending, without duplicates.
  std::span<const std::uint32_t> connection() const noexcept { return conn_; }
  bool adjacent(std::uint32_t u, std::uint32_t v) const;
  std::vector<std::uint32_t> neighbors(std::uint32_t v) const;
  /// Bitset adjacency rows; vertices() must not exceed max_vertices.
  BitRows adjacency(std::size_t max_vertices = 1u << 14) const;

 private:
  FieldCtx ctx_;
  std::vector<std::uint32_t> conn_;
  std::vector<std::uint8_t> is_conn_;
};

bool avoids(const PointSet2& a);

/// Sets in F_q avoiding {x, x + z^2}, z != 0, as sorted element indices.
bool avoids_1d(const FieldCtx& ctx, std::span<const std::uint32_t> set);

/// F_q x A1. Throws NotAvoiding1D unless A1 avoids the 1D pattern.
PointSet2 product_construction(const FieldCtx& ctx, std::span<const std::uint32_t> a1);

/// Maximum independent set by bitset branch and bound with greedy colouring
/// bounds on the complement. Returns vertex indices, ascending.
std::vector<std::uint32_t> max_independent_set(const BitRows& adj);

struct AvoiderResult {
  std::uint64_t size = 0;
  PointSet2 witness;
};

/// Exact maximum avoider. Throws TooLarge when q^2 exceeds vertex_cap.
AvoiderResult max_avoider_exact(const FieldCtx& ctx, std::size_t vertex_cap = kExactVertexCap);

/// Iterated local search with tabu, warm-started from the product
/// construction. Always returns an avoider; deterministic for a given seed.
AvoiderResult max_avoider_heuristic(const FieldCtx& ctx, std::uint64_t seed, std::uint64_t iterations);

/// Cayley graph on F_q with connection set {+-z^2 : z != 0}.
BitRows avoider_graph_1d(const FieldCtx& ctx);

/// Largest subset of F_q avoiding {x, x + z^2}, with a witness.
std::vector<std::uint32_t> max_avoider_1d(const FieldCtx& ctx, std::uint32_t q_cap = kExact1DCap);

/// Size of the largest 1D avoider; every set one larger contains the
/// pattern. Throws TooLarge above q_cap, InvariantViolation if the size
/// exceeds ceil(sqrt q).
std::uint64_t min_guaranteed_1d(const FieldCtx& ctx, std::uint32_t q_cap = kExact1DCap);

}  // namespace parawork
