#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "parawork/ffield.hpp"
#include "parawork/pgeom.hpp"
#include "parawork/progressions.hpp"

// Slow reference computations. None of these call the algorithm they are
// used to check; they share only field arithmetic and data containers.
namespace parawork::oracle {

/// Triple loop over (x, y, z) using field addition and squaring.
std::uint64_t brute_pair_count(const PointSet2& a, bool nontrivial_only);

/// True when (x, y) and (x + z, y + z^2) both lie in A and z != 0.
bool is_witness(const PointSet2& a, const Triple& t);

/// Largest avoider of {x, x + (z, z^2)} by enumerating every subset of
/// F_q^2. Only for q^2 <= 25.
std::uint64_t max_avoider_by_subsets(const FieldCtx& ctx);

/// Largest subset of F_q avoiding {x, x + z^2} by enumerating every subset.
/// Only for q <= 20.
std::uint64_t max_avoider_1d_by_subsets(const FieldCtx& ctx);

/// Expected |S(a, b)| from the case split on (a, b).
double gauss_modulus_case(std::uint32_t a_index, std::uint32_t b_index, std::uint32_t q);

/// Minimum of sum_j n_j 2^{-j s} over covers of K by dyadic rectangles of
/// generations 0..2, listed exhaustively. Depth-2 grids only.
struct CoverOptimum {
  double value = 0.0;
  std::vector<std::uint64_t> count;
};
CoverOptimum min_cover_depth2(const GridSet& k, double s);

/// Monte-Carlo estimate of the triple integral of psi_delta(x - y - w) with
/// x, y uniform on [0, 1]^2 and w on the truncated parabola of parameter A.
struct MonteCarlo {
  double mean = 0.0;
  double stderr_ = 0.0;
};
MonteCarlo functional_uniform_mc(double A, double delta, std::uint64_t samples, std::uint64_t seed);

}  // namespace parawork::oracle
