#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace parawork {

inline constexpr int kMaxDepth = 7;
inline constexpr int kDefaultDepth = 6;

struct Point {
  double x = 0.0;
  double s = 0.0;
};

/// max{|x - y|, |s - t|^(1/2)}
double parabolic_dist(Point a, Point b);

/// [x, x + 2^-j) x [s, s + 4^-j) with x = ix 2^-j and s = is 4^-j.
struct ParabolicRect {
  int j = 0;
  std::uint64_t ix = 0;
  std::uint64_t is = 0;

  static ParabolicRect unit() { return {}; }
  double x() const;
  double s() const;
  double width() const;   ///< 2^-j, also ell(Q) and the parabolic diameter
  double height() const;  ///< 4^-j
  double ell() const { return width(); }
  bool contains(Point p) const;
  /// Child (cx, cs), cx in {0, 1} along x and cs in {0, 1, 2, 3} along s.
  ParabolicRect child(int cx, int cs) const;
  /// Ancestor at generation g <= j.
  ParabolicRect ancestor(int g) const;
  bool contains(const ParabolicRect& r) const;
  /// Row-major index ix * 4^j + is among the 8^j rectangles of generation j.
  std::uint64_t index() const { return ix * (std::uint64_t{1} << (2 * j)) + is; }
  static ParabolicRect from_index(int j, std::uint64_t idx);
  bool operator==(const ParabolicRect&) const = default;
};

/// T_Q(y, t) = (2^j (y - x), 4^j (t - s)); maps Q onto [0, 1)^2.
Point rescale(const ParabolicRect& q, Point p);
/// Inverse of rescale.
Point unrescale(const ParabolicRect& q, Point p);

/// Number of generation-j rectangles along x and s.
inline std::uint64_t cols_at(int j) { return std::uint64_t{1} << j; }
inline std::uint64_t rows_at(int j) { return std::uint64_t{1} << (2 * j); }
inline std::uint64_t cells_at(int j) { return std::uint64_t{1} << (3 * j); }

/// Union of depth-m cells, indexed like ParabolicRect::index at generation m.
class GridSet {
 public:
  explicit GridSet(int m);
  static GridSet full(int m);
  static GridSet random(int m, double density, std::mt19937_64& rng);

  int depth() const noexcept { return m_; }
  std::uint64_t cells() const noexcept { return cells_at(m_); }
  bool test(std::uint64_t cell) const { return bits_[cell] != 0; }
  void set(std::uint64_t cell, bool on = true);
  std::uint64_t count() const;
  bool empty() const { return count() == 0; }

  /// Cells of K inside Q (generation of Q at most m).
  GridSet restrict_to(const ParabolicRect& q) const;
  GridSet unite(const GridSet& o) const;
  bool subset_of(const GridSet& o) const;
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  bool operator==(const GridSet&) const = default;

 private:
  int m_;
  std::vector<std::uint8_t> bits_;
};

/// Non-negative weights on depth-m cells. Within a cell the measure is
/// spread uniformly; this fixes ball masses and Fourier transforms.
class GridMeasure {
 public:
  explicit GridMeasure(int m);
  GridMeasure(int m, std::vector<double> weights);

  int depth() const noexcept { return m_; }
  std::uint64_t cells() const noexcept { return cells_at(m_); }
  double weight(std::uint64_t cell) const { return w_[cell]; }
  void set_weight(std::uint64_t cell, double w);
  std::span<const double> weights() const noexcept { return w_; }
  double total() const;
  /// mu(Q) for generation(Q) <= m, summed over contained cells.
  double mass(const ParabolicRect& q) const;
  /// Masses of every dyadic rectangle: levels[j][index] for j = 0..m.
  std::vector<std::vector<double>> pyramid() const;
  /// Same measure on a finer grid, each cell split evenly.
  GridMeasure refine(int new_depth) const;

 private:
  int m_;
  std::vector<double> w_;
};

/// Renormalised blow-up: mu restricted to Q, pushed forward by T_Q and
/// scaled to a probability measure on a depth (m - j) grid.
/// Throws ZeroMass when mu(Q) = 0.
GridMeasure blow_up(const GridMeasure& mu, const ParabolicRect& q);

/// Optimal dyadic cover data for K at exponent s.
struct ContentResult {
  double value = 0.0;                  ///< sum_j count[j] * 2^{-j s}, j ascending
  std::vector<std::uint64_t> count;    ///< rectangles of each generation in an optimal cover
  std::vector<std::vector<double>> f;  ///< f[j][i]: content of K inside that rectangle
};

/// Content over covers by rectangles of generation <= m through
/// f(Q) = min(ell(Q)^s, sum of children), leaves ell^s [Q meets K].
/// Throws BadExponent unless 0 < s <= 3.
ContentResult content_dp(const GridSet& k, double s);
double dyadic_content(const GridSet& k, double s);

/// First rectangle, by generation and then index, with content of K inside
/// it at least (1 - delta) ell^s. Throws EmptyContent when K is empty and
/// NoDenseRect when none exists up to max_generation.
ParabolicRect find_dense_rect(const GridSet& k, double s, double delta,
                              std::optional<int> max_generation = std::nullopt);

/// Capped measure: ell_m^s on every cell of K, then for j = m-1 .. 0 every
/// rectangle with mass above ell^s is scaled down to exactly ell^s.
/// Throws BadExponent unless 0 < s <= 3.
GridMeasure frostman(const GridSet& k, double s);

/// The same construction restricted to K inside Q, with caps applied only
/// on generations >= generation(Q). The result lives on the full grid.
GridMeasure frostman_within(const GridSet& k, double s, const ParabolicRect& q);

/// Caps applied only on generations >= top. On each generation-top
/// rectangle Q this agrees with frostman_within(k, s, Q).
GridMeasure frostman_below(const GridSet& k, double s, int top);

/// Largest mu(Q) / ell(Q)^s over all dyadic rectangles.
double max_dyadic_ratio(const GridMeasure& mu, double s);

/// Mass of the axis-parallel box [x0, x1] x [s0, s1] clipped to [0, 1]^2.
class BoxMass {
 public:
  explicit BoxMass(const GridMeasure& mu);
  double operator()(double x0, double x1, double s0, double s1) const;

 private:
  double cumulative(double x, double s) const;
  int m_;
  std::uint64_t cols_, rows_;
  std::vector<double> prefix_;  // (cols + 1) x (rows + 1)
};

/// Parabolic ball {|y - x| <= r, |t - s| <= r^2}.
double parabolic_ball_mass(const BoxMass& bm, Point c, double r);
/// Euclidean ball, taken in the max norm: the square of half-side r.
double euclidean_ball_mass(const BoxMass& bm, Point c, double r);

enum class BallKind { Parabolic, Euclidean };

struct FrostmanSample {
  double constant = 0.0;  ///< max mu(B(c, r)) / r^s over the sample
  Point worst_center;
  double worst_radius = 0.0;
};

/// Empirical Frostman constant over balls centred at up to `centers` cells
/// of the support (seeded choice, always including the heaviest cell) and
/// radii 2^-k, 1.5 * 2^-k for k = 0..m.
FrostmanSample empirical_frostman(const GridMeasure& mu, double s, BallKind kind, std::uint64_t seed,
                                  std::size_t centers = 512);

/// Centre and geometry of depth-m cell `idx`.
ParabolicRect cell_rect(int m, std::uint64_t idx);
Point cell_center(int m, std::uint64_t idx);

struct EnergyReport {
  double sigma = 0.0;
  double direct = 0.0;
  std::optional<double> fourier_side;
  std::optional<double> fourier_radius;
};

enum class EnergyMode { Direct, DirectAndFourier };

/// I_sigma(mu) = double integral of |x - y|^-sigma, mu uniform within cells.
/// Each cell pair contributes its exact averaged kernel, so the value is the
/// energy of the piecewise-constant density. Throws BadExponent unless
/// 0 < sigma < 2.
EnergyReport riesz_energy(const GridMeasure& mu, double sigma, EnergyMode mode = EnergyMode::Direct);

/// Average of |u - v|^-sigma for u uniform on one depth-m cell and v uniform
/// on the cell shifted by (dix, dis) cells.
double cell_pair_kernel(int m, std::int64_t dix, std::int64_t dis, double sigma);

/// c(2, sigma) = pi^{sigma-1} Gamma((2 - sigma)/2) / Gamma(sigma/2).
double riesz_fourier_constant(double sigma);

/// mu^(xi) = integral of exp(-2 pi i x . xi) dmu for the piecewise-uniform
/// measure, with x = (x, s).
std::complex<double> measure_fourier(const GridMeasure& mu, double xi1, double xi2);

/// Repeated evaluation of mu^ with the support layout computed once.
class MeasureFourier {
 public:
  explicit MeasureFourier(const GridMeasure& mu);
  std::complex<double> operator()(double xi1, double xi2) const;

 private:
  int m_;
  std::vector<std::uint64_t> col_start_;  // CSR over columns
  std::vector<std::uint32_t> row_;
  std::vector<double> w_;
};

}  // namespace parawork
