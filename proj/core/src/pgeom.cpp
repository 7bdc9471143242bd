#include "parawork/pgeom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parawork/error.hpp"

namespace parawork {

namespace {

void check_depth(int m) {
  require(m >= 0 && m <= kMaxDepth, ErrorKind::BadConfig,
          "grid depth must lie in [0, " + std::to_string(kMaxDepth) + "], got " + std::to_string(m));
}

void check_exponent(double s) {
  require(s > 0.0 && s <= 3.0, ErrorKind::BadExponent, "exponent s must satisfy 0 < s <= 3");
}

// ell_j^s, evaluated the same way everywhere so that equal covers give equal doubles.
double cap(int j, double s) { return std::pow(2.0, -static_cast<double>(j) * s); }

std::uint64_t child_index(int j, std::uint64_t idx, int cx, int cs) {
  const std::uint64_t ix = idx >> (2 * j), is = idx & (rows_at(j) - 1);
  return (2 * ix + static_cast<std::uint64_t>(cx)) * rows_at(j + 1) + 4 * is + static_cast<std::uint64_t>(cs);
}

}  // namespace

double parabolic_dist(Point a, Point b) { return std::max(std::abs(a.x - b.x), std::sqrt(std::abs(a.s - b.s))); }

double ParabolicRect::x() const { return std::ldexp(static_cast<double>(ix), -j); }
double ParabolicRect::s() const { return std::ldexp(static_cast<double>(is), -2 * j); }
double ParabolicRect::width() const { return std::ldexp(1.0, -j); }
double ParabolicRect::height() const { return std::ldexp(1.0, -2 * j); }

bool ParabolicRect::contains(Point p) const {
  return p.x >= x() && p.x < x() + width() && p.s >= s() && p.s < s() + height();
}

ParabolicRect ParabolicRect::child(int cx, int cs) const {
  require(cx >= 0 && cx < 2 && cs >= 0 && cs < 4, ErrorKind::BadConfig, "child offsets out of range");
  return {j + 1, 2 * ix + static_cast<std::uint64_t>(cx), 4 * is + static_cast<std::uint64_t>(cs)};
}

ParabolicRect ParabolicRect::ancestor(int g) const {
  require(g >= 0 && g <= j, ErrorKind::BadConfig, "ancestor generation out of range");
  return {g, ix >> (j - g), is >> (2 * (j - g))};
}

bool ParabolicRect::contains(const ParabolicRect& r) const { return r.j >= j && r.ancestor(j) == *this; }

ParabolicRect ParabolicRect::from_index(int j, std::uint64_t idx) {
  require(j >= 0 && j < 21 && idx < cells_at(j), ErrorKind::BadConfig, "rectangle index out of range");
  return {j, idx >> (2 * j), idx & (rows_at(j) - 1)};
}

Point rescale(const ParabolicRect& q, Point p) {
  return {std::ldexp(p.x - q.x(), q.j), std::ldexp(p.s - q.s(), 2 * q.j)};
}

Point unrescale(const ParabolicRect& q, Point p) {
  return {q.x() + std::ldexp(p.x, -q.j), q.s() + std::ldexp(p.s, -2 * q.j)};
}

ParabolicRect cell_rect(int m, std::uint64_t idx) { return ParabolicRect::from_index(m, idx); }

Point cell_center(int m, std::uint64_t idx) {
  const ParabolicRect r = cell_rect(m, idx);
  return {r.x() + 0.5 * r.width(), r.s() + 0.5 * r.height()};
}

// ---- GridSet ---------------------------------------------------------------

GridSet::GridSet(int m) : m_(m) {
  check_depth(m);
  bits_.assign(cells_at(m), 0);
}

GridSet GridSet::full(int m) {
  GridSet k(m);
  std::fill(k.bits_.begin(), k.bits_.end(), 1);
  return k;
}

GridSet GridSet::random(int m, double density, std::mt19937_64& rng) {
  GridSet k(m);
  std::bernoulli_distribution coin(density);
  for (auto& b : k.bits_) b = coin(rng) ? 1 : 0;
  return k;
}

void GridSet::set(std::uint64_t cell, bool on) {
  require(cell < cells(), ErrorKind::ShapeMismatch, "cell index outside the grid");
  bits_[cell] = on ? 1 : 0;
}

std::uint64_t GridSet::count() const {
  return static_cast<std::uint64_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

GridSet GridSet::restrict_to(const ParabolicRect& q) const {
  require(q.j <= m_, ErrorKind::BadConfig, "rectangle finer than the grid");
  GridSet out(m_);
  const int d = m_ - q.j;
  const std::uint64_t x0 = q.ix << d, s0 = q.is << (2 * d);
  for (std::uint64_t ix = x0; ix < x0 + cols_at(d); ++ix)
    for (std::uint64_t is = s0; is < s0 + rows_at(d); ++is) {
      const std::uint64_t c = ix * rows_at(m_) + is;
      out.bits_[c] = bits_[c];
    }
  return out;
}

GridSet GridSet::unite(const GridSet& o) const {
  require(o.m_ == m_, ErrorKind::ShapeMismatch, "depth mismatch");
  GridSet out(m_);
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] | o.bits_[i];
  return out;
}

bool GridSet::subset_of(const GridSet& o) const {
  require(o.m_ == m_, ErrorKind::ShapeMismatch, "depth mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !o.bits_[i]) return false;
  return true;
}

// ---- GridMeasure -----------------------------------------------------------

GridMeasure::GridMeasure(int m) : m_(m) {
  check_depth(m);
  w_.assign(cells_at(m), 0.0);
}

GridMeasure::GridMeasure(int m, std::vector<double> weights) : m_(m), w_(std::move(weights)) {
  check_depth(m);
  require(w_.size() == cells_at(m), ErrorKind::ShapeMismatch, "weight array does not match 8^m cells");
  for (double v : w_) require(std::isfinite(v) && v >= 0.0, ErrorKind::BadConfig, "weights must be finite and >= 0");
}

void GridMeasure::set_weight(std::uint64_t cell, double w) {
  require(cell < cells(), ErrorKind::ShapeMismatch, "cell index outside the grid");
  require(std::isfinite(w) && w >= 0.0, ErrorKind::BadConfig, "weights must be finite and >= 0");
  w_[cell] = w;
}

double GridMeasure::total() const { return std::accumulate(w_.begin(), w_.end(), 0.0); }

double GridMeasure::mass(const ParabolicRect& q) const {
  require(q.j <= m_, ErrorKind::BadConfig, "rectangle finer than the grid");
  const int d = m_ - q.j;
  const std::uint64_t x0 = q.ix << d, s0 = q.is << (2 * d);
  double acc = 0.0;
  for (std::uint64_t ix = x0; ix < x0 + cols_at(d); ++ix)
    for (std::uint64_t is = s0; is < s0 + rows_at(d); ++is) acc += w_[ix * rows_at(m_) + is];
  return acc;
}

std::vector<std::vector<double>> GridMeasure::pyramid() const {
  std::vector<std::vector<double>> lv(static_cast<std::size_t>(m_) + 1);
  lv[static_cast<std::size_t>(m_)] = w_;
  for (int j = m_ - 1; j >= 0; --j) {
    auto& cur = lv[static_cast<std::size_t>(j)];
    const auto& fine = lv[static_cast<std::size_t>(j) + 1];
    cur.assign(cells_at(j), 0.0);
    for (std::uint64_t i = 0; i < cur.size(); ++i) {
      double acc = 0.0;
      for (int cx = 0; cx < 2; ++cx)
        for (int cs = 0; cs < 4; ++cs) acc += fine[child_index(j, i, cx, cs)];
      cur[i] = acc;
    }
  }
  return lv;
}

GridMeasure GridMeasure::refine(int new_depth) const {
  require(new_depth >= m_, ErrorKind::BadConfig, "refinement must not coarsen");
  check_depth(new_depth);
  const int d = new_depth - m_;
  GridMeasure out(new_depth);
  const double share = 1.0 / static_cast<double>(cells_at(d));
  for (std::uint64_t c = 0; c < cells(); ++c) {
    if (w_[c] == 0.0) continue;
    const std::uint64_t ix = c >> (2 * m_), is = c & (rows_at(m_) - 1);
    for (std::uint64_t a = 0; a < cols_at(d); ++a)
      for (std::uint64_t b = 0; b < rows_at(d); ++b)
        out.w_[((ix << d) + a) * rows_at(new_depth) + (is << (2 * d)) + b] = w_[c] * share;
  }
  return out;
}

GridMeasure blow_up(const GridMeasure& mu, const ParabolicRect& q) {
  const int m = mu.depth();
  require(q.j <= m, ErrorKind::BadConfig, "rectangle finer than the grid");
  const double mq = mu.mass(q);
  require(mq > 0.0, ErrorKind::ZeroMass, "measure of the rectangle is zero");
  const int d = m - q.j;
  std::vector<double> w(cells_at(d), 0.0);
  const std::uint64_t x0 = q.ix << d, s0 = q.is << (2 * d);
  for (std::uint64_t a = 0; a < cols_at(d); ++a)
    for (std::uint64_t b = 0; b < rows_at(d); ++b)
      w[a * rows_at(d) + b] = mu.weight((x0 + a) * rows_at(m) + s0 + b) / mq;
  return GridMeasure(d, std::move(w));
}

// ---- content ---------------------------------------------------------------

ContentResult content_dp(const GridSet& k, double s) {
  check_exponent(s);
  const int m = k.depth();
  ContentResult r;
  r.f.resize(static_cast<std::size_t>(m) + 1);
  std::vector<std::vector<std::uint8_t>> self(static_cast<std::size_t>(m) + 1);
  auto& leaves = r.f[static_cast<std::size_t>(m)];
  leaves.resize(k.cells());
  const double leaf_cap = cap(m, s);
  for (std::uint64_t i = 0; i < k.cells(); ++i) leaves[i] = k.test(i) ? leaf_cap : 0.0;
  for (int j = m - 1; j >= 0; --j) {
    const auto& fine = r.f[static_cast<std::size_t>(j) + 1];
    auto& cur = r.f[static_cast<std::size_t>(j)];
    auto& pick = self[static_cast<std::size_t>(j)];
    cur.resize(cells_at(j));
    pick.assign(cells_at(j), 0);
    const double c = cap(j, s);
    for (std::uint64_t i = 0; i < cur.size(); ++i) {
      double acc = 0.0;
      for (int cx = 0; cx < 2; ++cx)
        for (int cs = 0; cs < 4; ++cs) acc += fine[child_index(j, i, cx, cs)];
      if (acc > 0.0 && c <= acc) {
        cur[i] = c;
        pick[i] = 1;
      } else {
        cur[i] = acc;
      }
    }
  }
  // Walk the decisions from the root to recover the cover.
  r.count.assign(static_cast<std::size_t>(m) + 1, 0);
  std::vector<std::pair<int, std::uint64_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [j, i] = stack.back();
    stack.pop_back();
    if (j == m) {
      if (k.test(i)) ++r.count[static_cast<std::size_t>(m)];
      continue;
    }
    if (r.f[static_cast<std::size_t>(j)][i] == 0.0) continue;
    if (self[static_cast<std::size_t>(j)][i]) {
      ++r.count[static_cast<std::size_t>(j)];
      continue;
    }
    for (int cx = 0; cx < 2; ++cx)
      for (int cs = 0; cs < 4; ++cs) stack.emplace_back(j + 1, child_index(j, i, cx, cs));
  }
  r.value = 0.0;
  for (int j = 0; j <= m; ++j) r.value += static_cast<double>(r.count[static_cast<std::size_t>(j)]) * cap(j, s);
  return r;
}

double dyadic_content(const GridSet& k, double s) { return content_dp(k, s).value; }

ParabolicRect find_dense_rect(const GridSet& k, double s, double delta, std::optional<int> max_generation) {
  require(delta >= 0.0 && delta < 1.0, ErrorKind::BadDelta, "delta must lie in [0, 1)");
  const ContentResult r = content_dp(k, s);
  require(r.value > 0.0, ErrorKind::EmptyContent, "K has zero content");
  const int m = k.depth();
  const int top = std::min(m, max_generation.value_or(m));
  for (int j = 0; j <= top; ++j) {
    const double need = (1.0 - delta) * cap(j, s);
    const auto& lv = r.f[static_cast<std::size_t>(j)];
    for (std::uint64_t i = 0; i < lv.size(); ++i)
      if (lv[i] > 0.0 && lv[i] >= need) return ParabolicRect::from_index(j, i);
  }
  fail(ErrorKind::NoDenseRect, "no rectangle of generation <= " + std::to_string(top) + " reaches density 1 - delta");
}

// ---- Frostman --------------------------------------------------------------

namespace {

GridMeasure capped_measure(const GridSet& k, double s, int top) {
  check_exponent(s);
  const int m = k.depth();
  std::vector<std::vector<double>> mass(static_cast<std::size_t>(m) + 1), factor(static_cast<std::size_t>(m) + 1);
  auto& leaves = mass[static_cast<std::size_t>(m)];
  leaves.resize(k.cells());
  const double leaf_cap = cap(m, s);
  for (std::uint64_t i = 0; i < k.cells(); ++i) leaves[i] = k.test(i) ? leaf_cap : 0.0;
  factor[static_cast<std::size_t>(m)].assign(k.cells(), 1.0);
  for (int j = m - 1; j >= 0; --j) {
    const auto& fine = mass[static_cast<std::size_t>(j) + 1];
    auto& cur = mass[static_cast<std::size_t>(j)];
    auto& fac = factor[static_cast<std::size_t>(j)];
    cur.resize(cells_at(j));
    fac.assign(cells_at(j), 1.0);
    const double c = cap(j, s);
    for (std::uint64_t i = 0; i < cur.size(); ++i) {
      double acc = 0.0;
      for (int cx = 0; cx < 2; ++cx)
        for (int cs = 0; cs < 4; ++cs) acc += fine[child_index(j, i, cx, cs)];
      if (j >= top && acc > c) {
        fac[i] = c / acc;
        acc = c;
      }
      cur[i] = acc;
    }
  }
  // Push the scale factors down to the cells.
  std::vector<double> mult{factor[0][0]};
  for (int j = 0; j < m; ++j) {
    std::vector<double> next(cells_at(j + 1));
    for (std::uint64_t i = 0; i < mult.size(); ++i)
      for (int cx = 0; cx < 2; ++cx)
        for (int cs = 0; cs < 4; ++cs) {
          const std::uint64_t ch = child_index(j, i, cx, cs);
          next[ch] = mult[i] * factor[static_cast<std::size_t>(j) + 1][ch];
        }
    mult = std::move(next);
  }
  std::vector<double> w(k.cells());
  for (std::uint64_t i = 0; i < w.size(); ++i) w[i] = leaves[i] * mult[i];
  return GridMeasure(m, std::move(w));
}

}  // namespace

GridMeasure frostman(const GridSet& k, double s) { return capped_measure(k, s, 0); }

GridMeasure frostman_within(const GridSet& k, double s, const ParabolicRect& q) {
  return capped_measure(k.restrict_to(q), s, q.j);
}

GridMeasure frostman_below(const GridSet& k, double s, int top) {
  require(top >= 0 && top <= k.depth(), ErrorKind::BadConfig, "cap generation outside the grid");
  return capped_measure(k, s, top);
}

double max_dyadic_ratio(const GridMeasure& mu, double s) {
  const auto lv = mu.pyramid();
  double worst = 0.0;
  for (int j = 0; j <= mu.depth(); ++j) {
    const double c = cap(j, s);
    for (double v : lv[static_cast<std::size_t>(j)]) worst = std::max(worst, v / c);
  }
  return worst;
}

// ---- ball masses -----------------------------------------------------------

BoxMass::BoxMass(const GridMeasure& mu) : m_(mu.depth()), cols_(cols_at(m_)), rows_(rows_at(m_)) {
  prefix_.assign((cols_ + 1) * (rows_ + 1), 0.0);
  for (std::uint64_t i = 0; i < cols_; ++i) {
    double run = 0.0;
    for (std::uint64_t k = 0; k < rows_; ++k) {
      run += mu.weight(i * rows_ + k);
      prefix_[(i + 1) * (rows_ + 1) + k + 1] = prefix_[i * (rows_ + 1) + k + 1] + run;
    }
  }
}

// mu([0, x) x [0, s)); bilinear inside each cell because the density is constant there.
double BoxMass::cumulative(double x, double s) const {
  const double gx = std::clamp(x, 0.0, 1.0) * static_cast<double>(cols_);
  const double gs = std::clamp(s, 0.0, 1.0) * static_cast<double>(rows_);
  const auto i = std::min<std::uint64_t>(static_cast<std::uint64_t>(gx), cols_ - 1);
  const auto k = std::min<std::uint64_t>(static_cast<std::uint64_t>(gs), rows_ - 1);
  const double a = gx - static_cast<double>(i), b = gs - static_cast<double>(k);
  const std::uint64_t R = rows_ + 1;
  const double p00 = prefix_[i * R + k], p10 = prefix_[(i + 1) * R + k];
  const double p01 = prefix_[i * R + k + 1], p11 = prefix_[(i + 1) * R + k + 1];
  return p00 * (1 - a) * (1 - b) + p10 * a * (1 - b) + p01 * (1 - a) * b + p11 * a * b;
}

double BoxMass::operator()(double x0, double x1, double s0, double s1) const {
  if (x1 <= x0 || s1 <= s0) return 0.0;
  const double v = cumulative(x1, s1) - cumulative(x0, s1) - cumulative(x1, s0) + cumulative(x0, s0);
  return std::max(0.0, v);
}

double parabolic_ball_mass(const BoxMass& bm, Point c, double r) {
  return bm(c.x - r, c.x + r, c.s - r * r, c.s + r * r);
}

double euclidean_ball_mass(const BoxMass& bm, Point c, double r) { return bm(c.x - r, c.x + r, c.s - r, c.s + r); }

FrostmanSample empirical_frostman(const GridMeasure& mu, double s, BallKind kind, std::uint64_t seed,
                                  std::size_t centers) {
  const int m = mu.depth();
  std::vector<std::uint64_t> support;
  for (std::uint64_t c = 0; c < mu.cells(); ++c)
    if (mu.weight(c) > 0.0) support.push_back(c);
  FrostmanSample out;
  if (support.empty()) return out;
  std::vector<std::uint64_t> chosen;
  const auto heaviest = *std::max_element(support.begin(), support.end(),
                                          [&](auto a, auto b) { return mu.weight(a) < mu.weight(b); });
  chosen.push_back(heaviest);
  if (support.size() <= centers) {
    chosen.insert(chosen.end(), support.begin(), support.end());
  } else {
    std::mt19937_64 rng(seed);
    std::sample(support.begin(), support.end(), std::back_inserter(chosen), centers, rng);
  }
  const BoxMass bm(mu);
  for (auto c : chosen) {
    const Point p = cell_center(m, c);
    for (int k = 0; k <= m; ++k)
      for (double f : {1.0, 1.5}) {
        const double r = f * std::ldexp(1.0, -k);
        const double mass = kind == BallKind::Parabolic ? parabolic_ball_mass(bm, p, r) : euclidean_ball_mass(bm, p, r);
        const double ratio = mass / std::pow(r, s);
        if (ratio > out.constant) {
          out.constant = ratio;
          out.worst_center = p;
          out.worst_radius = r;
        }
      }
  }
  return out;
}

}  // namespace parawork
