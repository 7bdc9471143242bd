#include "parawork/avoiders.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <random>

#include "parawork/error.hpp"

namespace parawork {

namespace {

using Bits = std::vector<std::uint64_t>;

bool any(const Bits& b) {
  for (auto w : b)
    if (w) return true;
  return false;
}

void set_bit(Bits& b, std::size_t i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }
void clear_bit(Bits& b, std::size_t i) { b[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
bool test_bit(const Bits& b, std::size_t i) { return (b[i >> 6] >> (i & 63)) & 1u; }

// Branch and bound for a maximum clique, with greedy colouring of the
// candidate set as the bound. Vertices are tried in reverse colour order.
class CliqueSearch {
 public:
  explicit CliqueSearch(const BitRows& adj) : adj_(adj), words_(adj.empty() ? 0 : adj[0].size()) {}

  std::vector<std::uint32_t> run(std::size_t n) {
    Bits all(words_, 0);
    for (std::size_t v = 0; v < n; ++v) set_bit(all, v);
    if (n > 0) expand(all);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

 private:
  void expand(Bits p) {
    std::vector<std::uint32_t> order;
    std::vector<std::uint32_t> colour;
    Bits u = p;
    std::uint32_t k = 0;
    while (any(u)) {
      ++k;
      Bits q = u;
      for (std::size_t w = 0; w < words_; ++w) {
        while (q[w]) {
          const std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(q[w]));
          clear_bit(u, v);
          clear_bit(q, v);
          for (std::size_t x = w; x < words_; ++x) q[x] &= ~adj_[v][x];
          order.push_back(static_cast<std::uint32_t>(v));
          colour.push_back(k);
        }
      }
    }
    for (std::size_t i = order.size(); i-- > 0;) {
      if (cur_.size() + colour[i] <= best_.size()) return;
      const std::uint32_t v = order[i];
      cur_.push_back(v);
      Bits np(words_);
      for (std::size_t w = 0; w < words_; ++w) np[w] = p[w] & adj_[v][w];
      if (any(np)) {
        expand(std::move(np));
      } else if (cur_.size() > best_.size()) {
        best_ = cur_;
      }
      cur_.pop_back();
      clear_bit(p, v);
    }
  }

  const BitRows& adj_;
  std::size_t words_;
  std::vector<std::uint32_t> cur_, best_;
};

BitRows complement(const BitRows& adj) {
  const std::size_t n = adj.size();
  BitRows c(n, Bits(adj.empty() ? 0 : adj[0].size(), 0));
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && !test_bit(adj[u], v)) set_bit(c[u], v);
  return c;
}

}  // namespace

AvoiderGraph::AvoiderGraph(FieldCtx ctx) : ctx_(std::move(ctx)) {
  const std::uint32_t q = ctx_.q();
  is_conn_.assign(std::size_t{q} * q, 0);
  for (std::uint32_t z = 1; z < q; ++z) {
    const std::uint32_t z2 = ctx_.square(z);
    is_conn_[std::size_t{z} * q + z2] = 1;
    is_conn_[std::size_t{ctx_.neg(z)} * q + ctx_.neg(z2)] = 1;
  }
  for (std::size_t c = 0; c < is_conn_.size(); ++c)
    if (is_conn_[c]) conn_.push_back(static_cast<std::uint32_t>(c));
}

bool AvoiderGraph::adjacent(std::uint32_t u, std::uint32_t v) const {
  const std::uint32_t q = ctx_.q();
  const std::uint32_t dx = ctx_.sub(v / q, u / q), dy = ctx_.sub(v % q, u % q);
  return is_conn_[std::size_t{dx} * q + dy] != 0;
}

std::vector<std::uint32_t> AvoiderGraph::neighbors(std::uint32_t v) const {
  const std::uint32_t q = ctx_.q();
  std::vector<std::uint32_t> out;
  out.reserve(conn_.size());
  for (auto c : conn_) out.push_back(ctx_.add(v / q, c / q) * q + ctx_.add(v % q, c % q));
  return out;
}

BitRows AvoiderGraph::adjacency(std::size_t max_vertices) const {
  const std::size_t n = vertices();
  require(n <= max_vertices, ErrorKind::TooLarge, "graph has too many vertices for dense adjacency");
  BitRows rows(n, Bits((n + 63) / 64, 0));
  for (std::uint32_t v = 0; v < n; ++v)
    for (auto u : neighbors(v)) set_bit(rows[v], u);
  return rows;
}

bool avoids(const PointSet2& a) {
  const FieldCtx& ctx = a.ctx();
  const std::uint32_t q = ctx.q();
  const auto pts = a.members();
  for (std::uint32_t z = 1; z < q; ++z) {
    const std::uint32_t z2 = ctx.square(z);
    for (auto c : pts)
      if (a.contains(ctx.add(c / q, z), ctx.add(c % q, z2))) return false;
  }
  return true;
}

bool avoids_1d(const FieldCtx& ctx, std::span<const std::uint32_t> set) {
  const std::uint32_t q = ctx.q();
  std::vector<std::uint8_t> in(q, 0);
  for (auto x : set) {
    require(x < q, ErrorKind::ShapeMismatch, "element index outside F_q");
    in[x] = 1;
  }
  for (std::uint32_t z = 1; z < q; ++z) {
    const std::uint32_t z2 = ctx.square(z);
    for (auto x : set)
      if (in[ctx.add(x, z2)]) return false;
  }
  return true;
}

PointSet2 product_construction(const FieldCtx& ctx, std::span<const std::uint32_t> a1) {
  require(avoids_1d(ctx, a1), ErrorKind::NotAvoiding1D, "A1 contains a pair {y, y + z^2} with z != 0");
  PointSet2 b(ctx);
  for (std::uint32_t x = 0; x < ctx.q(); ++x)
    for (auto y : a1) b.insert(x, y);
  return b;
}

std::vector<std::uint32_t> max_independent_set(const BitRows& adj) {
  const BitRows c = complement(adj);
  return CliqueSearch(c).run(adj.size());
}

AvoiderResult max_avoider_exact(const FieldCtx& ctx, std::size_t vertex_cap) {
  const AvoiderGraph g(ctx);
  const std::size_t n = g.vertices();
  require(n <= vertex_cap, ErrorKind::TooLarge,
          "exact search limited to q^2 <= " + std::to_string(vertex_cap) + ", got " + std::to_string(n));
  const BitRows adj = g.adjacency(vertex_cap);
  // Translations act transitively, so some maximum set contains vertex 0;
  // search the non-neighbours of 0 only.
  std::vector<std::uint32_t> keep;
  for (std::uint32_t v = 1; v < n; ++v)
    if (!test_bit(adj[0], v)) keep.push_back(v);
  BitRows sub(keep.size(), Bits((keep.size() + 63) / 64, 0));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j)
      if (test_bit(adj[keep[i]], keep[j])) set_bit(sub[i], j);
  const auto mis = max_independent_set(sub);

  PointSet2 w(ctx);
  w.insert(std::size_t{0});
  for (auto i : mis) w.insert(keep[i]);
  AvoiderResult r{w.size(), w};
  require(avoids(r.witness), ErrorKind::InvariantViolation, "exact search returned a non-avoiding set");
  const std::uint64_t q = ctx.q();
  require(r.size * r.size < 4 * q * q * q, ErrorKind::InvariantViolation, "avoider reaches 2 q^{3/2}");
  return r;
}

namespace {

// Independent set under local moves; tight[v] counts solution neighbours.
class LocalState {
 public:
  explicit LocalState(const AvoiderGraph& g)
      : g_(&g), in_(g.vertices(), 0), tight_(g.vertices(), 0), pos_(g.vertices(), kNone) {}

  std::size_t size() const noexcept { return sol_.size(); }
  bool in(std::uint32_t v) const { return in_[v] != 0; }
  bool free(std::uint32_t v) const { return !in_[v] && tight_[v] == 0; }
  std::uint32_t tight(std::uint32_t v) const { return tight_[v]; }
  const std::vector<std::uint32_t>& solution() const { return sol_; }

  void add(std::uint32_t v) {
    in_[v] = 1;
    pos_[v] = static_cast<std::uint32_t>(sol_.size());
    sol_.push_back(v);
    for (auto u : g_->neighbors(v)) ++tight_[u];
  }

  void remove(std::uint32_t v) {
    in_[v] = 0;
    const std::uint32_t p = pos_[v];
    sol_[p] = sol_.back();
    pos_[sol_[p]] = p;
    sol_.pop_back();
    pos_[v] = kNone;
    for (auto u : g_->neighbors(v)) --tight_[u];
  }

 private:
  static constexpr std::uint32_t kNone = ~std::uint32_t{0};
  const AvoiderGraph* g_;
  std::vector<std::uint8_t> in_;
  std::vector<std::uint32_t> tight_;
  std::vector<std::uint32_t> pos_;
  std::vector<std::uint32_t> sol_;
};

std::vector<std::uint32_t> greedy_1d(const FieldCtx& ctx) {
  std::vector<std::uint32_t> a;
  for (std::uint32_t x = 0; x < ctx.q(); ++x) {
    a.push_back(x);
    if (!avoids_1d(ctx, a)) a.pop_back();
  }
  return a;
}

}  // namespace

AvoiderResult max_avoider_heuristic(const FieldCtx& ctx, std::uint64_t seed, std::uint64_t iterations) {
  const AvoiderGraph g(ctx);
  const auto n = static_cast<std::uint32_t>(g.vertices());
  std::mt19937_64 rng(seed);

  LocalState st(g);
  const auto a1 = ctx.q() <= kExact1DCap ? max_avoider_1d(ctx) : greedy_1d(ctx);
  for (auto v : product_construction(ctx, a1).members()) st.add(v);

  auto fill = [&](std::vector<std::uint32_t> cand) {
    std::shuffle(cand.begin(), cand.end(), rng);
    for (auto v : cand)
      if (st.free(v)) st.add(v);
  };
  // Replace one solution vertex by two 1-tight neighbours that are not adjacent.
  auto two_improve = [&](std::uint32_t x) {
    if (!st.in(x)) return false;
    std::vector<std::uint32_t> ones;
    for (auto u : g.neighbors(x))
      if (!st.in(u) && st.tight(u) == 1) ones.push_back(u);
    for (std::size_t i = 0; i < ones.size(); ++i)
      for (std::size_t j = i + 1; j < ones.size(); ++j)
        if (!g.adjacent(ones[i], ones[j])) {
          st.remove(x);
          st.add(ones[i]);
          st.add(ones[j]);
          fill(g.neighbors(x));
          return true;
        }
    return false;
  };
  auto local_search = [&](std::deque<std::uint32_t> queue, std::size_t budget) {
    while (!queue.empty() && budget-- > 0) {
      const std::uint32_t x = queue.front();
      queue.pop_front();
      if (two_improve(x))
        for (auto u : g.neighbors(x))
          for (auto w : g.neighbors(u))
            if (st.in(w)) queue.push_back(w);
    }
  };

  {
    std::vector<std::uint32_t> all(n);
    for (std::uint32_t v = 0; v < n; ++v) all[v] = v;
    fill(all);
    local_search(std::deque<std::uint32_t>(st.solution().begin(), st.solution().end()), 4 * std::size_t{n});
  }
  std::vector<std::uint32_t> best = st.solution();

  constexpr std::uint64_t kTenure = 7;
  std::vector<std::uint64_t> tabu_until(n, 0);
  std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
  for (std::uint64_t it = 1; it <= iterations; ++it) {
    // Force in a random non-solution vertex that is not tabu.
    std::uint32_t v = pick(rng);
    for (int tries = 0; tries < 32 && (st.in(v) || tabu_until[v] > it); ++tries) v = pick(rng);
    if (st.in(v)) continue;
    std::vector<std::uint32_t> touched;
    for (auto u : g.neighbors(v))
      if (st.in(u)) {
        st.remove(u);
        tabu_until[u] = it + kTenure;
        touched.push_back(u);
      }
    st.add(v);
    std::vector<std::uint32_t> cand;
    for (auto u : touched)
      for (auto w : g.neighbors(u)) cand.push_back(w);
    fill(std::move(cand));
    std::deque<std::uint32_t> queue;
    for (auto u : g.neighbors(v))
      for (auto w : g.neighbors(u))
        if (st.in(w)) queue.push_back(w);
    // The perturbation is local, so a short repair pass suffices.
    local_search(std::move(queue), 64);

    if (st.size() > best.size()) {
      best = st.solution();
    } else if (st.size() + 1 < best.size()) {
      // Drifted too far: restart from the incumbent.
      LocalState fresh(g);
      for (auto b : best) fresh.add(b);
      st = std::move(fresh);
    }
  }

  std::sort(best.begin(), best.end());
  PointSet2 w = PointSet2::from_indices(ctx, best);
  require(avoids(w), ErrorKind::InvariantViolation, "heuristic produced a non-avoiding set");
  return {w.size(), w};
}

BitRows avoider_graph_1d(const FieldCtx& ctx) {
  const std::uint32_t q = ctx.q();
  std::vector<std::uint8_t> conn(q, 0);
  for (std::uint32_t z = 1; z < q; ++z) {
    conn[ctx.square(z)] = 1;
    conn[ctx.neg(ctx.square(z))] = 1;
  }
  BitRows rows(q, Bits((q + 63) / 64, 0));
  for (std::uint32_t u = 0; u < q; ++u)
    for (std::uint32_t v = 0; v < q; ++v)
      if (conn[ctx.sub(v, u)]) set_bit(rows[u], v);
  return rows;
}

std::vector<std::uint32_t> max_avoider_1d(const FieldCtx& ctx, std::uint32_t q_cap) {
  require(ctx.q() <= q_cap, ErrorKind::TooLarge,
          "exact 1D search limited to q <= " + std::to_string(q_cap) + ", got " + std::to_string(ctx.q()));
  auto best = max_independent_set(avoider_graph_1d(ctx));
  require(avoids_1d(ctx, best), ErrorKind::InvariantViolation, "1D search returned a non-avoiding set");
  return best;
}

std::uint64_t min_guaranteed_1d(const FieldCtx& ctx, std::uint32_t q_cap) {
  const std::uint64_t size = max_avoider_1d(ctx, q_cap).size();
  const auto root = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(ctx.q())) - 1e-12));
  require(size <= root, ErrorKind::InvariantViolation, "1D avoider larger than ceil(sqrt q)");
  return size;
}

}  // namespace parawork
