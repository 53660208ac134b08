#include <algorithm>
#include <bit>
#include <queue>
#include <stdexcept>

#include "setlab/apps.hpp"
#include "setlab/membership.hpp"

namespace setlab::apps {

BipartiteEncoding distoracle_encode(const SetSystem& sys) {
  BipartiteEncoding g;
  g.m = sys.m();
  g.u = sys.u();
  std::vector<std::uint32_t> degree(g.vertices(), 0);
  for (std::size_t i = 0; i < g.m; ++i) {
    degree[i] = static_cast<std::uint32_t>(sys.sets()[i].size());
    for (Elem x : sys.sets()[i]) ++degree[g.m + x - 1];
  }
  g.offsets.assign(g.vertices() + 1, 0);
  for (std::size_t v = 0; v < g.vertices(); ++v) g.offsets[v + 1] = g.offsets[v] + degree[v];
  g.adjacency.resize(g.offsets.back());
  std::vector<std::uint32_t> fill(g.offsets.begin(), g.offsets.end() - 1);
  for (std::size_t i = 0; i < g.m; ++i) {
    for (Elem x : sys.sets()[i]) {
      const std::size_t w = g.m + x - 1;
      g.adjacency[fill[i]++] = static_cast<std::uint32_t>(w);
      g.adjacency[fill[w]++] = static_cast<std::uint32_t>(i);
    }
  }
  return g;
}

std::optional<std::size_t> bfs_distance(const BipartiteEncoding& enc, std::size_t i,
                                        std::size_t j) {
  auto [s, t] = zero_based(enc.m, i, j);
  constexpr std::uint32_t kUnseen = ~std::uint32_t{0};
  std::vector<std::uint32_t> dist(enc.vertices(), kUnseen);
  std::queue<std::size_t> frontier;
  dist[s] = 0;
  frontier.push(s);
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    if (v == t) return dist[v];
    for (std::uint32_t w : enc.neighbours(v)) {
      if (dist[w] != kUnseen) continue;
      dist[w] = dist[v] + 1;
      frontier.push(w);
    }
  }
  return std::nullopt;
}

ThreeSumEncoding threesum_encode(const SetSystem& sys) {
  ThreeSumEncoding enc;
  enc.m = sys.m();
  enc.u = sys.u();
  enc.w_m = static_cast<unsigned>(std::bit_width(enc.m));  // ceil(log2(m+1))
  enc.w_u = enc.u <= 1 ? 0 : static_cast<unsigned>(std::bit_width(enc.u - 1u));
  if (enc.width() > 63) throw std::invalid_argument("encoded values exceed 63 bits");
  const std::uint64_t M = enc.M();
  const std::uint64_t M2 = M * M;
  for (std::size_t i = 1; i <= enc.m; ++i) {
    for (Elem x : sys.set(i)) {
      enc.A.push_back(i + M2 * (x - 1));
      enc.B.push_back(M * i + M2 * (enc.u - x));
    }
  }
  return enc;
}

std::uint64_t threesum_query_number(std::size_t i, std::size_t j, const ThreeSumEncoding& enc) {
  zero_based(enc.m, i, j);
  const std::uint64_t M = enc.M();
  return i + M * j + M * M * (enc.u - 1);
}

Decoded decode_a(const ThreeSumEncoding& enc, std::uint64_t value) {
  const std::uint64_t M = enc.M();
  return Decoded{static_cast<std::size_t>(value % M), static_cast<Elem>(value / (M * M) + 1)};
}

Decoded decode_b(const ThreeSumEncoding& enc, std::uint64_t value) {
  const std::uint64_t M = enc.M();
  return Decoded{static_cast<std::size_t>((value / M) % M),
                 static_cast<Elem>(enc.u - value / (M * M))};
}

ThreeSumSolver::ThreeSumSolver(const ThreeSumEncoding& enc) : a_(enc.A), b_(enc.B) {
  std::sort(b_.begin(), b_.end());
}

std::optional<NumberPair> ThreeSumSolver::solve(std::uint64_t z) const {
  for (std::uint64_t a : a_) {
    if (a > z) continue;
    if (std::binary_search(b_.begin(), b_.end(), z - a)) return NumberPair{a, z - a};
  }
  return std::nullopt;
}

std::vector<NumberPair> ThreeSumSolver::report(std::uint64_t z) const {
  std::vector<NumberPair> out;
  for (std::uint64_t a : a_) {
    if (a > z) continue;
    const auto [lo, hi] = std::equal_range(b_.begin(), b_.end(), z - a);
    for (auto it = lo; it != hi; ++it) out.emplace_back(a, *it);
  }
  std::sort(out.begin(), out.end());
  return out;
}

unsigned measured_width(const ThreeSumEncoding& enc) {
  std::uint64_t top = 0;
  for (std::uint64_t v : enc.A) top = std::max(top, v);
  for (std::uint64_t v : enc.B) top = std::max(top, v);
  return static_cast<unsigned>(std::bit_width(top));
}

}  // namespace setlab::apps
