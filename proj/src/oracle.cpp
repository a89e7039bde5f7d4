#include "sapcensus/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace sapcensus {

namespace {

constexpr int kSapGuard = 26;
constexpr int kSawGuard = 20;

void check_guard(int nmax, LatticeMode mode, bool allow_large) {
  if (allow_large) return;
  const int limit = mode == LatticeMode::Sap ? kSapGuard : kSawGuard;
  if (nmax > limit)
    throw UsageError("oracle feasibility guard: nmax " + std::to_string(nmax) +
                     " exceeds " + std::to_string(limit) + " for " +
                     mode_name(mode) + " (pass allow_large / --allow-large)");
}

constexpr int kDx[4] = {1, -1, 0, 0};
constexpr int kDy[4] = {0, 0, 1, -1};

// Directed SAWs from the origin on an unbounded board; counts every prefix.
struct WalkCounter {
  int nmax;
  int side;
  std::vector<char> visited;
  std::vector<unsigned long> counts;

  explicit WalkCounter(int n)
      : nmax(n),
        side(2 * n + 1),
        visited(static_cast<std::size_t>(side) * side, 0),
        counts(static_cast<std::size_t>(n) + 1, 0) {}

  std::size_t at(int x, int y) const {
    return static_cast<std::size_t>(x + nmax) * side + (y + nmax);
  }

  void dfs(int x, int y, int len) {
    if (len == nmax) return;
    for (int d = 0; d < 4; ++d) {
      const int nx = x + kDx[d];
      const int ny = y + kDy[d];
      char& v = visited[at(nx, ny)];
      if (!v) {
        ++counts[static_cast<std::size_t>(len) + 1];
        v = 1;
        dfs(nx, ny, len + 1);
        v = 0;
      }
    }
  }
};

// Rooted directed closed walks from the origin; pruned by the L1 distance
// still needed to return.
struct ClosedWalkCounter {
  int nmax;
  int side;
  std::vector<char> visited;
  std::vector<unsigned long> rooted;

  explicit ClosedWalkCounter(int n)
      : nmax(n),
        side(2 * n + 1),
        visited(static_cast<std::size_t>(side) * side, 0),
        rooted(static_cast<std::size_t>(n) + 1, 0) {}

  std::size_t at(int x, int y) const {
    return static_cast<std::size_t>(x + nmax) * side + (y + nmax);
  }

  void dfs(int x, int y, int len) {
    for (int d = 0; d < 4; ++d) {
      const int nx = x + kDx[d];
      const int ny = y + kDy[d];
      if (nx == 0 && ny == 0 && len >= 3 && len + 1 <= nmax)
        ++rooted[static_cast<std::size_t>(len) + 1];
      const int dist = std::abs(nx) + std::abs(ny);
      if (len + 1 + dist > nmax) continue;
      char& v = visited[at(nx, ny)];
      if (!v) {
        v = 1;
        dfs(nx, ny, len + 1);
        v = 0;
      }
    }
  }
};

// Inscribed-object enumeration inside the [0..w] x [0..h] vertex grid.
// Vertices are ordered by id = x*(h+1)+y (column-major, matching
// lexicographic (x,y) order); SAP cycles are rooted at their minimum vertex
// and traversed in the direction making the second vertex smaller than the
// last, so each undirected object is visited exactly once.
struct InscribedEnumerator {
  Rect rect;
  LatticeMode mode;
  int nmax;
  const std::function<void(const EdgeList&)>& visit;
  std::vector<char> onpath;
  std::vector<Vertex> path;

  InscribedEnumerator(Rect r, LatticeMode m, int n,
                      const std::function<void(const EdgeList&)>& f)
      : rect(r),
        mode(m),
        nmax(n),
        visit(f),
        onpath(static_cast<std::size_t>(r.w + 1) * (r.h + 1), 0) {}

  int id(Vertex v) const { return v.x * (rect.h + 1) + v.y; }
  bool inside(int x, int y) const {
    return x >= 0 && x <= rect.w && y >= 0 && y <= rect.h;
  }

  bool bbox_exact() const {
    int minx = rect.w, maxx = 0, miny = rect.h, maxy = 0;
    for (const Vertex& v : path) {
      minx = std::min(minx, v.x);
      maxx = std::max(maxx, v.x);
      miny = std::min(miny, v.y);
      maxy = std::max(maxy, v.y);
    }
    return minx == 0 && maxx == rect.w && miny == 0 && maxy == rect.h;
  }

  static Edge make_edge(Vertex a, Vertex b) {
    if (b.x < a.x || (b.x == a.x && b.y < a.y)) std::swap(a, b);
    return {a, b};
  }

  void emit(bool closed) {
    EdgeList edges;
    edges.reserve(path.size());
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
      edges.push_back(make_edge(path[i], path[i + 1]));
    if (closed) edges.push_back(make_edge(path.back(), path.front()));
    visit(edges);
  }

  void run() {
    if (mode == LatticeMode::Saw && rect.w == 0 && rect.h == 0) {
      visit(EdgeList{});  // the single-vertex length-0 walk
      return;
    }
    for (int x = 0; x <= rect.w; ++x) {
      for (int y = 0; y <= rect.h; ++y) {
        const Vertex s{x, y};
        path.assign(1, s);
        onpath[static_cast<std::size_t>(id(s))] = 1;
        if (mode == LatticeMode::Sap)
          dfs_cycle(s, s);
        else
          dfs_path(s, s);
        onpath[static_cast<std::size_t>(id(s))] = 0;
      }
    }
  }

  void dfs_cycle(Vertex s, Vertex v) {
    for (int d = 0; d < 4; ++d) {
      const int ux = v.x + kDx[d];
      const int uy = v.y + kDy[d];
      if (!inside(ux, uy)) continue;
      const Vertex u{ux, uy};
      if (u == s && path.size() >= 4) {
        if (id(path[1]) < id(path.back()) && bbox_exact()) emit(true);
        continue;
      }
      if (id(u) <= id(s)) continue;
      char& flag = onpath[static_cast<std::size_t>(id(u))];
      if (flag) continue;
      if (static_cast<int>(path.size()) + 1 > nmax) continue;
      flag = 1;
      path.push_back(u);
      dfs_cycle(s, u);
      path.pop_back();
      flag = 0;
    }
  }

  void dfs_path(Vertex s, Vertex v) {
    if (path.size() >= 2 && id(s) < id(path.back()) && bbox_exact()) emit(false);
    if (static_cast<int>(path.size()) - 1 >= nmax) return;
    for (int d = 0; d < 4; ++d) {
      const int ux = v.x + kDx[d];
      const int uy = v.y + kDy[d];
      if (!inside(ux, uy)) continue;
      const Vertex u{ux, uy};
      char& flag = onpath[static_cast<std::size_t>(id(u))];
      if (flag) continue;
      flag = 1;
      path.push_back(u);
      dfs_path(s, u);
      path.pop_back();
      flag = 0;
    }
  }
};

}  // namespace

CountSeries enumerate_walks_oracle(int nmax, bool allow_large) {
  if (nmax < 1) throw UsageError("enumerate_walks_oracle: nmax must be >= 1");
  check_guard(nmax, LatticeMode::Saw, allow_large);
  WalkCounter wc(nmax);
  wc.visited[wc.at(0, 0)] = 1;
  wc.dfs(0, 0, 0);
  CountSeries out(nmax);
  out.set(0, 1);
  for (int n = 1; n <= nmax; ++n)
    out.set(n, mpz_class(wc.counts[static_cast<std::size_t>(n)]));
  return out;
}

CountSeries enumerate_polygons_oracle(int nmax, bool allow_large) {
  if (nmax < 4) throw UsageError("enumerate_polygons_oracle: nmax must be >= 4");
  check_guard(nmax, LatticeMode::Sap, allow_large);
  ClosedWalkCounter cc(nmax);
  cc.visited[cc.at(0, 0)] = 1;
  cc.dfs(0, 0, 0);
  CountSeries out(nmax);
  for (int n = 4; n <= nmax; ++n) {
    const unsigned long r = cc.rooted[static_cast<std::size_t>(n)];
    if (r % (2ul * static_cast<unsigned long>(n)) != 0)
      throw std::logic_error("polygon oracle: rooted count not divisible by 2n");
    out.set(n, mpz_class(r / (2ul * static_cast<unsigned long>(n))));
  }
  return out;
}

void enumerate_inscribed(Rect rect, LatticeMode mode, int nmax,
                         const std::function<void(const EdgeList&)>& visit,
                         bool allow_large) {
  require_rect(rect, mode);
  if (nmax < 0) throw UsageError("enumerate_inscribed: nmax must be >= 0");
  check_guard(nmax, mode, allow_large);
  InscribedEnumerator e(rect, mode, nmax, visit);
  e.run();
}

CountSeries inscribed_oracle(Rect rect, LatticeMode mode, int nmax,
                             bool allow_large) {
  CountSeries out(nmax);
  enumerate_inscribed(
      rect, mode, nmax,
      [&](const EdgeList& edges) {
        const int len = static_cast<int>(edges.size());
        if (len <= nmax) out.add(len, 1);
      },
      allow_large);
  return out;
}

}  // namespace sapcensus
