#include "core/matching.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <deque>

#include "core/common.hpp"

namespace pwe {

namespace {

// Dense primal-dual blossom algorithm for maximum-weight matching, the
// classical O(n^3) formulation with explicit flower lists and per-node slack
// pointers.  Works on integer weights; all duals stay integral (weights are
// doubled inside e_delta so odd cycles never produce half-integral labels).
// 1-indexed throughout; index 0 is the null sentinel.
class Blossom {
 public:
  explicit Blossom(int n) : n_(n), cap_(n + n / 2 + 8) {
    g_.assign(cap_ * cap_, Edge{0, 0, 0});
    from_.assign(cap_ * cap_, 0);
    lab_.assign(cap_, 0);
    match_.assign(cap_, 0);
    slack_.assign(cap_, 0);
    st_.assign(cap_, 0);
    pa_.assign(cap_, 0);
    s_.assign(cap_, 0);
    vis_.assign(cap_, 0);
    flower_.assign(cap_, {});
  }

  void set_weight(int u, int v, long long w) {
    edge(u, v) = Edge{u, v, w};
    edge(v, u) = Edge{v, u, w};
  }

  // Runs the matching; with all weights positive and n even the maximum
  // matching is perfect.  Returns mate (1-indexed, mate[0] unused).
  std::vector<int> solve() {
    std::fill(match_.begin(), match_.end(), 0);
    n_x_ = n_;
    long long w_max = 0;
    for (int u = 1; u <= n_; ++u) {
      st_[u] = u;
      flower_[u].clear();
      for (int v = 1; v <= n_; ++v) {
        from(u, v) = (u == v ? u : 0);
        w_max = std::max(w_max, edge(u, v).w);
      }
    }
    for (int u = 1; u <= n_; ++u) lab_[u] = w_max;

    int phases = 0;
    while (phase()) {
      if (++phases > n_ / 2 + 2) throw InternalError("matching: phase overrun");
    }
    for (int u = 1; u <= n_; ++u)
      if (!match_[u]) throw InternalError("matching: imperfect result");
    return std::vector<int>(match_.begin(), match_.begin() + n_ + 1);
  }

 private:
  struct Edge {
    int u, v;
    long long w;
  };

  Edge& edge(int u, int v) { return g_[static_cast<size_t>(u) * cap_ + v]; }
  int& from(int u, int v) { return from_[static_cast<size_t>(u) * cap_ + v]; }

  long long e_delta(const Edge& e) { return lab_[e.u] + lab_[e.v] - e.w * 2; }

  void update_slack(int u, int x) {
    if (!slack_[x] || e_delta(edge(u, x)) < e_delta(edge(slack_[x], x))) slack_[x] = u;
  }

  void set_slack(int x) {
    slack_[x] = 0;
    for (int u = 1; u <= n_; ++u)
      if (edge(u, x).w > 0 && st_[u] != x && s_[st_[u]] == 0) update_slack(u, x);
  }

  void q_push(int x) {
    if (x <= n_) {
      q_.push_back(x);
    } else {
      for (int t : flower_[x]) q_push(t);
    }
  }

  void set_st(int x, int b) {
    st_[x] = b;
    if (x > n_)
      for (int t : flower_[x]) set_st(t, b);
  }

  int get_pr(int b, int xr) {
    auto& f = flower_[b];
    int pr = static_cast<int>(std::find(f.begin(), f.end(), xr) - f.begin());
    if (pr % 2 == 1) {
      std::reverse(f.begin() + 1, f.end());
      return static_cast<int>(f.size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match_[u] = edge(u, v).v;
    if (u <= n_) return;
    Edge e = edge(u, v);
    int xr = from(u, e.u);
    int pr = get_pr(u, xr);
    for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
  }

  void augment(int u, int v) {
    for (;;) {
      int xnv = st_[match_[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st_[pa_[xnv]]);
      u = st_[pa_[xnv]];
      v = xnv;
    }
  }

  int get_lca(int u, int v) {
    for (++tick_; u || v; std::swap(u, v)) {
      if (!u) continue;
      if (vis_[u] == tick_) return u;
      vis_[u] = tick_;
      u = st_[match_[u]];
      if (u) u = st_[pa_[u]];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n_ + 1;
    while (b <= n_x_ && st_[b]) ++b;
    if (b > n_x_) ++n_x_;
    if (n_x_ >= cap_) throw InternalError("matching: blossom capacity");
    lab_[b] = 0;
    s_[b] = 0;
    match_[b] = match_[lca];
    flower_[b].clear();
    flower_[b].push_back(lca);
    for (int x = u, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      flower_[b].push_back(y = st_[match_[x]]);
      q_push(y);
    }
    std::reverse(flower_[b].begin() + 1, flower_[b].end());
    for (int x = v, y; x != lca; x = st_[pa_[y]]) {
      flower_[b].push_back(x);
      flower_[b].push_back(y = st_[match_[x]]);
      q_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x_; ++x) edge(b, x).w = edge(x, b).w = 0;
    for (int x = 1; x <= n_; ++x) from(b, x) = 0;
    for (int xs : flower_[b]) {
      for (int x = 1; x <= n_x_; ++x)
        if (edge(b, x).w == 0 || e_delta(edge(xs, x)) < e_delta(edge(b, x))) {
          edge(b, x) = edge(xs, x);
          edge(x, b) = edge(x, xs);
        }
      for (int x = 1; x <= n_; ++x)
        if (from(xs, x)) from(b, x) = xs;
    }
    set_slack(b);
  }

  void expand_blossom(int b) {
    for (int t : flower_[b]) set_st(t, t);
    int xr = from(b, edge(b, pa_[b]).u);
    int pr = get_pr(b, xr);
    for (int i = 0; i < pr; i += 2) {
      int xs = flower_[b][i];
      int xns = flower_[b][i + 1];
      pa_[xs] = edge(xns, xs).u;
      s_[xs] = 1;
      s_[xns] = 0;
      slack_[xs] = 0;
      set_slack(xns);
      q_push(xns);
    }
    s_[xr] = 1;
    pa_[xr] = pa_[b];
    for (size_t i = pr + 1; i < flower_[b].size(); ++i) {
      int xs = flower_[b][i];
      s_[xs] = -1;
      set_slack(xs);
    }
    st_[b] = 0;
  }

  bool on_found_edge(const Edge& e) {
    int u = st_[e.u];
    int v = st_[e.v];
    if (s_[v] == -1) {
      pa_[v] = e.u;
      s_[v] = 1;
      int nu = st_[match_[v]];
      slack_[v] = slack_[nu] = 0;
      s_[nu] = 0;
      q_push(nu);
    } else if (s_[v] == 0) {
      int lca = get_lca(u, v);
      if (!lca) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, lca, v);
    }
    return false;
  }

  bool phase() {
    std::fill(s_.begin() + 1, s_.begin() + n_x_ + 1, -1);
    std::fill(slack_.begin() + 1, slack_.begin() + n_x_ + 1, 0);
    q_.clear();
    for (int x = 1; x <= n_x_; ++x)
      if (st_[x] == x && !match_[x]) {
        pa_[x] = 0;
        s_[x] = 0;
        q_push(x);
      }
    if (q_.empty()) return false;
    for (;;) {
      while (!q_.empty()) {
        int u = q_.front();
        q_.pop_front();
        if (s_[st_[u]] == 1) continue;
        for (int v = 1; v <= n_; ++v)
          if (edge(u, v).w > 0 && st_[u] != st_[v]) {
            if (e_delta(edge(u, v)) == 0) {
              if (on_found_edge(edge(u, v))) return true;
            } else {
              update_slack(u, st_[v]);
            }
          }
      }
      long long d = LLONG_MAX / 4;
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && s_[b] == 1) d = std::min(d, lab_[b] / 2);
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x]) {
          if (s_[x] == -1)
            d = std::min(d, e_delta(edge(slack_[x], x)));
          else if (s_[x] == 0)
            d = std::min(d, e_delta(edge(slack_[x], x)) / 2);
        }
      for (int u = 1; u <= n_; ++u) {
        if (s_[st_[u]] == 0) {
          if (lab_[u] <= d) return false;
          lab_[u] -= d;
        } else if (s_[st_[u]] == 1) {
          lab_[u] += d;
        }
      }
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b) {
          if (s_[b] == 0)
            lab_[b] += d * 2;
          else if (s_[b] == 1)
            lab_[b] -= d * 2;
        }
      q_.clear();
      for (int x = 1; x <= n_x_; ++x)
        if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
            e_delta(edge(slack_[x], x)) == 0)
          if (on_found_edge(edge(slack_[x], x))) return true;
      for (int b = n_ + 1; b <= n_x_; ++b)
        if (st_[b] == b && s_[b] == 1 && lab_[b] == 0) expand_blossom(b);
    }
  }

  int n_;
  int cap_;
  int n_x_ = 0;
  int tick_ = 0;
  std::vector<Edge> g_;
  std::vector<int> from_;
  std::vector<long long> lab_;
  std::vector<int> match_, slack_, st_, pa_, s_, vis_;
  std::vector<std::vector<int>> flower_;
  std::deque<int> q_;
};

}  // namespace

std::vector<int> min_cost_perfect_matching(int n, const std::vector<double>& cost) {
  if (n < 0 || n % 2 != 0) throw UsageError("matching: vertex count must be even");
  if (static_cast<size_t>(n) * n != cost.size())
    throw UsageError("matching: cost matrix must be n*n");
  if (n == 0) return {};

  double max_cost = 0.0;
  for (double c : cost) {
    if (!(c >= 0.0)) throw UsageError("matching: costs must be >= 0");
    max_cost = std::max(max_cost, c);
  }

  // maximize big - cost so that every transformed weight is positive and the
  // maximum matching is forced to be perfect; the 2^52 scale keeps the
  // per-edge rounding quantum near big * 2^-52 (a few hundred edges stay
  // within ~1e-10 of the true optimum) while leaving int64 headroom for the
  // dual labels, which can drift a few multiples of the largest weight
  const double big = max_cost + 1.0;
  const double scale = static_cast<double>(1LL << 52) / big;

  Blossom bl(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const long long w =
          std::llround((big - cost[static_cast<size_t>(u) * n + v]) * scale);
      bl.set_weight(u + 1, v + 1, std::max(w, 1LL));
    }

  const std::vector<int> mate1 = bl.solve();
  std::vector<int> mate(n);
  for (int u = 0; u < n; ++u) mate[u] = mate1[u + 1] - 1;
  for (int u = 0; u < n; ++u)
    if (mate[u] < 0 || mate[u] >= n || mate[mate[u]] != u || mate[u] == u)
      throw InternalError("matching: inconsistent mate array");
  return mate;
}

}  // namespace pwe
