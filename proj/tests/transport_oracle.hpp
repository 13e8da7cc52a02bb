#pragma once

// Test-only oracle shared by the diagnostics tests and the acceptance run.

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace peskin::testing {

// Exact discrete optimal transport between point masses on the M-node circle,
// solved as a min-cost flow by successive shortest paths (Bellman-Ford on the
// residual graph). Independent of the cumulative-median formula.
double transport_oracle(const std::vector<double>& p, const std::vector<double>& q) {
  const int M = static_cast<int>(p.size());
  const int source = 2 * M;
  const int sink = 2 * M + 1;
  const int N = 2 * M + 2;
  struct Edge {
    int to;
    double cap;
    double cost;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj(static_cast<size_t>(N));
  auto add = [&](int a, int b, double cap, double cost) {
    adj[static_cast<size_t>(a)].push_back(static_cast<int>(edges.size()));
    edges.push_back({b, cap, cost});
    adj[static_cast<size_t>(b)].push_back(static_cast<int>(edges.size()));
    edges.push_back({a, 0.0, -cost});
  };
  const double h = 2 * std::numbers::pi / M;
  for (int i = 0; i < M; ++i) {
    add(source, i, p[static_cast<size_t>(i)], 0.0);
    add(M + i, sink, q[static_cast<size_t>(i)], 0.0);
    for (int j = 0; j < M; ++j) {
      const int d = std::abs(i - j);
      add(i, M + j, std::numeric_limits<double>::infinity(), h * std::min(d, M - d));
    }
  }
  double cost = 0.0;
  const double eps = 1e-15;
  for (int iter = 0; iter < 100000; ++iter) {
    std::vector<double> dist(static_cast<size_t>(N), std::numeric_limits<double>::infinity());
    std::vector<int> via(static_cast<size_t>(N), -1);
    dist[static_cast<size_t>(source)] = 0.0;
    for (int round = 0; round < N; ++round) {
      bool changed = false;
      for (int u = 0; u < N; ++u) {
        if (std::isinf(dist[static_cast<size_t>(u)])) continue;
        for (int e : adj[static_cast<size_t>(u)]) {
          const Edge& E = edges[static_cast<size_t>(e)];
          if (E.cap <= eps) continue;
          const double nd = dist[static_cast<size_t>(u)] + E.cost;
          if (nd < dist[static_cast<size_t>(E.to)] - 1e-15) {
            dist[static_cast<size_t>(E.to)] = nd;
            via[static_cast<size_t>(E.to)] = e;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (via[static_cast<size_t>(sink)] < 0) break;
    double push = std::numeric_limits<double>::infinity();
    for (int v = sink; v != source; v = edges[static_cast<size_t>(via[static_cast<size_t>(v)] ^ 1)].to) {
      push = std::min(push, edges[static_cast<size_t>(via[static_cast<size_t>(v)])].cap);
    }
    for (int v = sink; v != source; v = edges[static_cast<size_t>(via[static_cast<size_t>(v)] ^ 1)].to) {
      const int e = via[static_cast<size_t>(v)];
      edges[static_cast<size_t>(e)].cap -= push;
      edges[static_cast<size_t>(e ^ 1)].cap += push;
      cost += push * edges[static_cast<size_t>(e)].cost;
    }
  }
  return cost;
}

}  // namespace peskin::testing
