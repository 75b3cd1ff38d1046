// Copyright 2026 The trajgan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trajgan/assignment.hpp"

#include <cassert>
#include <limits>
#include <queue>

namespace trajgan {

double solve_assignment(const Eigen::MatrixXd& cost, std::vector<int>* row_to_col) {
  assert(cost.rows() == cost.cols());
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();

  // 1-indexed potentials/links, column 0 is the virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  if (row_to_col) {
    row_to_col->assign(n, -1);
    for (int j = 1; j <= n; ++j)
      if (match[j]) (*row_to_col)[match[j] - 1] = j - 1;
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j)
    if (match[j]) total += cost(match[j] - 1, j - 1);
  return total;
}

namespace {

// Successive shortest augmenting paths with potentials (Dijkstra) on the
// bipartite transport network. Supplies/demands are small integers here
// (<= n*m units), which keeps this exact.
struct TransportNetwork {
  struct Edge {
    int to;
    int cap;
    double cost;
    int rev;
  };

  explicit TransportNetwork(int n_nodes) : adj(n_nodes) {}

  void add_edge(int from, int to, int cap, double cost) {
    adj[from].push_back({to, cap, cost, static_cast<int>(adj[to].size())});
    adj[to].push_back({from, 0, -cost, static_cast<int>(adj[from].size()) - 1});
  }

  // Sends `flow` units from s to t, returns total cost. Costs must be
  // non-negative (they are: ground distances).
  double min_cost_flow(int s, int t, int flow) {
    const double inf = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(adj.size());
    std::vector<double> potential(n, 0.0);
    double total = 0.0;
    while (flow > 0) {
      std::vector<double> dist(n, inf);
      std::vector<int> prev_node(n, -1), prev_edge(n, -1);
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
      dist[s] = 0.0;
      pq.push({0.0, s});
      while (!pq.empty()) {
        auto [d, node] = pq.top();
        pq.pop();
        if (d > dist[node] + 1e-15) continue;
        for (int e = 0; e < static_cast<int>(adj[node].size()); ++e) {
          const Edge& edge = adj[node][e];
          if (edge.cap <= 0) continue;
          const double nd = d + edge.cost + potential[node] - potential[edge.to];
          if (nd < dist[edge.to] - 1e-15) {
            dist[edge.to] = nd;
            prev_node[edge.to] = node;
            prev_edge[edge.to] = e;
            pq.push({nd, edge.to});
          }
        }
      }
      assert(dist[t] < inf && "transport network must stay feasible");
      for (int i = 0; i < n; ++i)
        if (dist[i] < inf) potential[i] += dist[i];
      int pushed = flow;
      for (int node = t; node != s; node = prev_node[node])
        pushed = std::min(pushed, adj[prev_node[node]][prev_edge[node]].cap);
      for (int node = t; node != s; node = prev_node[node]) {
        Edge& edge = adj[prev_node[node]][prev_edge[node]];
        edge.cap -= pushed;
        adj[node][edge.rev].cap += pushed;
        total += pushed * edge.cost;
      }
      flow -= pushed;
    }
    return total;
  }

  std::vector<std::vector<Edge>> adj;
};

}  // namespace

double solve_uniform_transport(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  assert(n >= 1 && m >= 1);

  // Nodes: source, n rows, m columns, sink. Unit mass = 1/(n*m).
  const int source = 0;
  const int sink = n + m + 1;
  TransportNetwork net(n + m + 2);
  for (int i = 0; i < n; ++i) net.add_edge(source, 1 + i, m, 0.0);
  for (int j = 0; j < m; ++j) net.add_edge(1 + n + j, sink, n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) net.add_edge(1 + i, 1 + n + j, n * m, cost(i, j));

  const double scaled = net.min_cost_flow(source, sink, n * m);
  return scaled / static_cast<double>(n) / static_cast<double>(m);
}

}  // namespace trajgan
