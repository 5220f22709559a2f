#include "plateau/maxflow.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace plateau {

MaxFlow::MaxFlow(int nodes) : head_(static_cast<std::size_t>(nodes), -1) {}

int MaxFlow::add_node() {
  head_.push_back(-1);
  return size() - 1;
}

void MaxFlow::add_edge(int from, int to, std::int64_t cap) {
  if (cap < 0) throw std::invalid_argument("MaxFlow: negative capacity");
  arcs_.push_back({to, head_[from], cap});
  head_[from] = static_cast<int>(arcs_.size()) - 1;
  arcs_.push_back({from, head_[to], 0});
  head_[to] = static_cast<int>(arcs_.size()) - 1;
}

void MaxFlow::add_undirected(int a, int b, std::int64_t cap) {
  if (cap < 0) throw std::invalid_argument("MaxFlow: negative capacity");
  arcs_.push_back({b, head_[a], cap});
  head_[a] = static_cast<int>(arcs_.size()) - 1;
  arcs_.push_back({a, head_[b], cap});
  head_[b] = static_cast<int>(arcs_.size()) - 1;
}

bool MaxFlow::bfs(int s, int t) {
  level_.assign(head_.size(), -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int e = head_[v]; e != -1; e = arcs_[e].next)
      if (arcs_[e].cap > 0 && level_[arcs_[e].to] < 0) {
        level_[arcs_[e].to] = level_[v] + 1;
        q.push(arcs_[e].to);
      }
  }
  return level_[t] >= 0;
}

std::int64_t MaxFlow::dfs(int v, int t, std::int64_t pushed) {
  if (v == t) return pushed;
  for (int& e = iter_[v]; e != -1; e = arcs_[e].next) {
    Arc& a = arcs_[e];
    if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
    const std::int64_t got = dfs(a.to, t, std::min(pushed, a.cap));
    if (got > 0) {
      a.cap -= got;
      arcs_[e ^ 1].cap += got;
      return got;
    }
  }
  return 0;
}

std::int64_t MaxFlow::run(int source, int sink) {
  if (source == sink) throw std::invalid_argument("MaxFlow: source equals sink");
  std::int64_t flow = 0;
  while (bfs(source, sink)) {
    iter_ = head_;
    while (std::int64_t f = dfs(source, sink, kInfinity)) {
      flow += f;
      if (flow >= kInfinity) return kInfinity;
    }
  }
  return flow;
}

std::vector<bool> MaxFlow::source_side(int source) const {
  std::vector<bool> seen(head_.size(), false);
  std::vector<int> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int e = head_[v]; e != -1; e = arcs_[e].next)
      if (arcs_[e].cap > 0 && !seen[arcs_[e].to]) {
        seen[arcs_[e].to] = true;
        stack.push_back(arcs_[e].to);
      }
  }
  return seen;
}

}  // namespace plateau
