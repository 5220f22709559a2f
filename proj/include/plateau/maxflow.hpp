#ifndef PLATEAU_MAXFLOW_HPP
#define PLATEAU_MAXFLOW_HPP

#include <cstdint>
#include <limits>
#include <vector>

namespace plateau {

/// Dinic max flow on integer capacities.
class MaxFlow {
 public:
  static constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max() / 4;

  explicit MaxFlow(int nodes);

  int add_node();
  int size() const { return static_cast<int>(head_.size()); }
  void add_edge(int from, int to, std::int64_t cap);
  /// Both directions with the same capacity.
  void add_undirected(int a, int b, std::int64_t cap);

  std::int64_t run(int source, int sink);
  /// Nodes reachable from the source in the residual graph after run().
  std::vector<bool> source_side(int source) const;

 private:
  struct Arc {
    int to;
    int next;
    std::int64_t cap;
  };
  bool bfs(int s, int t);
  std::int64_t dfs(int v, int t, std::int64_t pushed);

  std::vector<int> head_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace plateau

#endif
