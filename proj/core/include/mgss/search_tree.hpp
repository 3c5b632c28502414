#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgss/backup.hpp"
#include "mgss/normal.hpp"

namespace mgss {

enum class NodeKind : std::uint8_t { kMin, kMax };

// A node of the partially expanded tree.  All values are oriented for the
// root player (root = max).  Unexpanded successors are modeled by q; expanded
// children carry their own backed-up values.
struct SearchNode {
  NodeKind kind = NodeKind::kMax;
  int parent = -1;
  int move = -1;  // move id leading here from the parent
  int n = 0;      // total successor count of the underlying state
  NormalParams q;
  double eval = 0.0;   // static evaluation (anchor for q)
  double value = 0.0;  // current backed-up value
  bool exact = false;  // terminal or fully resolved subtree
  int depth = 0;
  std::vector<int> children;  // creation order

  int k() const { return static_cast<int>(children.size()); }
  int l() const { return n - k(); }
  bool expandable() const { return !exact && l() > 0; }
};

// One ancestor level of a path from the top of the tree down to a target
// node.  `bound` is the extremum over this node's OTHER evaluated children
// (excluding the path child); `child_value` is the current value of the path
// child one level below (the target itself for the last stage).
struct PathStage {
  NodeKind kind = NodeKind::kMin;
  int node = -1;
  int l = 0;
  NormalParams q;
  double bound = 0.0;
  double child_value = 0.0;
};

// Ancestor stages from the top-level node (root child) down to the target's
// parent, plus the root-level decision context.  Empty stage list when the
// target is itself a top-level node.
struct PathContext {
  std::vector<PathStage> stages;
  int top = -1;      // top-level ancestor (== target when stages is empty)
  bool under_best = false;
  double alpha = 0.0;
  double alpha2 = 0.0;
};

class SearchTree {
 public:
  static constexpr int kRoot = 0;

  void init_root(NodeKind kind, int n, const NormalParams& q, double eval);
  // Creates a child, computes its own value, and registers it with the
  // parent.  Does NOT re-back-up the ancestors; call backup_path after the
  // batch.  Returns the new node index.
  int add_child(int parent, int move, NodeKind kind, int n,
                const NormalParams& q, double eval, bool exact,
                double exact_value);

  bool empty() const { return nodes_.empty(); }
  int size() const { return static_cast<int>(nodes_.size()); }
  const SearchNode& at(int i) const { return nodes_[i]; }
  SearchNode& at(int i) { return nodes_[i]; }

  // min over children values for min nodes (max for max); +/-inf with none.
  double extremum_k(int i) const;
  // Value per the backup rule: exact score when resolved, expected extremum
  // when no children, b-backup of the children extremum otherwise.
  double node_value(int i) const;
  // Recomputes value and the exact flag from the children; returns true when
  // the stored value or flag changed.
  bool refresh_value(int i);
  // Refreshes values from `from` up to the root.
  void backup_path(int from);
  // Debug cross-check: recompute every node bottom-up.
  void recompute_all();

  // Extremum over the parent's other evaluated children; +inf for min
  // parents (-inf for max) when the child has no evaluated sibling.
  double sibling_bound(int parent, int child) const;

  double alpha() const;           // best top-level value
  double alpha2() const;          // second-best top-level value
  int best_top_child() const;     // node index of the best top-level move

  std::string dump() const;

 private:
  std::vector<SearchNode> nodes_;
};

PathContext make_path(const SearchTree& t, int target);

// Mirrors every stage through x -> -x: kinds flip, bounds/values/q negate.
// Turns decrease-oriented questions into the increase-oriented machinery.
std::vector<PathStage> reflect_stages(const std::vector<PathStage>& stages);

// Propagation to the top level with the min/max sibling clamps in place;
// monotone nondecreasing in x, identity for an empty stage list.
double compose_f_full(const std::vector<PathStage>& stages, double x);
// Pure b-stage composition with the clamps stripped (valid near the current
// values once the relevance tests hold).
double compose_f_pure(const std::vector<PathStage>& stages, double x);
// Every stage collapsed to its sibling clamp except `critical`, which keeps
// its full b-backup.
double compose_f_single(const std::vector<PathStage>& stages, int critical,
                        double x);
// Stage whose saturation level lies closest to the window [lo, hi].
int most_critical_stage(const std::vector<PathStage>& stages, double lo,
                        double hi);

// Lowest value the path child must exceed for increases to reach the top
// level: max over max-stage bounds pulled down through the inverted b-chain
// below them, sibling clamps included.  -inf with no max stages; +inf when a
// chain saturates or a min clamp blocks before reaching the bound.
double gamma_bound(const std::vector<PathStage>& stages);
// Highest top-level value an unbounded increase of the path child can
// produce: min over min-stage caps pushed up through the pure b-prefix above
// them.  +inf with no min stages.
double delta_bound(const std::vector<PathStage>& stages);

// The four relevance tests for expanding `target`.  Increase-oriented for
// targets outside the current best top-level subtree, decrease-oriented
// (via reflection) underneath it.
bool is_relevant(const SearchTree& t, const PathContext& path, int target);

}  // namespace mgss
