#include "mgss/search_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mgss/order_stats.hpp"

namespace mgss {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double stage_apply_full(const PathStage& st, double x) {
  if (st.kind == NodeKind::kMin) {
    return backup_min(st.l, st.q, std::min(st.bound, x));
  }
  return backup_max(st.l, st.q, std::max(st.bound, x));
}

double stage_apply_pure(const PathStage& st, double x) {
  if (st.l == 0) return x;
  return st.kind == NodeKind::kMin ? backup_min(st.l, st.q, x)
                                   : backup_max(st.l, st.q, x);
}

// Pulls a required output level backward through the full stage transfers
// (b-backup around the sibling clamp) of stages[from..end), returning the
// level the path child's value must strictly exceed.  +inf: unreachable (a
// b< cap or a min sibling clamp sits at or below the level); -inf: already
// guaranteed (a b> floor or a max sibling alone clears the level).
double invert_chain(const std::vector<PathStage>& stages, std::size_t from,
                    double y) {
  for (std::size_t i = from; i < stages.size(); ++i) {
    const PathStage& st = stages[i];
    if (st.kind == NodeKind::kMin) {
      if (st.l > 0) {
        const auto inv = try_inverse_backup_min(st.l, st.q, y);
        if (!inv) return kInf;
        y = *inv;
      }
      if (st.bound <= y) return kInf;
    } else {
      if (st.l > 0) {
        const auto inv = try_inverse_backup_max(st.l, st.q, y);
        if (!inv) return -kInf;
        y = *inv;
      }
      if (st.bound > y) return -kInf;
    }
  }
  return y;
}

}  // namespace

void SearchTree::init_root(NodeKind kind, int n, const NormalParams& q,
                           double eval) {
  nodes_.clear();
  SearchNode root;
  root.kind = kind;
  root.n = n;
  root.q = q;
  root.eval = eval;
  root.depth = 0;
  nodes_.push_back(std::move(root));
  nodes_[0].value = node_value(0);
}

int SearchTree::add_child(int parent, int move, NodeKind kind, int n,
                          const NormalParams& q, double eval, bool exact,
                          double exact_value) {
  SearchNode& p = nodes_[parent];
  if (p.l() <= 0) throw std::logic_error("parent has no unexpanded successor");
  SearchNode nd;
  nd.kind = kind;
  nd.parent = parent;
  nd.move = move;
  nd.n = n;
  nd.q = q;
  nd.eval = eval;
  nd.exact = exact;
  nd.depth = p.depth + 1;
  const int idx = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(nd));
  nodes_[parent].children.push_back(idx);
  nodes_[idx].value = exact ? exact_value : node_value(idx);
  return idx;
}

double SearchTree::extremum_k(int i) const {
  const SearchNode& nd = nodes_[i];
  double ext = nd.kind == NodeKind::kMin ? kInf : -kInf;
  for (int c : nd.children) {
    ext = nd.kind == NodeKind::kMin ? std::min(ext, nodes_[c].value)
                                    : std::max(ext, nodes_[c].value);
  }
  return ext;
}

double SearchTree::node_value(int i) const {
  const SearchNode& nd = nodes_[i];
  if (nd.exact) return nd.value;
  if (nd.k() == 0) {
    return nd.kind == NodeKind::kMin ? expected_min(nd.n, nd.q)
                                     : expected_max(nd.n, nd.q);
  }
  const double ext = extremum_k(i);
  if (nd.kind == NodeKind::kMin) {
    return std::min(backup_min(nd.l(), nd.q, ext), ext);
  }
  return std::max(backup_max(nd.l(), nd.q, ext), ext);
}

bool SearchTree::refresh_value(int i) {
  SearchNode& nd = nodes_[i];
  if (nd.exact) return false;
  bool resolve = nd.l() == 0 && nd.k() > 0;
  if (resolve) {
    for (int c : nd.children) {
      if (!nodes_[c].exact) {
        resolve = false;
        break;
      }
    }
  }
  const double v = resolve ? extremum_k(i) : node_value(i);
  const bool changed = v != nd.value || resolve != nd.exact;
  nd.value = v;
  nd.exact = resolve;
  return changed;
}

void SearchTree::backup_path(int from) {
  for (int x = from; x != -1; x = nodes_[x].parent) {
    if (!refresh_value(x) && x != from) break;
  }
}

void SearchTree::recompute_all() {
  for (int i = size() - 1; i >= 0; --i) refresh_value(i);
}

double SearchTree::sibling_bound(int parent, int child) const {
  const SearchNode& p = nodes_[parent];
  double ext = p.kind == NodeKind::kMin ? kInf : -kInf;
  for (int c : p.children) {
    if (c == child) continue;
    ext = p.kind == NodeKind::kMin ? std::min(ext, nodes_[c].value)
                                   : std::max(ext, nodes_[c].value);
  }
  return ext;
}

double SearchTree::alpha() const {
  double best = -kInf;
  for (int c : nodes_[kRoot].children) best = std::max(best, nodes_[c].value);
  return best;
}

double SearchTree::alpha2() const {
  double best = -kInf, second = -kInf;
  for (int c : nodes_[kRoot].children) {
    const double v = nodes_[c].value;
    if (v > best) {
      second = best;
      best = v;
    } else {
      second = std::max(second, v);
    }
  }
  return second;
}

int SearchTree::best_top_child() const {
  int best = -1;
  double bv = -kInf;
  for (int c : nodes_[kRoot].children) {
    if (nodes_[c].value > bv) {
      bv = nodes_[c].value;
      best = c;
    }
  }
  return best;
}

std::string SearchTree::dump() const {
  std::ostringstream out;
  out << "tree nodes=" << size() << " alpha=" << alpha()
      << " alpha2=" << alpha2() << "\n";
  for (int i = 0; i < size(); ++i) {
    const SearchNode& nd = nodes_[i];
    for (int d = 0; d < nd.depth; ++d) out << "  ";
    out << "#" << i << " " << (nd.kind == NodeKind::kMin ? "min" : "max")
        << " move=" << nd.move << " n=" << nd.n << " k=" << nd.k()
        << " value=" << nd.value << (nd.exact ? " exact" : "")
        << " eval=" << nd.eval << "\n";
  }
  return out.str();
}

PathContext make_path(const SearchTree& t, int target) {
  PathContext path;
  std::vector<int> ancestors;  // parent(target) .. root child
  for (int x = t.at(target).parent; x > SearchTree::kRoot;
       x = t.at(x).parent) {
    ancestors.push_back(x);
  }
  std::reverse(ancestors.begin(), ancestors.end());
  path.top = ancestors.empty() ? target : ancestors.front();
  path.stages.reserve(ancestors.size());
  for (std::size_t i = 0; i < ancestors.size(); ++i) {
    const int a = ancestors[i];
    const int child = i + 1 < ancestors.size() ? ancestors[i + 1] : target;
    const SearchNode& an = t.at(a);
    PathStage st;
    st.kind = an.kind;
    st.node = a;
    st.l = an.l();
    st.q = an.q;
    st.bound = t.sibling_bound(a, child);
    st.child_value = t.at(child).value;
    path.stages.push_back(st);
  }
  path.under_best = path.top == t.best_top_child();
  path.alpha = t.alpha();
  path.alpha2 = t.alpha2();
  return path;
}

std::vector<PathStage> reflect_stages(const std::vector<PathStage>& stages) {
  std::vector<PathStage> out;
  out.reserve(stages.size());
  for (const PathStage& st : stages) {
    PathStage r = st;
    r.kind = st.kind == NodeKind::kMin ? NodeKind::kMax : NodeKind::kMin;
    r.bound = -st.bound;
    r.child_value = -st.child_value;
    r.q = NormalParams{-st.q.mean, st.q.std};
    out.push_back(r);
  }
  return out;
}

double compose_f_full(const std::vector<PathStage>& stages, double x) {
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    x = stage_apply_full(*it, x);
  }
  return x;
}

double compose_f_pure(const std::vector<PathStage>& stages, double x) {
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    x = stage_apply_pure(*it, x);
  }
  return x;
}

double compose_f_single(const std::vector<PathStage>& stages, int critical,
                        double x) {
  for (int i = static_cast<int>(stages.size()) - 1; i >= 0; --i) {
    const PathStage& st = stages[i];
    if (i == critical) {
      x = stage_apply_full(st, x);
    } else {
      x = st.kind == NodeKind::kMin ? std::min(st.bound, x)
                                    : std::max(st.bound, x);
    }
  }
  return x;
}

int most_critical_stage(const std::vector<PathStage>& stages, double lo,
                        double hi) {
  if (lo > hi) std::swap(lo, hi);
  int best = -1;
  double best_dist = kInf;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const PathStage& st = stages[i];
    const double sat = st.kind == NodeKind::kMin
                           ? backup_min(st.l, st.q, st.bound)
                           : backup_max(st.l, st.q, st.bound);
    double dist = 0.0;
    if (sat < lo) dist = lo - sat;
    else if (sat > hi) dist = sat - hi;
    if (dist < best_dist) {
      best_dist = dist;
      best = static_cast<int>(i);
    }
  }
  return best;
}

double gamma_bound(const std::vector<PathStage>& stages) {
  double g = -kInf;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (stages[i].kind != NodeKind::kMax) continue;
    g = std::max(g, invert_chain(stages, i + 1, stages[i].bound));
  }
  return g;
}

double delta_bound(const std::vector<PathStage>& stages) {
  double d = kInf;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (stages[i].kind != NodeKind::kMin) continue;
    double v = backup_min(stages[i].l, stages[i].q, stages[i].bound);
    for (std::size_t t = i; t-- > 0;) v = stage_apply_pure(stages[t], v);
    d = std::min(d, v);
  }
  return d;
}

bool is_relevant(const SearchTree& t, const PathContext& path, int target) {
  // Work in increase orientation: reflected when the target sits under the
  // current best top-level move (where only decreases carry information).
  const bool reflected = path.under_best;
  const std::vector<PathStage> stages =
      reflected ? reflect_stages(path.stages) : path.stages;
  const double bar = reflected ? -path.alpha2 : path.alpha;

  // Test 2: at every min stage the path child must be its strictly lowest
  // known successor, or the sibling clamp absorbs any increase.
  for (const PathStage& st : stages) {
    if (st.kind == NodeKind::kMin && !(st.child_value < st.bound)) return false;
  }

  // Test 3: the target's reachable values must be able to exceed the gamma
  // level of the whole path (the chain inversion already accounts for every
  // intermediate cap, so ancestor ability needs no separate checks).  A min
  // target's value can never rise above its children extremum; other targets
  // are unbounded, which still prunes a fully blocked chain (gamma = +inf).
  const NodeKind jkind_frame =
      reflected ? (t.at(target).kind == NodeKind::kMin ? NodeKind::kMax
                                                       : NodeKind::kMin)
                : t.at(target).kind;
  double cap = kInf;
  if (jkind_frame == NodeKind::kMin && t.at(target).k() > 0) {
    const double raw = t.extremum_k(target);
    cap = reflected ? -raw : raw;
  }
  if (!(cap > gamma_bound(stages))) return false;

  // Test 4: the highest top-level value the target's rise can produce must
  // clear the decision bar.  With an unbounded target this equals the delta
  // bound; a capped target tightens it.
  return compose_f_full(stages, cap) > bar;
}

}  // namespace mgss
