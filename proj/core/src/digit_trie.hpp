#pragma once

// Digit tries over balls. A node at depth d below the root p^L O stands for a
// ball of scale L + d; its children are indexed by the digit at exponent L + d.

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lfw/clopen.hpp"

namespace lfw::detail {

/// Digits of center at exponents L .. k-1.
inline std::vector<FqCode> ball_path(const Ball& b, int L) {
  if (b.base_exponent() < L) throw std::logic_error("ball below trie base");
  std::vector<FqCode> path(static_cast<std::size_t>(b.scale() - L), 0);
  for (const auto& [e, code] : b.center().digits()) path[static_cast<std::size_t>(e - L)] = code;
  return path;
}

inline Ball path_ball(const FieldConfigPtr& field, int L, const std::vector<FqCode>& path) {
  std::vector<Digit> ds;
  for (std::size_t i = 0; i < path.size(); ++i)
    if (path[i] != 0) ds.emplace_back(L + static_cast<int>(i), path[i]);
  return Ball(FieldElement(field, std::move(ds)), L + static_cast<int>(path.size()));
}

struct SetNode {
  FqCode digit = 0;
  bool full = false;
  std::vector<SetNode> kids;  // sorted by digit, never empty nodes

  bool empty() const { return !full && kids.empty(); }

  SetNode* find(FqCode d) {
    auto it = std::lower_bound(kids.begin(), kids.end(), d,
                               [](const SetNode& n, FqCode v) { return n.digit < v; });
    return (it != kids.end() && it->digit == d) ? &*it : nullptr;
  }
  const SetNode* find(FqCode d) const { return const_cast<SetNode*>(this)->find(d); }

  SetNode& child(FqCode d) {
    auto it = std::lower_bound(kids.begin(), kids.end(), d,
                               [](const SetNode& n, FqCode v) { return n.digit < v; });
    if (it != kids.end() && it->digit == d) return *it;
    SetNode n;
    n.digit = d;
    return *kids.insert(it, std::move(n));
  }
};

class SetTrie {
 public:
  SetTrie(FieldConfigPtr field, int base) : field_(std::move(field)), base_(base) {}

  void insert(const Ball& b) {
    const auto path = ball_path(b, base_);
    SetNode* node = &root_;
    for (FqCode d : path) {
      if (node->full) return;
      node = &node->child(d);
    }
    node->full = true;
    node->kids.clear();
  }

  void compress() { compress(root_); }

  SetNode& root() { return root_; }
  const SetNode& root() const { return root_; }
  int base() const { return base_; }

  std::vector<Ball> balls() const {
    std::vector<Ball> out;
    std::vector<FqCode> path;
    collect(root_, path, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  static SetNode unite(const SetNode& a, const SetNode& b, unsigned q) {
    SetNode r;
    r.digit = a.digit;
    if (a.full || b.full) {
      r.full = true;
      return r;
    }
    auto ia = a.kids.begin();
    auto ib = b.kids.begin();
    while (ia != a.kids.end() || ib != b.kids.end()) {
      if (ib == b.kids.end() || (ia != a.kids.end() && ia->digit < ib->digit)) {
        r.kids.push_back(*ia++);
      } else if (ia == a.kids.end() || ib->digit < ia->digit) {
        r.kids.push_back(*ib++);
      } else {
        r.kids.push_back(unite(*ia++, *ib++, q));
      }
    }
    merge_if_complete(r, q);
    return r;
  }

  static SetNode intersect(const SetNode& a, const SetNode& b, unsigned q) {
    if (a.full) return relabel(b, a.digit);
    if (b.full) return relabel(a, a.digit);
    SetNode r;
    r.digit = a.digit;
    auto ib = b.kids.begin();
    for (const auto& ka : a.kids) {
      while (ib != b.kids.end() && ib->digit < ka.digit) ++ib;
      if (ib == b.kids.end()) break;
      if (ib->digit != ka.digit) continue;
      SetNode k = intersect(ka, *ib, q);
      if (!k.empty()) r.kids.push_back(std::move(k));
    }
    merge_if_complete(r, q);
    return r;
  }

  static SetNode subtract(const SetNode& a, const SetNode& b, unsigned q) {
    SetNode r;
    r.digit = a.digit;
    if (b.full || a.empty()) return r;
    if (b.empty()) return relabel(a, a.digit);
    SetNode expanded;
    const SetNode* src = &a;
    if (a.full) {
      expanded.digit = a.digit;
      for (unsigned d = 0; d < q; ++d) {
        SetNode k;
        k.digit = static_cast<FqCode>(d);
        k.full = true;
        expanded.kids.push_back(std::move(k));
      }
      src = &expanded;
    }
    for (const auto& ka : src->kids) {
      const SetNode* kb = b.find(ka.digit);
      if (kb == nullptr) {
        r.kids.push_back(ka);
      } else {
        SetNode k = subtract(ka, *kb, q);
        if (!k.empty()) r.kids.push_back(std::move(k));
      }
    }
    merge_if_complete(r, q);
    return r;
  }

  static bool subset(const SetNode& a, const SetNode& b) {
    if (b.full || a.empty()) return true;
    if (a.full) return false;
    for (const auto& ka : a.kids) {
      const SetNode* kb = b.find(ka.digit);
      if (kb == nullptr || !subset(ka, *kb)) return false;
    }
    return true;
  }

 private:
  static SetNode relabel(SetNode n, FqCode digit) {
    n.digit = digit;
    return n;
  }

  static void merge_if_complete(SetNode& n, unsigned q) {
    if (n.full || n.kids.size() != q) return;
    for (const auto& k : n.kids)
      if (!k.full) return;
    n.full = true;
    n.kids.clear();
  }

  void compress(SetNode& n) {
    for (auto& k : n.kids) compress(k);
    n.kids.erase(std::remove_if(n.kids.begin(), n.kids.end(), [](const SetNode& k) { return k.empty(); }),
                 n.kids.end());
    merge_if_complete(n, field_->q());
  }

  void collect(const SetNode& n, std::vector<FqCode>& path, std::vector<Ball>& out) const {
    if (n.full) {
      out.push_back(path_ball(field_, base_, path));
      return;
    }
    for (const auto& k : n.kids) {
      path.push_back(k.digit);
      collect(k, path, out);
      path.pop_back();
    }
  }

  FieldConfigPtr field_;
  int base_;
  SetNode root_;
};

/// Trie whose nodes carry additive payloads; the value at a point is the sum of
/// the payloads of all inserted balls containing it.
template <class T>
class AccumTrie {
 public:
  struct Node {
    FqCode digit = 0;
    std::optional<T> add;
    std::vector<Node> kids;

    Node& child(FqCode d) {
      auto it = std::lower_bound(kids.begin(), kids.end(), d,
                                 [](const Node& n, FqCode v) { return n.digit < v; });
      if (it != kids.end() && it->digit == d) return *it;
      Node n;
      n.digit = d;
      return *kids.insert(it, std::move(n));
    }
  };

  AccumTrie(FieldConfigPtr field, int base) : field_(std::move(field)), base_(base) {}

  void add(const Ball& b, const T& value) {
    Node* node = &root_;
    for (FqCode d : ball_path(b, base_)) node = &node->child(d);
    if (node->add) {
      *node->add += value;
    } else {
      node->add = value;
    }
  }

  /// Visits a partition of the covered region into balls on which the
  /// accumulated value is constant: leaves, plus the uncovered siblings of
  /// internal nodes lying inside some inserted ball.
  void for_each_cell(const std::function<void(const Ball&, const T&)>& visit) const {
    std::vector<FqCode> path;
    walk(root_, std::nullopt, path, visit);
  }

 private:
  void walk(const Node& n, const std::optional<T>& above, std::vector<FqCode>& path,
            const std::function<void(const Ball&, const T&)>& visit) const {
    std::optional<T> here = above;
    if (n.add) {
      if (here) {
        *here += *n.add;
      } else {
        here = *n.add;
      }
    }
    if (n.kids.empty()) {
      if (here) visit(path_ball(field_, base_, path), *here);
      return;
    }
    const unsigned q = field_->q();
    std::size_t next = 0;
    for (unsigned d = 0; d < q; ++d) {
      path.push_back(static_cast<FqCode>(d));
      if (next < n.kids.size() && n.kids[next].digit == d) {
        walk(n.kids[next], here, path, visit);
        ++next;
      } else if (here) {
        visit(path_ball(field_, base_, path), *here);
      }
      path.pop_back();
    }
  }

  FieldConfigPtr field_;
  int base_;
  Node root_;
};

}  // namespace lfw::detail
