#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

namespace ksvrg {

struct MemoryReport {
  int live_snapshots = 0;  // distinct d-dimensional vectors held
  int assigned = 0;        // indices mapped (always n)
};

// Map i -> theta_i with deduplicated storage: every nonempty reassignment
// creates exactly one shared snapshot (one update event, one vector), and
// snapshots are dropped the moment their refcount hits zero. Memory is
// O(live * d + n) words.
class SnapshotStore {
 public:
  SnapshotStore(int n, const Eigen::VectorXd& x0) {
    if (n < 1) throw std::invalid_argument("SnapshotStore: need n >= 1");
    if (x0.size() < 1) throw std::invalid_argument("SnapshotStore: empty initial point");
    dim_ = static_cast<int>(x0.size());
    slots_.emplace(0, Slot{x0, n});
    assign_.assign(static_cast<std::size_t>(n), 0);
    next_id_ = 1;
  }

  const Eigen::VectorXd& lookup(int i) const {
    if (i < 0 || i >= n()) throw std::out_of_range("SnapshotStore::lookup: index out of range");
    return slots_.at(assign_[static_cast<std::size_t>(i)]).vec;
  }

  // Point every i in phi at a single new snapshot holding x_new. Validates
  // everything before mutating, so a throwing call leaves the store unchanged.
  // O(|phi| + d).
  void reassign(const std::vector<int>& phi, const Eigen::VectorXd& x_new) {
    if (phi.empty()) return;
    if (x_new.size() != dim_)
      throw std::invalid_argument("SnapshotStore::reassign: wrong snapshot dimension");
    std::unordered_set<int> seen;
    seen.reserve(phi.size() * 2);
    for (int i : phi) {
      if (i < 0 || i >= n())
        throw std::out_of_range("SnapshotStore::reassign: index out of range");
      if (!seen.insert(i).second)
        throw std::invalid_argument("SnapshotStore::reassign: duplicate index in phi");
    }
    const std::int64_t id = next_id_++;
    slots_.emplace(id, Slot{x_new, static_cast<int>(phi.size())});
    for (int i : phi) {
      const std::int64_t old = assign_[static_cast<std::size_t>(i)];
      Slot& s = slots_.at(old);
      if (--s.refs == 0) slots_.erase(old);
      assign_[static_cast<std::size_t>(i)] = id;
    }
  }

  int n() const { return static_cast<int>(assign_.size()); }
  int dim() const { return dim_; }
  int live_count() const { return static_cast<int>(slots_.size()); }
  MemoryReport memory_report() const { return MemoryReport{live_count(), n()}; }
  std::int64_t snapshot_id(int i) const {
    if (i < 0 || i >= n()) throw std::out_of_range("SnapshotStore::snapshot_id: index out of range");
    return assign_[static_cast<std::size_t>(i)];
  }

  // Walks the full structure; throws std::logic_error if refcounts and the
  // assignment map disagree. Test/debug aid, not on any hot path.
  void check_consistency() const {
    std::unordered_map<std::int64_t, int> counts;
    for (std::int64_t id : assign_) {
      if (slots_.find(id) == slots_.end())
        throw std::logic_error("SnapshotStore: assignment to a dead snapshot");
      counts[id] += 1;
    }
    int total = 0;
    for (const auto& [id, slot] : slots_) {
      const auto it = counts.find(id);
      if (it == counts.end()) throw std::logic_error("SnapshotStore: unreferenced live snapshot");
      if (it->second != slot.refs) throw std::logic_error("SnapshotStore: refcount mismatch");
      total += slot.refs;
    }
    if (total != n()) throw std::logic_error("SnapshotStore: refcounts do not sum to n");
  }

 private:
  struct Slot {
    Eigen::VectorXd vec;
    int refs;
  };
  std::unordered_map<std::int64_t, Slot> slots_;
  std::vector<std::int64_t> assign_;
  std::int64_t next_id_ = 0;
  int dim_ = 0;
};

}  // namespace ksvrg
