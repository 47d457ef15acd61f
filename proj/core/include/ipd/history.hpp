#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "ipd/action.hpp"
#include "ipd/error.hpp"

namespace ipd {

/// One observed round from a single seat's perspective: own action first,
/// then the remaining seats in fixed seat order.
struct JointRecord {
  Action own;
  std::vector<Action> others;
};

/// Canonical joint-action code for one record: own action is the most
/// significant bit, then the other seats in order. Range [0, 2^k).
int joint_code(const JointRecord& rec);

using StateId = std::int64_t;

/// Indicator feature vector over the past `memory` rounds: one block of width
/// 2^k per round slot, oldest first; the newest round is always the last
/// block. Pre-game slots are all-zero.
struct ContextVector {
  std::vector<double> values;
  int memory = 0;
  int players = 0;

  int dimension() const { return static_cast<int>(values.size()); }
  bool operator==(const ContextVector&) const = default;
};

/// Fixed-capacity chronological memory of the past n joint actions for one
/// seat. Oldest entries are evicted FIFO once n rounds have been observed.
class HistoryWindow {
 public:
  /// capacity = memory length n (>= 1), players = k (>= 2).
  HistoryWindow(int capacity, int players);

  /// Appends the newest record; evicts the oldest when over capacity.
  /// Throws DomainError("ArityMismatch") if record.others.size() != k-1.
  void push(const JointRecord& rec);

  void clear() { entries_.clear(); }

  int capacity() const { return capacity_; }
  int players() const { return players_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool full() const { return size() == capacity_; }
  const std::deque<JointRecord>& entries() const { return entries_; }

  /// Number of joint-action codes per round slot, 2^k.
  int block_width() const { return 1 << players_; }

  /// Total count of full-window states, (2^k)^n.
  StateId state_count() const;

  /// The distinguished state used while fewer than n rounds have been seen.
  StateId init_state() const { return state_count(); }

  /// One-hot block encoding, dimension n * 2^k. Handles partial fill.
  ContextVector encode_context() const;

  /// Base-2^k positional number of joint codes, oldest = most significant
  /// digit; init_state() while the window is under-filled.
  StateId encode_state() const;

 private:
  int capacity_;
  int players_;
  std::deque<JointRecord> entries_;
};

/// Inverse of encode_state for full windows: reconstructs the record
/// sequence (oldest first) from a state id in [0, (2^k)^n).
std::vector<JointRecord> decode_state(StateId id, int capacity, int players);

}  // namespace ipd
