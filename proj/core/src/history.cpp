#include "ipd/history.hpp"

#include <string>

namespace ipd {

int joint_code(const JointRecord& rec) {
  int code = action_code(rec.own);
  for (Action a : rec.others) code = (code << 1) | action_code(a);
  return code;
}

HistoryWindow::HistoryWindow(int capacity, int players)
    : capacity_(capacity), players_(players) {
  if (capacity < 1) throw ConfigError("memory must be >= 1, got " + std::to_string(capacity));
  if (players < 2) throw ConfigError("players must be >= 2, got " + std::to_string(players));
}

void HistoryWindow::push(const JointRecord& rec) {
  if (static_cast<int>(rec.others.size()) != players_ - 1) {
    throw DomainError("ArityMismatch",
                      "record has " + std::to_string(rec.others.size()) + " other seats, window expects " +
                          std::to_string(players_ - 1));
  }
  entries_.push_back(rec);
  if (static_cast<int>(entries_.size()) > capacity_) entries_.pop_front();
}

StateId HistoryWindow::state_count() const {
  StateId count = 1;
  for (int i = 0; i < capacity_; ++i) count *= block_width();
  return count;
}

ContextVector HistoryWindow::encode_context() const {
  const int width = block_width();
  ContextVector ctx;
  ctx.memory = capacity_;
  ctx.players = players_;
  ctx.values.assign(static_cast<std::size_t>(capacity_) * width, 0.0);
  // Newest record occupies the last block; missing older rounds stay zero.
  const int filled = size();
  int block = capacity_ - filled;
  for (const JointRecord& rec : entries_) {
    ctx.values[static_cast<std::size_t>(block) * width + joint_code(rec)] = 1.0;
    ++block;
  }
  return ctx;
}

StateId HistoryWindow::encode_state() const {
  if (!full()) return init_state();
  StateId id = 0;
  for (const JointRecord& rec : entries_) {
    id = id * block_width() + joint_code(rec);
  }
  return id;
}

std::vector<JointRecord> decode_state(StateId id, int capacity, int players) {
  const int width = 1 << players;
  std::vector<JointRecord> records(capacity);
  for (int slot = capacity - 1; slot >= 0; --slot) {
    int code = static_cast<int>(id % width);
    id /= width;
    JointRecord rec;
    rec.others.resize(players - 1);
    for (int j = players - 2; j >= 0; --j) {
      rec.others[j] = action_from_code(code & 1);
      code >>= 1;
    }
    rec.own = action_from_code(code & 1);
    records[slot] = rec;
  }
  return records;
}

}  // namespace ipd
