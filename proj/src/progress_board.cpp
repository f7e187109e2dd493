#include "gbc/engine.hpp"

namespace gbc {

ProgressBoard::ProgressBoard(std::vector<std::vector<Task>> assignments)
    : tasks_(std::move(assignments)), entries_(std::make_unique<Entry[]>(tasks_.size())) {
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (tasks_[i].empty()) entries_[i].counter.store(kDone, std::memory_order_relaxed);
  }
}

// Caller holds entries_[owner].latch.
std::optional<ClaimedTask> ProgressBoard::take_locked(std::size_t owner) {
  Entry& e = entries_[owner];
  const std::uint32_t next = e.counter.load(std::memory_order_relaxed);
  if (next == kDone) return std::nullopt;
  if (next >= tasks_[owner].size()) {
    e.counter.store(kDone, std::memory_order_release);
    return std::nullopt;
  }
  e.counter.store(next + 1, std::memory_order_release);
  return ClaimedTask{tasks_[owner][next], static_cast<std::uint32_t>(owner), next};
}

std::optional<ClaimedTask> ProgressBoard::claim_own(std::size_t worker) {
  if (entries_[worker].counter.load(std::memory_order_acquire) == kDone) return std::nullopt;
  std::lock_guard lock(entries_[worker].latch);
  return take_locked(worker);
}

std::optional<ClaimedTask> ProgressBoard::steal(std::size_t thief) {
  const std::size_t n = tasks_.size();
  // A pass that claims nothing leaves every entry at kDone: a live entry
  // either yields a task or gets marked drained under its latch.
  for (std::size_t step = 1; step <= n; ++step) {
    const std::size_t victim = (thief + step) % n;
    if (entries_[victim].counter.load(std::memory_order_acquire) == kDone) continue;
    std::lock_guard lock(entries_[victim].latch);
    if (auto claimed = take_locked(victim)) return claimed;
  }
  return std::nullopt;
}

}  // namespace gbc
