#include "flowrl/sac/replay_buffer.hpp"

#include <numeric>
#include <stdexcept>

#include "flowrl/io/binary.hpp"

namespace flowrl::sac {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::store(Transition t) {
  std::lock_guard lock(mutex_);
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
  } else {
    data_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
  ++insertions_;
}

std::size_t ReplayBuffer::size() const {
  std::lock_guard lock(mutex_);
  return data_.size();
}

std::uint64_t ReplayBuffer::total_insertions() const {
  std::lock_guard lock(mutex_);
  return insertions_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch,
                                                      std::mt19937_64& rng) const {
  std::lock_guard lock(mutex_);
  if (batch > data_.size())
    throw std::invalid_argument("ReplayBuffer: batch larger than stored transitions");
  // Partial Fisher-Yates over an index pool: uniform without replacement.
  std::vector<std::size_t> pool(data_.size());
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t k = 0; k < batch; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, pool.size() - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  pool.resize(batch);
  return pool;
}

void ReplayBuffer::write_contents(std::ostream& out) const {
  std::lock_guard lock(mutex_);
  io::write_pod<std::uint64_t>(out, data_.size());
  io::write_pod<std::uint64_t>(out, next_);
  io::write_pod<std::uint64_t>(out, insertions_);
  for (const Transition& t : data_) {
    io::write_f64_array(out, t.state);
    io::write_pod(out, t.action);
    io::write_pod(out, t.reward);
    io::write_f64_array(out, t.next_state);
    io::write_pod<std::uint8_t>(out, t.done ? 1 : 0);
  }
}

void ReplayBuffer::read_contents(std::istream& in) {
  std::lock_guard lock(mutex_);
  const auto n = io::read_pod<std::uint64_t>(in);
  if (n > capacity_) throw ConfigError("replay buffer: stored size exceeds capacity");
  next_ = io::read_pod<std::uint64_t>(in);
  insertions_ = io::read_pod<std::uint64_t>(in);
  data_.clear();
  data_.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    Transition t;
    t.state = io::read_f64_array(in);
    t.action = io::read_pod<double>(in);
    t.reward = io::read_pod<double>(in);
    t.next_state = io::read_f64_array(in);
    t.done = io::read_pod<std::uint8_t>(in) != 0;
    data_.push_back(std::move(t));
  }
}

}  // namespace flowrl::sac
