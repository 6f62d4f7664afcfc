#pragma once

#include <cstdint>
#include <iosfwd>
#include <mutex>
#include <random>
#include <vector>

namespace flowrl::sac {

/// One experience record; states are flattened lifted-state matrices.
struct Transition {
  std::vector<double> state;
  double action = 0.0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;
};

/// Fixed-capacity ring of transitions. Insertions are linearizable so
/// multiple environment workers can feed one buffer; sampling happens on the
/// single trainer thread.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 1'000'000);

  void store(Transition t);
  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }
  std::uint64_t total_insertions() const;

  const Transition& at(std::size_t i) const { return data_[i]; }

  /// Uniform sample of `batch` distinct indices (no replacement in a batch).
  std::vector<std::size_t> sample_indices(std::size_t batch, std::mt19937_64& rng) const;

  void write_contents(std::ostream& out) const;
  void read_contents(std::istream& in);

 private:
  std::size_t capacity_;
  std::vector<Transition> data_;
  std::size_t next_ = 0;
  std::uint64_t insertions_ = 0;
  mutable std::mutex mutex_;
};

}  // namespace flowrl::sac
