#pragma once

#include <cstddef>
#include <vector>

#include "hybridsec/geometry_channel.hpp"
#include "hybridsec/rng.hpp"

namespace hybridsec {

struct Transition {
  std::vector<double> state;
  Action action;
  double reward = 0.0;
  std::vector<double> next_state;

  friend bool operator==(const Transition&, const Transition&) = default;
};

// Bounded FIFO; pushing into a full buffer evicts the oldest transition.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return size_ == 0; }

  // i = 0 is the oldest stored transition.
  const Transition& at(std::size_t i) const;

  // Uniform draws with replacement.
  std::vector<const Transition*> sample(std::size_t count, Rng& rng) const;

 private:
  friend struct CheckpointCodec;

  std::size_t capacity_;
  std::size_t head_ = 0;  // next write slot
  std::size_t size_ = 0;
  std::vector<Transition> slots_;
};

}  // namespace hybridsec
