#include "hybridsec/replay_buffer.hpp"

#include "hybridsec/errors.hpp"

namespace hybridsec {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay buffer capacity must be positive", "buffer_capacity");
  slots_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
  if (slots_.size() < capacity_) {
    slots_.push_back(std::move(t));
  } else {
    slots_[head_] = std::move(t);
  }
  head_ = (head_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw ContractViolation("replay buffer index out of range");
  const std::size_t oldest = size_ < capacity_ ? 0 : head_;
  return slots_[(oldest + i) % capacity_];
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t count, Rng& rng) const {
  if (size_ == 0) throw ContractViolation("cannot sample from an empty replay buffer");
  std::vector<const Transition*> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto idx = std::uniform_int_distribution<std::size_t>(0, size_ - 1)(rng);
    out.push_back(&slots_[idx]);
  }
  return out;
}

}  // namespace hybridsec
