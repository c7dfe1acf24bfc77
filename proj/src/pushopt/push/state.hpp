#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "pushopt/push/program.hpp"
#include "pushopt/rng.hpp"

namespace pushopt {

using Vector = std::vector<double>;

/// A typed stack; depth 0 is the top.
template <class T>
class Stack {
 public:
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  void clear() { data_.clear(); }

  void push(T value) { data_.push_back(std::move(value)); }
  T pop() {
    T v = std::move(data_.back());
    data_.pop_back();
    return v;
  }
  typename std::vector<T>::const_reference top() const { return data_.back(); }
  T at_depth(std::size_t depth) const { return data_[data_.size() - 1 - depth]; }

  T remove_at_depth(std::size_t depth) {
    auto pos = data_.begin() + static_cast<std::ptrdiff_t>(data_.size() - 1 - depth);
    T v = std::move(*pos);
    data_.erase(pos);
    return v;
  }
  /// depth in [0, size()]; depth == size() places the value at the bottom.
  void insert_at_depth(std::size_t depth, T value) {
    data_.insert(data_.end() - static_cast<std::ptrdiff_t>(depth), std::move(value));
  }

  /// Bottom-to-top contents.
  const std::vector<T>& values() const { return data_; }

  friend bool operator==(const Stack&, const Stack&) = default;

 private:
  std::vector<T> data_;
};

using InputValue = std::variant<bool, std::int64_t, double>;

/// Ranges for the rand instructions and ephemeral constants.
struct RandomRanges {
  double float_rand_lo = 0.0;
  double float_rand_hi = 1.0;
  std::int64_t integer_rand_lo = -10;
  std::int64_t integer_rand_hi = 10;
  double vector_rand_lo = -1.0;
  double vector_rand_hi = 1.0;
};

/// Complete interpreter state for one swarm member.
struct State {
  explicit State(std::size_t dimension = 1, std::uint64_t seed = 0) : dim(dimension), rng(seed) {}

  std::size_t dim;
  Stack<bool> booleans;
  Stack<std::int64_t> integers;
  Stack<double> floats;
  Stack<Vector> vectors;
  Stack<Item> exec;
  /// Read-only during execution.
  std::vector<InputValue> inputs;
  std::size_t steps_used = 0;
  Rng rng;
  RandomRanges ranges;
  /// Optional per-instruction execution tally, indexed by Instruction::id.
  std::vector<std::uint64_t>* exec_counts = nullptr;

  void clear_stacks() {
    booleans.clear();
    integers.clear();
    floats.clear();
    vectors.clear();
    exec.clear();
  }

  bool same_stacks(const State& o) const {
    return booleans == o.booleans && integers == o.integers && floats == o.floats &&
           vectors == o.vectors && exec == o.exec && inputs == o.inputs;
  }
};

/// Read-only view of the swarm used by vector.current / vector.best.
struct SwarmView {
  std::span<const Vector> current;
  std::span<const Vector> best;
  std::size_t self = 0;

  std::size_t size() const { return current.size(); }
};

inline constexpr std::size_t kDefaultExecutionLimit = 100;

/// Pushes the program onto the exec stack and runs until the exec stack is
/// empty or `limit` items have executed. Returns the number executed; the exec
/// stack is cleared afterwards and all other stacks persist.
std::size_t run_move(State& state, const Program& program, const SwarmView& swarm,
                     std::size_t limit = kDefaultExecutionLimit);

/// Executes one item against a fresh step budget (the item itself counts as
/// one step). Used by tests and fuzzing. Items the
/// instruction pushes onto the exec stack are left there.
void execute_item(State& state, const Item& item, const SwarmView& swarm = {},
                  std::size_t limit = kDefaultExecutionLimit);

}  // namespace pushopt
