#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace shadowbench {

/// Counter-based random stream. Every output is a pure function of
/// (master_seed, label, counter), so any trial can be reproduced in isolation
/// and the schedule of a parallel run cannot change the numbers drawn.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::string label);

  /// Child stream with an extended label; independent of the parent's counter.
  RngStream derive(std::string_view child) const;
  RngStream derive(std::uint64_t index) const;

  std::uint64_t master_seed() const { return master_; }
  const std::string& label() const { return label_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  double next_unit();         // [0, 1), 53-bit resolution
  double next_normal();       // standard normal (Box-Muller, cached spare)
  double next_uniform_pm1();  // [-1, 1]
  int next_sign();            // -1 or +1, fair
  bool next_bit();

 private:
  std::uint64_t master_ = 0;
  std::string label_;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace shadowbench
