#ifndef INDUCTIVE_STREAM_HPP
#define INDUCTIVE_STREAM_HPP

#include <cstdint>
#include <vector>

#include "analogy.hpp"
#include "core.hpp"
#include "random.hpp"

namespace inductive {

/// i.i.d. types, then an i.i.d. outcome drawn from the frequency vector of that type.
struct StreamConfig {
  TypeProcess types;
  std::vector<SimplexVector> frequencies;  // one per type

  std::size_t type_count() const { return types.type_count(); }
  std::size_t outcome_count() const { return frequencies.empty() ? 0 : frequencies.front().size(); }

  void validate() const {
    detail::require(frequencies.size() == types.type_count(), "StreamConfig: one frequency vector per type");
    for (const auto& f : frequencies) {
      detail::require(f.size() == frequencies.front().size(), "StreamConfig: frequency vectors differ in length");
      detail::require(f.size() >= 2, "StreamConfig: need at least two outcomes");
    }
  }
};

class IidStream {
 public:
  IidStream(StreamConfig config, std::uint64_t seed) : config_(std::move(config)), rng_(seed, 0x73747265616dULL) {
    config_.validate();
  }

  struct Step {
    TypeIndex type;
    Outcome outcome;
  };

  /// Draws the next type. Split from outcome() so predictions can be made in between.
  TypeIndex next_type() { return rng_.categorical(config_.types.probabilities()); }
  Outcome outcome(TypeIndex type) { return rng_.categorical(config_.frequencies.at(type).values()); }

  Step next() {
    const TypeIndex t = next_type();
    return {t, outcome(t)};
  }

  const StreamConfig& config() const noexcept { return config_; }

 private:
  StreamConfig config_;
  Rng rng_;
};

}  // namespace inductive

#endif  // INDUCTIVE_STREAM_HPP
