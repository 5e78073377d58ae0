#pragma once

#include <cstddef>
#include <cstdint>

#include "coflow/model.hpp"

namespace coflow {

/// Each coflow gets 1..max_flows flows on uniformly drawn vertex pairs
/// (repeated pairs are skipped), multiplicities 1..max_mult, an integer
/// weight 1..10 and a release 0..release_max. The draw sequence is fixed by
/// the seed.
struct GeneratorOptions {
  std::uint64_t seed = 1;
  int left = 3;
  int right = 3;
  std::size_t coflows = 3;
  std::int64_t max_mult = 1;
  std::size_t max_flows = 3;
  std::int64_t release_max = 0;
};

/// Throws std::invalid_argument for non-positive sizes.
Instance generate_instance(const GeneratorOptions& options);

}  // namespace coflow
