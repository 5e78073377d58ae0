#include "coflow/generator.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace coflow {

namespace {

// Uniform integer in [lo, hi]; modulo reduction keeps the sequence
// independent of the standard library's distribution implementation.
std::int64_t draw(std::mt19937_64& gen, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(gen() % span);
}

}  // namespace

Instance generate_instance(const GeneratorOptions& o) {
  if (o.left < 1 || o.right < 1 || o.coflows < 1 || o.max_mult < 1 || o.max_flows < 1 || o.release_max < 0) {
    throw std::invalid_argument("generator sizes must be positive");
  }
  std::mt19937_64 gen(o.seed);
  std::vector<Coflow> coflows(o.coflows);
  for (Coflow& c : coflows) {
    c.weight = from_int(draw(gen, 1, 10));
    c.release = o.release_max > 0 ? draw(gen, 0, o.release_max) : 0;
    const std::int64_t n = draw(gen, 1, static_cast<std::int64_t>(o.max_flows));
    for (std::int64_t k = 0; k < n; ++k) {
      const int u = static_cast<int>(draw(gen, 0, o.left - 1));
      const int v = static_cast<int>(draw(gen, 0, o.right - 1));
      const std::int64_t mult = draw(gen, 1, o.max_mult);
      const bool seen = std::any_of(c.flows.begin(), c.flows.end(), [&](const Flow& f) { return f.u == u && f.v == v; });
      if (!seen) c.flows.push_back(Flow{u, v, mult});
    }
  }
  return Instance(o.left, o.right, std::move(coflows));
}

}  // namespace coflow
