#pragma once

#include <vector>

#include "coflow/model.hpp"

namespace coflow::test {

inline Coflow unit_coflow(std::vector<std::pair<int, int>> edges, Rational weight = 1, std::int64_t release = 0) {
  Coflow c;
  c.weight = weight;
  c.release = release;
  for (auto [u, v] : edges) c.flows.push_back(Flow{u, v, 1});
  return c;
}

inline Coflow flow_coflow(std::vector<Flow> flows, Rational weight = 1, std::int64_t release = 0) {
  Coflow c;
  c.weight = weight;
  c.release = release;
  c.flows = std::move(flows);
  return c;
}

}  // namespace coflow::test
