#pragma once

#include <cstdint>
#include <vector>

#include "sparsedom/grid.hpp"
#include "sparsedom/io.hpp"

namespace sdtest {

using namespace sparsedom;

inline GridFunction fn(std::vector<double> v) {
  int depth = 0;
  while ((std::size_t{1} << depth) < v.size()) ++depth;
  return GridFunction(build_grid(depth), std::move(v));
}

inline GridFunction rnd(int depth, std::uint64_t seed) {
  return generate_function(seed % 2 ? "random-heavy" : "random-signed", depth, seed);
}

inline std::vector<double> vals(const GridFunction& f) { return f.values; }

}  // namespace sdtest
