#pragma once

#include <optional>
#include <random>
#include <vector>

#include "sparsedom/grid.hpp"

namespace sparsedom {

// sigma_k is stored per level-(k-1) cube; sigma_0 has a single entry.
struct PredictableSigns {
  GridPtr grid;
  std::vector<std::vector<double>> values;  // values[k].size() == 2^max(k-1,0)
  double bound = 1.0;

  static PredictableSigns constant(GridPtr g, double c);
  static PredictableSigns per_level(GridPtr g, const std::vector<double>& by_level);
  static PredictableSigns rademacher(GridPtr g, std::uint64_t seed);

  double at(int k, std::size_t leaf) const;
  double sup_abs() const;
  void validate() const;
};

GridFunction martingale_transform(const GridFunction& f, const PredictableSigns& sigma,
                                  const std::optional<StoppingTime>& nu = std::nullopt);
GridFunction transform_max_trunc(const GridFunction& f, const PredictableSigns& sigma,
                                 const std::optional<StoppingTime>& nu = std::nullopt);
GridFunction square_function(const GridFunction& f, const std::optional<StoppingTime>& nu = std::nullopt);

}  // namespace sparsedom
