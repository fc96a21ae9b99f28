#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

namespace sparsedom {

// Level value used by stopping times for "never stops".
inline constexpr int kInfLevel = std::numeric_limits<int>::max();

// Exact ratio num/den. Threshold tests are done as cross products so that
// dyadic masses compare without rounding.
struct Ratio {
  std::int64_t num = 1;
  std::int64_t den = 2;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  // part <= (num/den) * whole
  bool admits(double part, double whole) const {
    return part * static_cast<double>(den) <= whole * static_cast<double>(num);
  }
  Ratio times(std::int64_t k) const { return Ratio{num * k, den}; }
  bool valid_probability() const { return num > 0 && den > 0 && num < den; }
};

struct Cube {
  int level = 0;
  std::int64_t index = 0;

  Cube parent() const { return Cube{level - 1, index >> 1}; }
  Cube child(int side) const { return Cube{level + 1, 2 * index + side}; }
  bool contains(const Cube& other) const {
    return other.level >= level && (other.index >> (other.level - level)) == index;
  }
  double left() const { return static_cast<double>(index) / static_cast<double>(std::int64_t{1} << level); }
  double length() const { return 1.0 / static_cast<double>(std::int64_t{1} << level); }
  auto operator<=>(const Cube&) const = default;
};

class DyadicGrid {
 public:
  explicit DyadicGrid(int depth);
  DyadicGrid(int depth, std::vector<double> leaf_measure);

  int depth() const { return depth_; }
  std::size_t leaf_count() const { return std::size_t{1} << depth_; }
  bool uniform() const { return uniform_; }

  double leaf_measure(std::size_t leaf) const { return level_mass_[depth_][leaf]; }
  const std::vector<double>& leaf_measures() const { return level_mass_[depth_]; }
  const std::vector<double>& level_measures(int k) const { return level_mass_.at(k); }
  double measure(const Cube& q) const { return level_mass_.at(q.level).at(q.index); }
  double total_mass() const { return level_mass_[0][0]; }

  double regularity() const { return regularity_; }
  Cube regularity_witness() const { return regularity_witness_; }

  std::size_t leaf_begin(const Cube& q) const { return static_cast<std::size_t>(q.index) << (depth_ - q.level); }
  std::size_t leaf_end(const Cube& q) const { return static_cast<std::size_t>(q.index + 1) << (depth_ - q.level); }
  std::int64_t ancestor(std::size_t leaf, int k) const { return static_cast<std::int64_t>(leaf >> (depth_ - k)); }
  std::size_t cubes_at(int k) const { return std::size_t{1} << k; }

 private:
  void precompute();

  int depth_;
  bool uniform_;
  std::vector<std::vector<double>> level_mass_;
  double regularity_ = 0.0;
  Cube regularity_witness_{};
};

using GridPtr = std::shared_ptr<const DyadicGrid>;

GridPtr build_grid(int depth, std::optional<std::vector<double>> leaf_measure = std::nullopt);

struct GridFunction {
  GridPtr grid;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(GridPtr g, std::vector<double> v);
  static GridFunction zeros(GridPtr g);
  static GridFunction constant(GridPtr g, double c);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double integral() const;
  double sup_abs() const;
  double lp_norm_pow(double p) const;  // int |f|^p
  GridFunction abs() const;
};

struct StoppingTime {
  GridPtr grid;
  std::vector<int> level;  // kInfLevel where the time never stops

  static StoppingTime constant(GridPtr g, int k);
  bool adapted() const;
  // First leaf violating adaptedness, if any.
  std::optional<std::size_t> adaptedness_violation() const;
};

void require_same_grid(const GridPtr& a, const GridPtr& b);

}  // namespace sparsedom
