#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "varband/numerics.hpp"

namespace varband {

// Strictly increasing abscissae with optional sample values.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(std::vector<double> points);
  SampleSet(std::vector<double> points, std::vector<cplx> values);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<double>& points() const { return points_; }
  double operator[](std::size_t i) const { return points_[i]; }
  bool has_values() const { return values_.has_value(); }
  const std::vector<cplx>& values() const;

  // Points of the set lying in [a, b].
  SampleSet restricted(double a, double b) const;

 private:
  std::vector<double> points_;
  std::optional<std::vector<cplx>> values_;
};

}  // namespace varband
