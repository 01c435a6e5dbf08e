#include "varband/sample_set.hpp"

#include <cmath>

#include "varband/error.hpp"

namespace varband {

namespace {
void check_increasing(const std::vector<double>& x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw InvalidArgument("SampleSet: non-finite point");
    if (i > 0 && !(x[i] > x[i - 1]))
      throw InvalidArgument("SampleSet: points must be strictly increasing");
  }
}
}  // namespace

SampleSet::SampleSet(std::vector<double> points) : points_(std::move(points)) {
  check_increasing(points_);
}

SampleSet::SampleSet(std::vector<double> points, std::vector<cplx> values)
    : points_(std::move(points)), values_(std::move(values)) {
  check_increasing(points_);
  if (values_->size() != points_.size())
    throw InvalidArgument("SampleSet: value count differs from point count");
}

const std::vector<cplx>& SampleSet::values() const {
  if (!values_) throw InvalidArgument("SampleSet: no sample values attached");
  return *values_;
}

SampleSet SampleSet::restricted(double a, double b) const {
  std::vector<double> p;
  std::vector<cplx> v;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] >= a && points_[i] <= b) {
      p.push_back(points_[i]);
      if (values_) v.push_back((*values_)[i]);
    }
  }
  if (values_) return SampleSet(std::move(p), std::move(v));
  return SampleSet(std::move(p));
}

}  // namespace varband
