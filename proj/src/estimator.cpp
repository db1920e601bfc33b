#include "fairbandit/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace fairbandit {

DesignState::DesignState(int dim, double regularizer)
    : dim_(dim), gamma_(regularizer) {
  if (dim < 1) throw std::invalid_argument("DesignState: dim must be >= 1");
  if (!(regularizer >= 1.0))
    throw std::invalid_argument("DesignState: regularizer must be >= 1");
  gram_ = Matrix::Identity(dim, dim) * gamma_;
  moment_ = Vector::Zero(dim);
}

void DesignState::update(const Vector& x, double y, NormPolicy policy) {
  if (x.size() != dim_)
    throw std::invalid_argument("DesignState::update: context dimension mismatch");
  double norm = x.norm();
  Vector effective = x;
  switch (policy) {
    case NormPolicy::strict:
      if (norm > 1.0 + 1e-9)
        throw std::invalid_argument("DesignState::update: context norm exceeds 1");
      break;
    case NormPolicy::clip:
      if (norm > 1.0) effective /= norm;
      break;
    case NormPolicy::none:
      break;
  }
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(effective);
  gram_ = gram_.selfadjointView<Eigen::Lower>();
  moment_ += y * effective;
  ++count_;
}

Vector DesignState::estimate() const {
  return gram_.llt().solve(moment_);
}

double DesignState::confidence_width(const Vector& x, double delta,
                                     double noise_scale) const {
  if (x.size() != dim_)
    throw std::invalid_argument("DesignState::confidence_width: dimension mismatch");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("DesignState::confidence_width: delta must be in (0, 1]");
  double quad = x.dot(gram_.llt().solve(x));
  // Tiny negative values can appear for x ~ 0; the true quadratic form is
  // nonnegative.
  double shape_norm = std::sqrt(std::max(0.0, quad));
  double log_term = std::log((1.0 + static_cast<double>(count_) / gamma_) / delta);
  double radius = noise_scale * std::sqrt(2.0 * dim_ * log_term) + std::sqrt(gamma_);
  return shape_norm * radius;
}

ConfidenceInterval DesignState::interval(const Vector& x, double delta,
                                         double noise_scale) const {
  return {estimate().dot(x), confidence_width(x, delta, noise_scale)};
}

IncrementalInverse::IncrementalInverse(int dim, double regularizer) {
  if (dim < 1) throw std::invalid_argument("IncrementalInverse: dim must be >= 1");
  if (!(regularizer > 0.0))
    throw std::invalid_argument("IncrementalInverse: regularizer must be positive");
  inverse_ = Matrix::Identity(dim, dim) / regularizer;
}

void IncrementalInverse::update(const Vector& x) {
  if (x.size() != inverse_.rows())
    throw std::invalid_argument("IncrementalInverse::update: dimension mismatch");
  Vector mx = inverse_ * x;
  inverse_ -= mx * mx.transpose() / (1.0 + x.dot(mx));
}

double IncrementalInverse::quad_form(const Vector& x) const {
  return x.dot(inverse_ * x);
}

}  // namespace fairbandit
