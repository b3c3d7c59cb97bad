#include "qfc/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qfc {

ComplexField::ComplexField(TimeGrid grid)
    : grid_(grid), samples_(VectorXcd::Zero(static_cast<Eigen::Index>(grid.n_time))) {}

ComplexField::ComplexField(TimeGrid grid, VectorXcd samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (static_cast<std::size_t>(samples_.size()) != grid_.n_time)
    throw std::invalid_argument("ComplexField: " + std::to_string(samples_.size()) +
                                " samples for a grid of " + std::to_string(grid_.n_time));
}

double ComplexField::norm() const {
  return std::sqrt(samples_.squaredNorm() * grid_.dt_ps());
}

ComplexField ComplexField::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize an all-zero field");
  return ComplexField(grid_, samples_ / n);
}

ComplexField ComplexField::scaled(cplx factor) const {
  return ComplexField(grid_, samples_ * factor);
}

cplx inner_product(const ComplexField& u, const ComplexField& v) {
  if (!(u.grid() == v.grid())) throw std::invalid_argument("inner_product: grid mismatch");
  return u.samples().dot(v.samples()) * u.grid().dt_ps();
}

ComplexField operator+(const ComplexField& u, const ComplexField& v) {
  if (!(u.grid() == v.grid())) throw std::invalid_argument("field sum: grid mismatch");
  return ComplexField(u.grid(), u.samples() + v.samples());
}

}  // namespace qfc
