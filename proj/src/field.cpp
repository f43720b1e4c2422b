#include "tomolab/field.hpp"

#include <cmath>
#include <numbers>

namespace tomolab {

namespace {
constexpr std::string_view kLabelNames[] = {"X", "theta", "mu", "nu", "q", "p", "time", "eta", "z", "x", "x_prime"};
}

std::string_view to_string(AxisLabel label) { return kLabelNames[static_cast<std::size_t>(label)]; }

AxisLabel axis_label_from_string(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kLabelNames); ++i)
    if (kLabelNames[i] == name) return static_cast<AxisLabel>(i);
  throw DomainError("unknown axis label '" + std::string(name) + "'");
}

Eigen::VectorXd Axis::coords() const {
  Eigen::VectorXd c(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) c[static_cast<Eigen::Index>(i)] = (*this)[i];
  return c;
}

void Axis::validate() const {
  if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start))
    throw DomainError("axis '" + std::string(to_string(label)) + "': step must be positive and finite");
  if (count < 4) throw DomainError("axis '" + std::string(to_string(label)) + "': count must be >= 4");
  if (periodic && std::abs(length() - 2.0 * std::numbers::pi) > 1e-9)
    throw DomainError("periodic axis '" + std::string(to_string(label)) + "' must span exactly 2*pi");
}

Axis Axis::uniform(AxisLabel label, double lo, double hi, std::size_t n, std::uint8_t mode) {
  Axis a{label, lo, (hi - lo) / static_cast<double>(n), n, false, mode};
  a.validate();
  return a;
}

Axis Axis::angle(std::size_t n, std::uint8_t mode) {
  Axis a{AxisLabel::theta, 0.0, 2.0 * std::numbers::pi / static_cast<double>(n), n, true, mode};
  a.validate();
  return a;
}

bool same_axis(const Axis& a, const Axis& b, double tol) {
  return a.label == b.label && a.mode == b.mode && a.count == b.count && a.periodic == b.periodic &&
         std::abs(a.start - b.start) <= tol * (1.0 + std::abs(a.start)) &&
         std::abs(a.step - b.step) <= tol * a.step;
}

double sup_norm(const Field& f) { return f.values().cwiseAbs().maxCoeff(); }

double l2_norm(const Field& f) { return std::sqrt(f.values().squaredNorm() * f.cell_volume()); }

double sup_diff(const Field& a, const Field& b) {
  if (!a.same_grid(b)) throw DomainError("sup_diff: field grids differ");
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

double l2_diff(const Field& a, const Field& b) {
  if (!a.same_grid(b)) throw DomainError("l2_diff: field grids differ");
  return std::sqrt((a.values() - b.values()).squaredNorm() * a.cell_volume());
}

double max_imag(const Field& f) { return f.values().imag().cwiseAbs().maxCoeff(); }

Field real_part(const Field& f) {
  Field::Values v = f.values().real().cast<cplx>();
  return f.with_values(std::move(v));
}

}  // namespace tomolab
