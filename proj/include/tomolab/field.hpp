#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tomolab/errors.hpp"

namespace tomolab {

using cplx = std::complex<double>;

// Coordinate role of a grid axis. `eta` and `z` are the Fourier duals of X
// for optical and symplectic characteristic functions; `x`/`x_prime` index
// density matrices.
enum class AxisLabel : std::uint8_t { X = 0, theta, mu, nu, q, p, time, eta, z, x, x_prime };

std::string_view to_string(AxisLabel label);
AxisLabel axis_label_from_string(std::string_view name);

struct Axis {
  AxisLabel label = AxisLabel::X;
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;
  bool periodic = false;
  std::uint8_t mode = 0;

  double operator[](std::size_t i) const { return start + step * static_cast<double>(i); }
  double length() const { return step * static_cast<double>(count); }
  Eigen::VectorXd coords() const;

  // Throws DomainError when step <= 0, count < 4, or a periodic axis does not span 2*pi.
  void validate() const;

  // Samples [lo, hi) with n points.
  static Axis uniform(AxisLabel label, double lo, double hi, std::size_t n, std::uint8_t mode = 0);
  // Periodic angle axis on [0, 2*pi).
  static Axis angle(std::size_t n, std::uint8_t mode = 0);

  bool operator==(const Axis&) const = default;
};

bool same_axis(const Axis& a, const Axis& b, double tol = 1e-12);

using Metadata = std::map<std::string, std::string>;

// Dense sample array over the tensor grid spanned by `axes`, stored row-major
// (last axis fastest). Rank 0 holds a single value.
template <typename Scalar>
class GridField {
 public:
  using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  GridField() : values_(Values::Zero(1)) {}

  explicit GridField(std::vector<Axis> axes) : axes_(std::move(axes)) {
    init_strides();
    values_ = Values::Zero(static_cast<Eigen::Index>(total_));
  }

  GridField(std::vector<Axis> axes, Values values) : axes_(std::move(axes)), values_(std::move(values)) {
    init_strides();
    if (static_cast<std::size_t>(values_.size()) != total_)
      throw DomainError("GridField: value count does not match grid size");
  }

  // Evaluates fn(coords) at every node.
  template <typename Fn>
  static GridField sample(std::vector<Axis> axes, Fn&& fn) {
    GridField f(std::move(axes));
    std::vector<double> c(f.rank());
    std::vector<std::size_t> idx(f.rank(), 0);
    for (Eigen::Index n = 0; n < f.values_.size(); ++n) {
      for (std::size_t k = 0; k < f.rank(); ++k) c[k] = f.axes_[k][idx[k]];
      f.values_[n] = static_cast<Scalar>(fn(std::span<const double>(c)));
      f.advance(idx);
    }
    return f;
  }

  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(std::size_t k) const { return axes_.at(k); }
  std::size_t rank() const { return axes_.size(); }
  Eigen::Index size() const { return values_.size(); }
  std::size_t stride(std::size_t k) const { return strides_.at(k); }

  std::optional<std::size_t> find_axis(AxisLabel label, std::uint8_t mode = 0) const {
    for (std::size_t k = 0; k < axes_.size(); ++k)
      if (axes_[k].label == label && axes_[k].mode == mode) return k;
    return std::nullopt;
  }

  std::size_t axis_index(AxisLabel label, std::uint8_t mode = 0) const {
    if (auto k = find_axis(label, mode)) return *k;
    throw DomainError("field has no axis '" + std::string(to_string(label)) + "' for mode " +
                      std::to_string(mode));
  }

  const Values& values() const { return values_; }
  Values& mutable_values() { return values_; }

  Scalar operator[](Eigen::Index n) const { return values_[n]; }
  Scalar& operator[](Eigen::Index n) { return values_[n]; }

  Scalar at(std::initializer_list<std::size_t> idx) const { return values_[offset(idx)]; }

  Eigen::Index offset(std::initializer_list<std::size_t> idx) const {
    std::size_t off = 0, k = 0;
    for (std::size_t i : idx) off += i * strides_.at(k++);
    return static_cast<Eigen::Index>(off);
  }

  // Multi-index of flat offset n.
  std::vector<std::size_t> unravel(Eigen::Index n) const {
    std::vector<std::size_t> idx(rank());
    auto rem = static_cast<std::size_t>(n);
    for (std::size_t k = 0; k < rank(); ++k) {
      idx[k] = rem / strides_[k];
      rem %= strides_[k];
    }
    return idx;
  }

  // Grid coordinate of node n along every axis.
  std::vector<double> coords_of(Eigen::Index n) const {
    auto idx = unravel(n);
    std::vector<double> c(rank());
    for (std::size_t k = 0; k < rank(); ++k) c[k] = axes_[k][idx[k]];
    return c;
  }

  double cell_volume() const {
    double v = 1.0;
    for (const auto& a : axes_) v *= a.step;
    return v;
  }

  const Metadata& metadata() const { return meta_; }
  Metadata& metadata() { return meta_; }

  bool same_grid(const GridField& o, double tol = 1e-12) const {
    if (rank() != o.rank()) return false;
    for (std::size_t k = 0; k < rank(); ++k)
      if (!same_axis(axes_[k], o.axes_[k], tol)) return false;
    return true;
  }

  GridField with_values(Values v) const {
    GridField f(axes_, std::move(v));
    f.meta_ = meta_;
    return f;
  }

  GridField& operator+=(const GridField& o) {
    require_same(o);
    values_ += o.values_;
    return *this;
  }
  GridField& operator-=(const GridField& o) {
    require_same(o);
    values_ -= o.values_;
    return *this;
  }
  GridField& operator*=(Scalar s) {
    values_ *= s;
    return *this;
  }

  friend GridField operator+(GridField a, const GridField& b) { return a += b; }
  friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
  friend GridField operator*(Scalar s, GridField a) { return a *= s; }
  friend GridField operator*(GridField a, Scalar s) { return a *= s; }
  friend GridField operator-(GridField a) {
    a.values_ = -a.values_;
    return a;
  }

 private:
  void init_strides() {
    for (const auto& a : axes_) a.validate();
    strides_.assign(axes_.size(), 1);
    total_ = 1;
    for (std::size_t k = axes_.size(); k-- > 0;) {
      strides_[k] = total_;
      total_ *= axes_[k].count;
    }
  }

  void advance(std::vector<std::size_t>& idx) const {
    for (std::size_t k = idx.size(); k-- > 0;) {
      if (++idx[k] < axes_[k].count) return;
      idx[k] = 0;
    }
  }

  void require_same(const GridField& o) const {
    if (!same_grid(o)) throw DomainError("field grids differ");
  }

  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
  Values values_;
  Metadata meta_;
};

using Field = GridField<cplx>;
using RealField = GridField<double>;

// Tags used across modules.
inline constexpr const char* kProbabilityTag = "probability";

inline bool is_probability(const Field& f) {
  auto it = f.metadata().find(kProbabilityTag);
  return it != f.metadata().end() && it->second == "true";
}
inline void tag_probability(Field& f) { f.metadata()[kProbabilityTag] = "true"; }

double sup_norm(const Field& f);
// sqrt(sum |f|^2 * cell volume).
double l2_norm(const Field& f);
double sup_diff(const Field& a, const Field& b);
double l2_diff(const Field& a, const Field& b);
double max_imag(const Field& f);
Field real_part(const Field& f);

}  // namespace tomolab
