#pragma once

// Internal helpers for operating on 1-D lines of a GridField.

#define EIGEN_FFTW_DEFAULT
#include <fftw3.h>

#include <mutex>
#include <unsupported/Eigen/FFT>

#include "tomolab/field.hpp"

namespace tomolab::detail {

// FFTW plans are created lazily per thread, so the planner must be made thread safe first.
inline Eigen::FFT<double>& fft_engine() {
  static std::once_flag once;
  std::call_once(once, [] { fftw_make_planner_thread_safe(); });
  thread_local Eigen::FFT<double> engine;
  return engine;
}

// Applies fn(line) to every line along `axis`; fn may resize nothing, only modify values.
template <typename Fn>
Field map_lines(const Field& f, std::size_t axis, Fn&& fn) {
  Field out(f.axes());
  out.metadata() = f.metadata();
  const std::size_t n = f.axis(axis).count;
  const std::size_t inner = f.stride(axis);
  const std::size_t outer = static_cast<std::size_t>(f.size()) / (n * inner);
  Eigen::VectorXcd line(static_cast<Eigen::Index>(n));
  const auto& in = f.values();
  auto& res = out.mutable_values();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * n * inner + i;
      for (std::size_t j = 0; j < n; ++j) line[static_cast<Eigen::Index>(j)] = in[static_cast<Eigen::Index>(base + j * inner)];
      fn(line, o, i);
      for (std::size_t j = 0; j < n; ++j) res[static_cast<Eigen::Index>(base + j * inner)] = line[static_cast<Eigen::Index>(j)];
    }
  }
  return out;
}

// Multiplies every line's spectrum by `mult` (FFT order).
inline Field apply_multiplier(const Field& f, std::size_t axis, const Eigen::VectorXcd& mult) {
  auto& engine = fft_engine();
  Eigen::VectorXcd spec;
  return map_lines(f, axis, [&](Eigen::VectorXcd& line, std::size_t, std::size_t) {
    engine.fwd(spec, line);
    spec.array() *= mult.array();
    engine.inv(line, spec);
  });
}

}  // namespace tomolab::detail

namespace tomolab::detail {

// Collapses every line along `axis` to fn(line); the result drops that axis.
template <typename Fn>
Field reduce_lines(const Field& f, std::size_t axis, Fn&& fn) {
  std::vector<Axis> rest;
  for (std::size_t k = 0; k < f.rank(); ++k)
    if (k != axis) rest.push_back(f.axis(k));
  Field out(rest);
  out.metadata() = f.metadata();
  const std::size_t n = f.axis(axis).count;
  const std::size_t inner = f.stride(axis);
  const std::size_t outer = static_cast<std::size_t>(f.size()) / (n * inner);
  Eigen::VectorXcd line(static_cast<Eigen::Index>(n));
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * n * inner + i;
      for (std::size_t j = 0; j < n; ++j) line[static_cast<Eigen::Index>(j)] = f[static_cast<Eigen::Index>(base + j * inner)];
      out[static_cast<Eigen::Index>(o * inner + i)] = fn(line);
    }
  return out;
}

}  // namespace tomolab::detail
