#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <optional>
#include <string>

#include "rise/error.hpp"

namespace rise {

enum class KneeShape { ConvexIncreasing, ConcaveIncreasing };

namespace detail {

template <typename Derived>
void require_monotone(const Eigen::DenseBase<Derived>& v, bool strict, const char* what) {
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const bool ok = strict ? v(i) > v(i - 1) : v(i) >= v(i - 1);
    if (!ok) throw Error(ErrorCode::NonMonotonicInput, std::string(what) + " is not monotone");
  }
}

// Interior index i is a local maximum when the sequence rises into it and the
// plateau starting at i (possibly of length one) is followed by a fall.
template <typename Scalar>
bool is_local_max(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& d, Eigen::Index i) {
  const Eigen::Index n = d.size();
  if (i <= 0 || i >= n - 1 || !(d(i) > d(i - 1))) return false;
  Eigen::Index j = i + 1;
  while (j < n && d(j) == d(i)) ++j;
  return j < n && d(j) < d(i);
}

}  // namespace detail

/// Kneedle knee detection on an increasing curve.
///
/// Both axes are min-max normalized. A convex curve is rotated by 180 degrees
/// (x -> 1 - x, y -> 1 - y, order reversed) so that both shapes reduce to the
/// concave case, where the knee is a local maximum of the difference curve
/// y_n - x_n. A local maximum is accepted once the difference curve falls
/// below `height - sensitivity * mean(dx_n)` before the next local maximum.
/// Returns the knee index into the caller's arrays, or nullopt.
template <typename DerivedX, typename DerivedY>
std::optional<Eigen::Index> kneedle(const Eigen::DenseBase<DerivedX>& x,
                                    const Eigen::DenseBase<DerivedY>& y, KneeShape shape,
                                    double sensitivity) {
  using Scalar = typename DerivedY::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  const Eigen::Index n = x.size();
  if (y.size() != n) throw Error(ErrorCode::DomainError, "kneedle: x and y differ in length");
  if (n < 3) throw Error(ErrorCode::TooFewPoints, "kneedle needs at least 3 points");
  if (!(sensitivity > 0)) throw Error(ErrorCode::DomainError, "kneedle: sensitivity must be > 0");
  detail::require_monotone(x, true, "kneedle x");
  detail::require_monotone(y, false, "kneedle y");

  const Scalar y_lo = y(0);
  const Scalar y_span = y(n - 1) - y_lo;
  if (!(y_span > 0)) return std::nullopt;
  const Scalar x_lo = x(0);
  const Scalar x_span = x(n - 1) - x_lo;

  const Vector xn = (x.derived().template cast<Scalar>().array() - x_lo) / x_span;
  const Vector yn = (y.derived().array() - y_lo) / y_span;

  Vector xs = xn;
  Vector ys = yn;
  const bool convex = shape == KneeShape::ConvexIncreasing;
  if (convex) {
    xs = (Scalar(1) - xn.reverse().array()).matrix();
    ys = (Scalar(1) - yn.reverse().array()).matrix();
  }
  const Vector diff = ys - xs;
  const Scalar mean_dx = (xs(n - 1) - xs(0)) / static_cast<Scalar>(n - 1);

  std::optional<Eigen::Index> candidate;
  Scalar threshold = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (detail::is_local_max(diff, i)) {
      candidate = i;
      threshold = diff(i) - static_cast<Scalar>(sensitivity) * mean_dx;
      continue;
    }
    if (candidate && diff(i) < threshold) {
      return convex ? n - 1 - *candidate : *candidate;
    }
  }
  return std::nullopt;
}

/// Centered moving average with the window truncated at both ends. Preserves
/// monotonicity of the input.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> moving_average(
    const Eigen::DenseBase<Derived>& y, int width) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = y.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> prefix(n + 1);
  prefix(0) = Scalar(0);
  for (Eigen::Index i = 0; i < n; ++i) prefix(i + 1) = prefix(i) + y.derived()(i);

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n);
  const Eigen::Index half = std::max(0, width / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, i - half);
    const Eigen::Index hi = std::min<Eigen::Index>(n - 1, i + half);
    out(i) = (prefix(hi + 1) - prefix(lo)) / static_cast<Scalar>(hi - lo + 1);
  }
  return out;
}

}  // namespace rise
