#pragma once

// Strictly convex / concave increasing test curves on x in [0, 1].

#include <cmath>
#include <random>
#include <vector>

#include "rise/kneedle.hpp"

namespace rise::testing {

struct TestCurve {
  std::vector<double> x;
  std::vector<double> y;
  KneeShape shape;
};

// Family k cycles through power, exponential and logarithmic shapes; `bend`
// controls curvature.
inline TestCurve make_curve(int family, int n, double bend) {
  TestCurve c;
  c.shape = family % 2 == 0 ? KneeShape::ConvexIncreasing : KneeShape::ConcaveIncreasing;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / (n - 1);
    double y = 0.0;
    switch (family % 6) {
      case 0: y = std::pow(x, bend); break;                       // convex power
      case 1: y = 1.0 - std::pow(1.0 - x, bend); break;           // concave power
      case 2: y = std::exp(bend * x) - 1.0; break;                // convex exp
      case 3: y = 1.0 - std::exp(-bend * x); break;               // concave exp
      case 4: y = 1.0 / (1.0 + bend) / (1.0 - x / (1.0 + 1.0 / bend)); break;  // convex hyperbola
      case 5: y = std::log1p(bend * x); break;                    // concave log
    }
    c.x.push_back(x);
    c.y.push_back(y);
  }
  return c;
}

inline std::vector<TestCurve> oracle_curves(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size(50, 500);
  std::uniform_real_distribution<double> bend(2.0, 8.0);
  std::vector<TestCurve> out;
  for (int k = 0; k < count; ++k) out.push_back(make_curve(k, size(rng), bend(rng)));
  return out;
}

inline Eigen::Map<const Eigen::VectorXd> as_vector(const std::vector<double>& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

}  // namespace rise::testing
