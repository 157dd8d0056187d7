// Known-good reference values consulted by --check and the report suite.
//
// Everything here is data, versioned with the repo; checking logic never
// hard-codes these numbers elsewhere.
#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "gst/quadratic.hpp"

namespace gst {
namespace reference {

struct PolyTerm {
    int i = 0, j = 0;  // 1-based variable indices, i <= j
    Rational coefficient;
};

// Display-scale constant for the restricted form (8, 64, 256, 1024 for
// n = 4..7). Absent for other n.
std::optional<Rational> restricted_scale(int n);

// Coefficients of scale * R as a polynomial, for n = 4..7.
std::optional<std::vector<PolyTerm>> restricted_polynomial(int n);

// Expected perfect-square result for n = 4..7 (engaged for 4 and 5).
std::optional<std::optional<PerfectSquare>> perfect_square(int n);

// Expected lifted kernel dimension for n = 4..7 (1, 2, 1, 2).
std::optional<int> collision_dim(int n);

// Printed collision-basis vectors for n = 5 and 7, with comparison tolerance.
std::optional<Eigen::VectorXd> reference_b2(int n);
inline constexpr double kB2Tolerance = 1e-4;

// Signature table (positive, zero, negative) for n = 3..7.
std::optional<ExactInertia> inertia(int n);

// Expected stable component counts for n = 3..10.
std::optional<int> component_count(int n);

}  // namespace reference
}  // namespace gst
