// Exact construction and analysis of the independence quadratic form.
//
// Q_n is the symmetric matrix with x^T Q_n x equal to the independence
// residual's negation; its zero set characterizes conditional independence.
// The restriction to the palindromic subspace (x_i = x_{n-i+1}) yields the
// small forms whose negative-semidefiniteness drives the component
// arguments. All operations are exact.
#pragma once

#include <optional>
#include <vector>

#include "gst/rational.hpp"

namespace gst {

struct QuadraticForm {
    int n = 0;
    RatMat Q;  // n x n, symmetric, Q * (1,..,1)^T == 0
};

struct RestrictedForm {
    int n = 0;      // original dimension
    int m = 0;      // ceil(n/2) free coordinates after x_i = x_{n-i+1}
    RatMat R;       // m x m, symmetric, negative semidefinite
    Rational scale; // display constant: scale*R matches the reference polynomial
};

struct ExactInertia {
    int positive = 0;
    int zero = 0;
    int negative = 0;

    bool operator==(const ExactInertia&) const = default;
};

struct PerfectSquare {
    Rational coefficient;  // c > 0 with scale*R == -c (x_a - x_b)^2
    int a = 0, b = 0;      // 1-based variable indices, a < b
};

// Builds Q_n = l l^T - B where l is the binomial linear functional and B the
// symmetrized coefficient matrix of the diagonal/cross sum. Throws InvalidN
// for n < 3.
QuadraticForm build_form(int n);

// x^T Q x. Throws DimensionMismatch.
Rational eval_psi(const QuadraticForm& q, const RatVec& x);

// Independent term-by-term evaluation kept as the second code path for
// cross-validation against eval_psi.
Rational eval_psi_direct(int n, const RatVec& x);

// Substitutes x_{n-i+1} := x_i, producing the m-variable form.
RestrictedForm restrict_to_symmetric(const QuadraticForm& q);

// Mirrors an m-vector back to n coordinates (x_i = v_i for i <= m, else
// x_i = v_{n-i+1}).
RatVec lift_symmetric(int n, const RatVec& v);

// Signature counts by exact symmetric decomposition with pivoting: diagonal
// pivots where available, otherwise a 2x2 exchange block [[0,a],[a,0]] whose
// determinant -a^2 < 0 contributes one positive and one negative count.
ExactInertia exact_inertia(const RatMat& m);

// Reduced-echelon kernel basis, leftmost pivot order; basis vectors are
// scaled to coprime integer entries with positive leading coefficient and
// ordered by free column.
std::vector<RatVec> kernel_basis(const RatMat& m);

// Tests whether scale*R equals -c (x_a - x_b)^2 exactly for some c > 0.
std::optional<PerfectSquare> perfect_square_check(const RestrictedForm& r);

}  // namespace gst
