// Floating-point eigenstructure of Q_n and the image of the collision space.
//
// The Spectrum carries the canonical orthogonal change of basis P: the zero
// eigenvalue's column first (so y_1 is the free slice coordinate), then
// positive eigenvalues descending, then negative eigenvalues descending.
// Eigenvector signs are fixed so the last component above tolerance is
// positive, which reproduces the reference collision-basis vectors.
#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "gst/quadratic.hpp"

namespace gst {

struct Spectrum {
    int n = 0;
    Eigen::VectorXd eigenvalues;  // canonical order, see above
    Eigen::MatrixXd P;            // column j is the unit eigenvector of eigenvalues[j]
    Eigen::MatrixXd Q;            // the form in double precision, for evaluation
    int positive = 0, zero = 0, negative = 0;
    double zero_tol = 0.0;  // relative threshold used for classification

    // Column indices of the positive / negative eigenvalue blocks.
    std::vector<int> positive_indices() const;
    std::vector<int> negative_indices() const;

    double psi(const Eigen::VectorXd& x) const { return x.dot(Q * x); }
};

struct SliceType {
    int n = 0;
    int p = 0, q = 0;  // positive / negative counts
    // "I x S^{p-1} x S^{q-1}"
    std::string description() const;
};

struct CollisionSpace {
    int n = 0;
    int dim = 0;                           // 1 or 2
    std::vector<RatVec> x_basis;           // exact lifted kernel of the restricted form
    std::vector<Eigen::VectorXd> y_basis;  // b1 = e1, plus b2 when dim == 2
    std::optional<Eigen::VectorXd> b2() const;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
// 1e-13 * ||Q||_F; at most 50 sweeps (NoConvergence past that, which cannot
// happen for a symmetric input but is guarded). zero_tol classifies
// eigenvalues relative to the largest magnitude.
Spectrum eigendecompose(const QuadraticForm& q, double zero_tol = 1e-10);

// Requires a one-dimensional kernel (UnexpectedKernelDim otherwise).
SliceType slice_type(const Spectrum& s);

// Maps the exact collision-space basis into y-space. For dim 2 the second
// basis vector is built from the alternating-support kernel vector minus its
// projection onto the all-ones direction, then mapped by P^T; its first
// coordinate is 0 by construction.
CollisionSpace collision_space(const Spectrum& s, const std::vector<RatVec>& lifted_kernel);

// Componentwise comparison up to a single global sign. If eigenvalues are
// degenerate within degen_tol (relative), falls back to comparing projection
// norms per eigenvalue group instead of components.
bool matches_reference_b2(const Spectrum& s, const Eigen::VectorXd& computed,
                          const Eigen::VectorXd& reference, double tol = 1e-4,
                          double degen_tol = 1e-8);

// c = +sqrt(t / Σ_{i in positive block} λ_i b2_i^2). Throws DegenerateB2 if
// the denominator is not positive.
double c_coefficient(const Spectrum& s, const Eigen::VectorXd& b2, double t);

}  // namespace gst
