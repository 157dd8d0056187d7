#include "gst/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gst {

namespace {

double offdiag_norm(const Eigen::MatrixXd& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// One two-sided rotation zeroing a(p,q).
void jacobi_rotate(Eigen::MatrixXd& a, Eigen::MatrixXd& v, int p, int q) {
    const double apq = a(p, q);
    if (apq == 0.0) return;
    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const int n = static_cast<int>(a.rows());

    for (int k = 0; k < n; ++k) {
        const double akp = a(k, p), akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
    }
    for (int k = 0; k < n; ++k) {
        const double apk = a(p, k), aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
    }
    for (int k = 0; k < n; ++k) {
        const double vkp = v(k, p), vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
    }
}

}  // namespace

std::vector<int> Spectrum::positive_indices() const {
    std::vector<int> idx(positive);
    std::iota(idx.begin(), idx.end(), zero);
    return idx;
}

std::vector<int> Spectrum::negative_indices() const {
    std::vector<int> idx(negative);
    std::iota(idx.begin(), idx.end(), zero + positive);
    return idx;
}

Spectrum eigendecompose(const QuadraticForm& q, double zero_tol) {
    const int n = q.n;
    Eigen::MatrixXd qd = to_double(q.Q);
    Eigen::MatrixXd a = qd;
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

    const double target = 1e-13 * qd.norm();
    constexpr int kMaxSweeps = 50;
    int sweep = 0;
    while (offdiag_norm(a) > target) {
        if (++sweep > kMaxSweeps) throw NoConvergence("Jacobi did not converge in 50 sweeps");
        for (int p = 0; p < n - 1; ++p)
            for (int qq = p + 1; qq < n; ++qq)
                if (std::abs(a(p, qq)) > target / n) jacobi_rotate(a, v, p, qq);
    }

    Eigen::VectorXd eig(n);
    for (int i = 0; i < n; ++i) eig(i) = a(i, i);

    const double abs_tol = zero_tol * eig.cwiseAbs().maxCoeff();
    std::vector<int> zeros, pos, neg;
    for (int i = 0; i < n; ++i) {
        if (std::abs(eig(i)) <= abs_tol) zeros.push_back(i);
        else if (eig(i) > 0) pos.push_back(i);
        else neg.push_back(i);
    }
    auto desc = [&](int i, int j) { return eig(i) > eig(j); };
    std::sort(zeros.begin(), zeros.end(), desc);
    std::sort(pos.begin(), pos.end(), desc);
    std::sort(neg.begin(), neg.end(), desc);

    std::vector<int> order;
    order.insert(order.end(), zeros.begin(), zeros.end());
    order.insert(order.end(), pos.begin(), pos.end());
    order.insert(order.end(), neg.begin(), neg.end());

    Spectrum s;
    s.n = n;
    s.eigenvalues.resize(n);
    s.P.resize(n, n);
    for (int j = 0; j < n; ++j) {
        s.eigenvalues(j) = eig(order[j]);
        s.P.col(j) = v.col(order[j]);
    }
    // Sign convention: last component above tolerance positive. This pins P
    // uniquely (given distinct eigenvalues) and reproduces the reference
    // collision-basis vectors.
    for (int j = 0; j < n; ++j) {
        for (int i = n - 1; i >= 0; --i) {
            if (std::abs(s.P(i, j)) > 1e-8) {
                if (s.P(i, j) < 0) s.P.col(j) = -s.P.col(j);
                break;
            }
        }
    }
    s.Q = std::move(qd);
    s.positive = static_cast<int>(pos.size());
    s.zero = static_cast<int>(zeros.size());
    s.negative = static_cast<int>(neg.size());
    s.zero_tol = zero_tol;
    return s;
}

std::string SliceType::description() const {
    std::ostringstream os;
    os << "I x S^" << (p - 1) << " x S^" << (q - 1);
    return os.str();
}

SliceType slice_type(const Spectrum& s) {
    if (s.zero != 1) {
        std::ostringstream os;
        os << "slice_type: expected kernel dimension 1, got " << s.zero;
        throw UnexpectedKernelDim(os.str());
    }
    return SliceType{s.n, s.positive, s.negative};
}

std::optional<Eigen::VectorXd> CollisionSpace::b2() const {
    if (dim < 2 || y_basis.size() < 2) return std::nullopt;
    return y_basis[1];
}

CollisionSpace collision_space(const Spectrum& s, const std::vector<RatVec>& lifted_kernel) {
    CollisionSpace c;
    c.n = s.n;
    c.dim = static_cast<int>(lifted_kernel.size());
    c.x_basis = lifted_kernel;
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(s.n);
    e1(0) = 1.0;
    c.y_basis.push_back(e1);

    if (c.dim == 2) {
        // The alternating-support kernel vector (first coordinate zero),
        // made orthogonal to the all-ones direction and mapped by P^T.
        const RatVec* alt = nullptr;
        for (const auto& v : lifted_kernel)
            if (v[0] == 0) { alt = &v; break; }
        Eigen::VectorXd u = to_double(alt ? *alt : lifted_kernel.back());
        u.array() -= u.mean();
        c.y_basis.push_back(s.P.transpose() * u);
    }
    return c;
}

bool matches_reference_b2(const Spectrum& s, const Eigen::VectorXd& computed,
                          const Eigen::VectorXd& reference, double tol, double degen_tol) {
    if (computed.size() != reference.size()) return false;
    const int n = static_cast<int>(computed.size());

    // Group eigenvalue indices that are degenerate within degen_tol.
    const double scale = s.eigenvalues.cwiseAbs().maxCoeff();
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < n; ++i) {
        if (!groups.empty() &&
            std::abs(s.eigenvalues(groups.back().back()) - s.eigenvalues(i)) <= degen_tol * scale)
            groups.back().push_back(i);
        else
            groups.push_back({i});
    }

    const bool all_singleton =
        std::all_of(groups.begin(), groups.end(), [](const auto& g) { return g.size() == 1; });
    if (all_singleton) {
        const double dp = (computed - reference).cwiseAbs().maxCoeff();
        const double dm = (computed + reference).cwiseAbs().maxCoeff();
        return std::min(dp, dm) < tol;
    }
    // Degenerate eigenspaces: components within a group are basis-dependent;
    // compare projection norms per group instead.
    for (const auto& g : groups) {
        double nc = 0.0, nr = 0.0;
        for (int i : g) {
            nc += computed(i) * computed(i);
            nr += reference(i) * reference(i);
        }
        if (std::abs(std::sqrt(nc) - std::sqrt(nr)) >= tol) return false;
    }
    return true;
}

double c_coefficient(const Spectrum& s, const Eigen::VectorXd& b2, double t) {
    if (t < 0) throw DimensionMismatch("c_coefficient: t must be >= 0");
    double denom = 0.0;
    for (int i : s.positive_indices()) denom += s.eigenvalues(i) * b2(i) * b2(i);
    if (denom <= 0.0) throw DegenerateB2("c_coefficient: nonpositive positive-block energy in b2");
    return std::sqrt(t / denom);
}

}  // namespace gst
