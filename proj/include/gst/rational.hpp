// Exact rational scalars and a small dense matrix over them.
//
// All exact-arithmetic modules work with boost::multiprecision::cpp_rational
// (arbitrary-precision integers, always kept in lowest terms). Floating-point
// work lives in Eigen types; conversion helpers are at the bottom.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "gst/errors.hpp"

namespace gst {

using Rational = boost::multiprecision::cpp_rational;
using RatVec = std::vector<Rational>;

// Dense row-major rational matrix. Only the operations the exact modules
// need; anything heavier belongs on the floating-point side.
class RatMat {
public:
    RatMat() = default;
    RatMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static RatMat identity(int n) {
        RatMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Rational& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const RatMat& o) const = default;

    RatMat transpose() const {
        RatMat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    RatMat operator*(const RatMat& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("RatMat multiply: inner dimensions differ");
        RatMat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Rational& v = (*this)(i, k);
                if (v == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
            }
        return r;
    }

    RatMat operator+(const RatMat& o) const {
        RatMat r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }

    RatMat operator-(const RatMat& o) const {
        RatMat r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }

    RatVec operator*(const RatVec& v) const {
        if (static_cast<int>(v.size()) != cols_) throw DimensionMismatch("RatMat*vec size");
        RatVec r(rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    bool is_symmetric() const {
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Rational> a_;
};

// x^T M x, exact.
inline Rational quad_form(const RatMat& m, const RatVec& x) {
    if (static_cast<int>(x.size()) != m.rows() || m.rows() != m.cols())
        throw DimensionMismatch("quad_form: size mismatch");
    Rational s = 0;
    for (int i = 0; i < m.rows(); ++i) {
        if (x[i] == 0) continue;
        Rational row = 0;
        for (int j = 0; j < m.cols(); ++j) row += m(i, j) * x[j];
        s += x[i] * row;
    }
    return s;
}

inline Eigen::MatrixXd to_double(const RatMat& m) {
    Eigen::MatrixXd d(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) d(i, j) = static_cast<double>(m(i, j));
    return d;
}

inline Eigen::VectorXd to_double(const RatVec& v) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) d(static_cast<Eigen::Index>(i)) = static_cast<double>(v[i]);
    return d;
}

inline std::string to_string(const Rational& r) { return r.str(); }

// Parses "p", "-p", or "p/q". Throws std::runtime_error on garbage.
Rational parse_rational(const std::string& s);

// Parses a comma-separated list of rationals.
RatVec parse_rational_vector(const std::string& s);

}  // namespace gst
