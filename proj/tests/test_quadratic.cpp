// Exact form construction, restriction, inertia, kernel, perfect squares.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "gst/quadratic.hpp"
#include "gst/report.hpp"
#include "gst/rng.hpp"

using namespace gst;

namespace {

RatVec rv(std::initializer_list<int> vals) {
    RatVec x;
    for (int v : vals) x.push_back(v);
    return x;
}

RatVec random_rational_vec(int n, Rng& rng) {
    RatVec x(n);
    for (int i = 0; i < n; ++i) {
        const auto den = 1 + rng.raw() % 16;
        const long long num = static_cast<long long>(rng.raw() % (2 * den + 1)) -
                              static_cast<long long>(den);
        x[i] = Rational(boost::multiprecision::cpp_int(num),
                        boost::multiprecision::cpp_int(den));
    }
    return x;
}

}  // namespace

TEST_CASE("form construction basics") {
    CHECK_THROWS_AS(build_form(2), InvalidN);
    for (int n = 3; n <= 10; ++n) {
        const QuadraticForm q = build_form(n);
        CHECK(q.Q.is_symmetric());
        // all-ones vector spans the kernel direction
        const RatVec ones(n, Rational(1));
        for (const auto& entry : q.Q * ones) CHECK(entry == 0);
        CHECK(eval_psi(q, ones) == 0);
    }
}

TEST_CASE("reference evaluations of the form") {
    CHECK(eval_psi(build_form(4), rv({1, 0, 0, 1})) == Rational(-1, 16));
    CHECK(eval_psi(build_form(5), rv({1, 0, 0, 0, 1})) == Rational(-3, 64));
    CHECK(eval_psi(build_form(3), rv({1, 0, 0})) == Rational(1, 16));
    CHECK_THROWS_AS(eval_psi(build_form(4), rv({1, 0})), DimensionMismatch);
}

TEST_CASE("matrix path equals the direct term-by-term path") {
    Rng rng(1234);
    for (int n = 3; n <= 10; ++n) {
        const QuadraticForm q = build_form(n);
        for (int trial = 0; trial < 100; ++trial) {
            const RatVec x = random_rational_vec(n, rng);
            CHECK(eval_psi(q, x) == eval_psi_direct(n, x));
        }
    }
}

TEST_CASE("restriction to the palindromic subspace") {
    for (int n = 4; n <= 7; ++n) {
        const RestrictedForm r = restrict_to_symmetric(build_form(n));
        CHECK(r.m == (n + 1) / 2);
        CHECK(restricted_matches_reference(r));
        // negative semidefinite: no positive directions
        CHECK(exact_inertia(r.R).positive == 0);
    }
    // spot-check the n=4 entries directly: 8*R is -1/2 x1^2 + x1 x2 - 1/2 x2^2
    const RestrictedForm r4 = restrict_to_symmetric(build_form(4));
    CHECK(r4.scale == 8);
    CHECK(r4.R(0, 0) == Rational(-1, 16));
    CHECK(r4.R(0, 1) == Rational(1, 16));
    CHECK(r4.R(1, 1) == Rational(-1, 16));
}

TEST_CASE("restricted form agrees with the lifted evaluation") {
    Rng rng(77);
    for (int n = 4; n <= 9; ++n) {
        const QuadraticForm q = build_form(n);
        const RestrictedForm r = restrict_to_symmetric(q);
        for (int trial = 0; trial < 20; ++trial) {
            const RatVec v = random_rational_vec(r.m, rng);
            CHECK(quad_form(r.R, v) == eval_psi(q, lift_symmetric(n, v)));
        }
    }
}

TEST_CASE("exact inertia") {
    CHECK(exact_inertia(RatMat::identity(3)) == ExactInertia{3, 0, 0});
    CHECK(exact_inertia(RatMat(4, 4)) == ExactInertia{0, 4, 0});

    // zero diagonal forces the 2x2 exchange pivot
    RatMat h(2, 2);
    h(0, 1) = Rational(3, 7);
    h(1, 0) = Rational(3, 7);
    CHECK(exact_inertia(h) == ExactInertia{1, 0, 1});

    RatMat h4(4, 4);
    h4(0, 2) = h4(2, 0) = 1;
    h4(1, 3) = h4(3, 1) = Rational(-5, 2);
    CHECK(exact_inertia(h4) == ExactInertia{2, 0, 2});

    CHECK(exact_inertia(restrict_to_symmetric(build_form(4)).R) == ExactInertia{0, 1, 1});
    CHECK(exact_inertia(restrict_to_symmetric(build_form(6)).R) == ExactInertia{0, 1, 2});
    CHECK(exact_inertia(build_form(5).Q) == ExactInertia{2, 1, 2});

    for (int n = 3; n <= 10; ++n) CHECK(exact_inertia(build_form(n).Q).zero == 1);
}

TEST_CASE("kernel bases in canonical form") {
    auto lifted_kernel = [](int n) {
        std::vector<RatVec> out;
        for (const auto& v : kernel_basis(restrict_to_symmetric(build_form(n)).R))
            out.push_back(lift_symmetric(n, v));
        return out;
    };

    CHECK(lifted_kernel(4) == std::vector<RatVec>{rv({1, 1, 1, 1})});
    CHECK(lifted_kernel(6) == std::vector<RatVec>{rv({1, 1, 1, 1, 1, 1})});

    auto k5 = lifted_kernel(5);
    REQUIRE(k5.size() == 2);
    CHECK(std::find(k5.begin(), k5.end(), rv({1, 0, 1, 0, 1})) != k5.end());
    CHECK(std::find(k5.begin(), k5.end(), rv({0, 1, 0, 1, 0})) != k5.end());

    auto k7 = lifted_kernel(7);
    REQUIRE(k7.size() == 2);
    CHECK(std::find(k7.begin(), k7.end(), rv({1, 0, 1, 0, 1, 0, 1})) != k7.end());
    CHECK(std::find(k7.begin(), k7.end(), rv({0, 1, 0, 1, 0, 1, 0})) != k7.end());

    // kernel dims 1,2,1,2 for n=4..7
    CHECK(lifted_kernel(4).size() == 1);
    CHECK(lifted_kernel(5).size() == 2);
    CHECK(lifted_kernel(6).size() == 1);
    CHECK(lifted_kernel(7).size() == 2);

    // canonicalization: coprime integers, positive leading coefficient
    RatMat m(3, 3);
    m(0, 0) = Rational(2, 3);
    m(0, 1) = Rational(-4, 3);
    m(1, 0) = Rational(2, 3);
    m(1, 1) = Rational(-4, 3);
    const auto kb = kernel_basis(m);
    REQUIRE(kb.size() == 2);
    CHECK(kb[0] == rv({2, 1, 0}));
    CHECK(kb[1] == rv({0, 0, 1}));

    // kernel vectors actually annihilate the form
    for (int n = 4; n <= 7; ++n) {
        const QuadraticForm q = build_form(n);
        for (const auto& v : kernel_basis(restrict_to_symmetric(q).R))
            CHECK(eval_psi(q, lift_symmetric(n, v)) == 0);
    }
}

TEST_CASE("exact inertia agrees with the floating eigensolver on random forms") {
    // Dual route: random symmetric rational matrices with well-separated
    // spectra, counted exactly and through the Jacobi path.
    Rng rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = 2 + static_cast<int>(rng.raw() % 5);
        RatMat a(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                const long long num = static_cast<long long>(rng.raw() % 21) - 10;
                a(i, j) = Rational(num, 1 + static_cast<long long>(rng.raw() % 4));
                a(j, i) = a(i, j);
            }
        const ExactInertia exact = exact_inertia(a);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_double(a));
        int pos = 0, neg = 0, zero = 0;
        for (int i = 0; i < m; ++i) {
            const double ev = es.eigenvalues()(i);
            if (ev > 1e-9) ++pos;
            else if (ev < -1e-9) ++neg;
            else ++zero;
        }
        // only compare when the float classification is unambiguous
        if (zero == exact.zero) {
            CHECK(exact.positive == pos);
            CHECK(exact.negative == neg);
        }
        CHECK(exact.positive + exact.zero + exact.negative == m);
    }
}

TEST_CASE("kernel basis vectors annihilate random singular matrices") {
    Rng rng(31337);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 3 + static_cast<int>(rng.raw() % 4);
        const int rank = 1 + static_cast<int>(rng.raw() % (m - 1));
        // random rank-deficient symmetric matrix: sum of r outer products
        RatMat a(m, m);
        for (int r = 0; r < rank; ++r) {
            RatVec v(m);
            for (int i = 0; i < m; ++i)
                v[i] = Rational(static_cast<long long>(rng.raw() % 7) - 3);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) a(i, j) += v[i] * v[j];
        }
        const auto kb = kernel_basis(a);
        CHECK(static_cast<int>(kb.size()) >= m - rank);
        for (const auto& v : kb) {
            for (const auto& entry : a * v) CHECK(entry == 0);
            // canonical form: integer entries, positive leading coefficient
            boost::multiprecision::cpp_int g = 0;
            const Rational* lead = nullptr;
            for (const auto& e : v) {
                CHECK(denominator(e) == 1);
                if (e != 0) {
                    if (!lead) lead = &e;
                    g = boost::multiprecision::gcd(g, abs(numerator(e)));
                }
            }
            REQUIRE(lead != nullptr);
            CHECK(*lead > 0);
            CHECK(g == 1);
        }
        CHECK(static_cast<int>(kb.size()) == exact_inertia(a).zero);
    }
}

TEST_CASE("perfect square detection") {
    const auto s4 = perfect_square_check(restrict_to_symmetric(build_form(4)));
    REQUIRE(s4.has_value());
    CHECK(s4->coefficient == Rational(1, 2));
    CHECK(s4->a == 1);
    CHECK(s4->b == 2);

    const auto s5 = perfect_square_check(restrict_to_symmetric(build_form(5)));
    REQUIRE(s5.has_value());
    CHECK(s5->coefficient == 3);
    CHECK(s5->a == 1);
    CHECK(s5->b == 3);

    CHECK_FALSE(perfect_square_check(restrict_to_symmetric(build_form(6))).has_value());
    CHECK_FALSE(perfect_square_check(restrict_to_symmetric(build_form(7))).has_value());
}
