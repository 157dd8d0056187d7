// Sampler, component analysis, path builder.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "gst/geometry.hpp"
#include "gst/rng.hpp"

using namespace gst;

namespace {

struct Fixture {
    QuadraticForm q;
    Spectrum s;
    CollisionSpace coll;

    explicit Fixture(int n) : q(build_form(n)), s(eigendecompose(q)) {
        std::vector<RatVec> lifted;
        for (const auto& v : kernel_basis(restrict_to_symmetric(q).R))
            lifted.push_back(lift_symmetric(n, v));
        coll = collision_space(s, lifted);
    }
};

}  // namespace

TEST_CASE("slice sampler lands on the slice") {
    const Fixture f(4);
    const auto ys = sample_slice({1.0, 0.01}, f.s, 200, 42);
    for (const auto& y : ys) {
        CHECK(std::abs(y(0)) < 1.0);
        const double y2_expect = std::sqrt(0.01 / f.s.eigenvalues(1));
        CHECK(std::abs(std::abs(y(1)) - y2_expect) < 1e-12);
        double pos = 0, neg = 0;
        for (int i : f.s.positive_indices()) pos += f.s.eigenvalues(i) * y(i) * y(i);
        for (int i : f.s.negative_indices()) neg += -f.s.eigenvalues(i) * y(i) * y(i);
        CHECK(std::abs(pos - 0.01) < 1e-12);
        CHECK(std::abs(neg - 0.01) < 1e-12);
    }

    const Fixture f5(5);
    const auto ys5 = sample_slice({1.0, 1.0}, f5.s, 1000, 7);
    bool plus = false, minus = false;
    for (const auto& y : ys5) (y(1) > 0 ? plus : minus) = true;
    CHECK(plus);
    CHECK(minus);
}

TEST_CASE("gst sampler: membership, determinism, cylinder signs") {
    const Fixture f(4);
    SamplerConfig cfg;
    const SampleCloud cloud = sample_gst(f.s, 600, 11, cfg);
    REQUIRE(cloud.size() == 600);
    std::set<int> signs;
    for (int i = 0; i < cloud.size(); ++i) {
        const Eigen::VectorXd x = cloud.X.row(i);
        CHECK(std::abs(f.s.psi(x)) < 1e-10);
        CHECK(x.minCoeff() >= 0.0);
        CHECK(x.maxCoeff() <= 1.0);
        CHECK(cloud.margin(i) > cfg.margin_floor);
        CHECK(cloud.t(i) > 0.0);
        CHECK(cloud.t(i) <= cloud.t_max_used);
        signs.insert(cloud.cylinder_sign[i]);
        // stored y reproduces x
        const Eigen::VectorXd x2 =
            Eigen::VectorXd::Constant(4, 0.5) + f.s.P * Eigen::VectorXd(cloud.Y.row(i));
        CHECK((x - x2).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(signs == std::set<int>{-1, 1});

    const SampleCloud again = sample_gst(f.s, 600, 11, cfg);
    CHECK((cloud.X - again.X).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("n=6 cloud stays away from the measure-zero collision set") {
    const Fixture f(6);
    const SampleCloud cloud = sample_gst(f.s, 400, 3);
    for (int i = 0; i < cloud.size(); ++i)
        CHECK(distance_to_T(cloud.Y.row(i), f.coll) > 1e-6);
}

TEST_CASE("distance to the collision image") {
    const Fixture f4(4);
    Eigen::VectorXd y(4);
    y << 0.7, 0.3, -0.4, 0.12;
    CHECK(std::abs(distance_to_T(y, f4.coll) -
                   std::sqrt(0.3 * 0.3 + 0.4 * 0.4 + 0.12 * 0.12)) < 1e-12);
    Eigen::VectorXd on(4);
    on << -2.5, 0, 0, 0;
    CHECK(distance_to_T(on, f4.coll) == 0.0);

    const Fixture f5(5);
    const Eigen::VectorXd b2 = *f5.coll.b2();
    CHECK(distance_to_T(0.37 * b2, f5.coll) < 1e-10);
}

TEST_CASE("x and y metrics agree (orthogonality)") {
    const Fixture f(5);
    const SampleCloud cloud = sample_gst(f.s, 300, 5);
    for (int i = 0; i < 40; ++i)
        for (int j = i + 1; j < 40; ++j) {
            const double dx = (cloud.X.row(i) - cloud.X.row(j)).norm();
            const double dy = (cloud.Y.row(i) - cloud.Y.row(j)).norm();
            CHECK(std::abs(dx - dy) < 1e-10);
        }

    ComponentConfig cx, cy;
    cy.use_y_metric = true;
    const ComponentReport rx = count_components(cloud, cx);
    const ComponentReport ry = count_components(cloud, cy);
    CHECK(rx.components_per_epsilon == ry.components_per_epsilon);
}

TEST_CASE("component counts are nonincreasing and plateau detection works") {
    const Fixture f(5);
    SamplerConfig sc;
    sc.margin_floor = 0.05;
    const SampleCloud cloud = sample_gst(f.s, 1500, 21, sc);
    const ComponentReport rep = count_components(cloud);
    for (size_t i = 1; i < rep.components_per_epsilon.size(); ++i)
        CHECK(rep.components_per_epsilon[i] <= rep.components_per_epsilon[i - 1]);
    REQUIRE(rep.stable_count.has_value());
    CHECK(*rep.stable_count == 1);
    CHECK(rep.component_sizes.size() == 1);

    // a grid confined below the connectivity scale has no meaningful plateau
    ComponentConfig tight;
    tight.eps_min = 1e-7;
    tight.eps_max = 3e-7;
    tight.eps_steps = 5;
    const ComponentReport none = count_components(cloud, tight);
    CHECK_FALSE(none.stable_count.has_value());
}

TEST_CASE("n=4 separation bound holds on the sampled cloud") {
    const Fixture f(4);
    SamplerConfig sc;
    sc.margin_floor = 0.05;
    const SampleCloud cloud = sample_gst(f.s, 2000, 31, sc);
    const ComponentReport rep = count_components(cloud);
    REQUIRE(rep.min_cross_distance.has_value());
    REQUIRE(rep.separation_bound.has_value());
    CHECK(*rep.min_cross_distance >= *rep.separation_bound * (1.0 - 1e-6));
}

TEST_CASE("paths: same component, refusals, and validation") {
    const Fixture f4(4);
    SamplerConfig sc;
    sc.margin_floor = 0.05;
    const SampleCloud cloud = sample_gst(f4.s, 400, 17, sc);
    auto pick = [&](int sign, int skip) {
        for (int i = skip;; ++i)
            if (cloud.cylinder_sign[i] == sign) return i;
    };

    const int a = pick(1, 0), b = pick(1, a + 1);
    const PathWitness w = build_path(cloud.X.row(a), cloud.X.row(b), f4.s, f4.coll);
    CHECK(w.max_abs_psi < 1e-8);
    CHECK(w.min_influence_margin > 0.0);
    CHECK(w.in_cube);
    CHECK(w.step_bound <= 1e-2 * 1.05);
    CHECK((w.waypoints.front() - Eigen::VectorXd(cloud.X.row(a))).norm() < 1e-12);
    CHECK((w.waypoints.back() - Eigen::VectorXd(cloud.X.row(b))).norm() < 1e-12);

    const int c = pick(-1, 0);
    CHECK_THROWS_AS(build_path(cloud.X.row(a), cloud.X.row(c), f4.s, f4.coll),
                    DifferentComponents);

    // injected fault: the validator pinpoints the corrupted waypoint
    PathWitness broken = w;
    const int mid = static_cast<int>(broken.waypoints.size()) / 2;
    broken.waypoints[mid](1) += 1e-2;
    const PathDiagnostics d = validate_path(broken, f4.s, PathConfig{});
    CHECK_FALSE(d.pass);
    CHECK(d.first_bad_index == mid);

    // single-point path
    const PathWitness trivial = build_path(cloud.X.row(a), cloud.X.row(a), f4.s, f4.coll);
    CHECK(trivial.waypoints.size() == 1);
    CHECK(validate_path(trivial, f4.s, PathConfig{}).pass);
}

TEST_CASE("paths for n=5..7 random pairs validate") {
    for (int n : {5, 6, 7}) {
        const Fixture f(n);
        SamplerConfig sc;
        sc.margin_floor = 0.02;
        const SampleCloud cloud = sample_gst(f.s, 200, 100 + n, sc);
        Rng rng(n);
        for (int k = 0; k < 8; ++k) {
            const int i = rng.uniform_index(cloud.size());
            int j = rng.uniform_index(cloud.size());
            if (j == i) j = (j + 1) % cloud.size();
            const PathWitness w = build_path(cloud.X.row(i), cloud.X.row(j), f.s, f.coll);
            const PathDiagnostics d = validate_path(w, f.s, PathConfig{});
            CHECK(d.pass);
            CHECK(w.max_abs_psi < 1e-8);
        }
    }
}

TEST_CASE("n=3 sign classes behave like components") {
    const Fixture f(3);
    const SampleCloud cloud = sample_gst(f.s, 300, 9);
    // only two of the four sign patterns are realized inside the cube
    std::set<std::pair<int, int>> classes;
    for (int i = 0; i < cloud.size(); ++i)
        classes.insert({cloud.Y(i, 1) > 0 ? 1 : -1, cloud.Y(i, 2) > 0 ? 1 : -1});
    CHECK(classes.size() == 2);

    // same-class pair connects; cross-class pair is refused
    int a = -1, b = -1, c = -1;
    const auto cls = [&](int i) {
        return std::pair<int, int>{cloud.Y(i, 1) > 0 ? 1 : -1, cloud.Y(i, 2) > 0 ? 1 : -1};
    };
    for (int i = 1; i < cloud.size(); ++i) {
        if (cls(i) == cls(0) && a < 0) a = i;
        if (cls(i) != cls(0) && c < 0) c = i;
    }
    b = 0;
    REQUIRE(a > 0);
    REQUIRE(c > 0);
    const PathWitness w = build_path(cloud.X.row(b), cloud.X.row(a), f.s, f.coll);
    CHECK(validate_path(w, f.s, PathConfig{}).pass);
    CHECK_THROWS_AS(build_path(cloud.X.row(b), cloud.X.row(c), f.s, f.coll),
                    DifferentComponents);
}

TEST_CASE("path routes around the in-slice collision points") {
    // Endpoints whose negative block sits exactly on its collision value
    // while the positive block must cross the matching value: the direct
    // arc would pass through the collision set, so the builder must detour.
    const Fixture f(5);
    const Eigen::VectorXd b2 = *f.coll.b2();
    const double t = 1e-3;
    const double c = c_coefficient(f.s, b2, t);
    const double r = std::sqrt(t);

    auto make_point = [&](double angle_offset) {
        const double wx = std::sqrt(f.s.eigenvalues(1)) * c * b2(1);
        const double wy = std::sqrt(f.s.eigenvalues(2)) * c * b2(2);
        const double theta0 = std::atan2(wy, wx);
        Eigen::VectorXd y = Eigen::VectorXd::Zero(5);
        y(1) = r * std::cos(theta0 + angle_offset) / std::sqrt(f.s.eigenvalues(1));
        y(2) = r * std::sin(theta0 + angle_offset) / std::sqrt(f.s.eigenvalues(2));
        y(3) = c * b2(3);
        y(4) = c * b2(4);
        return Eigen::VectorXd(Eigen::VectorXd::Constant(5, 0.5) + f.s.P * y);
    };

    const Eigen::VectorXd p = make_point(0.5);
    const Eigen::VectorXd q = make_point(-0.5);
    const PathWitness w = build_path(p, q, f.s, f.coll);
    CHECK(validate_path(w, f.s, PathConfig{}).pass);

    const Eigen::VectorXd m = Eigen::VectorXd::Constant(5, 0.5);
    double min_interior = 1e9;
    for (size_t i = 1; i + 1 < w.waypoints.size(); ++i)
        min_interior = std::min(
            min_interior, distance_to_T(f.s.P.transpose() * (w.waypoints[i] - m), f.coll));
    CHECK(min_interior > 1e-3);
}

TEST_CASE("cloud csv has the documented header") {
    const Fixture f(4);
    const SampleCloud cloud = sample_gst(f.s, 10, 1);
    std::ostringstream os;
    write_cloud_csv(os, cloud);
    const std::string text = os.str();
    CHECK(text.rfind("n,t,margin,x1,x2,x3,x4,y1,y2,y3,y4,cyl\n", 0) == 0);
    // 10 data rows
    int rows = -1;
    for (char ch : text)
        if (ch == '\n') ++rows;
    CHECK(rows == 10);

    // cylinder column is empty outside n=4
    const Fixture f5(5);
    std::ostringstream os5;
    write_cloud_csv(os5, sample_gst(f5.s, 3, 1));
    const std::string t5 = os5.str();
    const auto second_line_end = t5.find('\n', t5.find('\n') + 1);
    CHECK(t5[second_line_end - 1] == ',');
}

TEST_CASE("sampler error paths") {
    const Fixture f(4);
    SamplerConfig cfg;
    cfg.margin_floor = 2.0;  // impossible: margins are <= 1
    cfg.max_halvings = 3;
    CHECK_THROWS_AS(sample_gst(f.s, 10, 1, cfg), SamplingStalled);
    CHECK_THROWS_AS(sample_slice({-1.0, 0.1}, f.s, 1, 1), std::invalid_argument);

    Spectrum corrupt = f.s;
    corrupt.positive = 0;
    CHECK_THROWS_AS(sample_slice({1.0, 0.1}, corrupt, 1, 1), EmptySlice);
}
