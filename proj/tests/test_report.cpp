// Serialization stability and the reference tables.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gst/reference.hpp"
#include "gst/report.hpp"

using namespace gst;

TEST_CASE("twelve-significant-digit rounding is idempotent") {
    for (double v : {0.1234567890123456, 1e-17, 3.0, -2.718281828459045e5}) {
        CHECK(round12(round12(v)) == round12(v));
        CHECK(format12(round12(v)) == format12(v));
    }
}

TEST_CASE("restricted polynomial rendering") {
    CHECK(restricted_poly_string(restrict_to_symmetric(build_form(4))) ==
          "-1/2*x1^2 + x1*x2 - 1/2*x2^2");
    CHECK(restricted_poly_string(restrict_to_symmetric(build_form(5))) ==
          "-3*x1^2 + 6*x1*x3 - 3*x3^2");
    CHECK(restricted_poly_string(restrict_to_symmetric(build_form(6))) ==
          "-7*x1^2 - 6*x1*x2 + 20*x1*x3 - 15*x2^2 + 36*x2*x3 - 28*x3^2");
}

TEST_CASE("reference tables cover the documented range") {
    for (int n = 4; n <= 7; ++n) {
        CHECK(reference::restricted_scale(n).has_value());
        CHECK(reference::restricted_polynomial(n).has_value());
        CHECK(reference::collision_dim(n).has_value());
        CHECK(restricted_matches_reference(restrict_to_symmetric(build_form(n))));
    }
    CHECK_FALSE(reference::restricted_polynomial(9).has_value());
    CHECK(reference::reference_b2(5).has_value());
    CHECK(reference::reference_b2(7).has_value());
    CHECK_FALSE(reference::reference_b2(6).has_value());
    for (int n = 3; n <= 10; ++n) CHECK(reference::component_count(n).has_value());
    CHECK(*reference::component_count(3) == 2);
    CHECK(*reference::component_count(4) == 2);
    for (int n = 5; n <= 10; ++n) CHECK(*reference::component_count(n) == 1);
}

TEST_CASE("suite document structure and determinism on a reduced run") {
    SuiteConfig cfg;
    cfg.nmin = 3;
    cfg.nmax = 5;
    cfg.samples = 1200;
    cfg.trials = 10;
    cfg.path_pairs = 2;
    cfg.seed = 4;

    const Json a = run_suite(cfg);
    const Json b = run_suite(cfg);
    CHECK(a.dump() == b.dump());

    REQUIRE(a.contains("forms"));
    REQUIRE(a.contains("oracle"));
    REQUIRE(a.contains("components"));
    CHECK(a["forms"].size() == 3);
    for (const auto& o : a["oracle"]) CHECK(o["passed"] == o["trials"]);
    for (const auto& f : a["forms"]) {
        CHECK(f["matches_exact_inertia"].get<bool>());
        CHECK(f["orthogonality_error"].get<double>() < 1e-10);
    }
    for (const auto& r : a["restricted"]) CHECK(r["matches_reference"].get<bool>());
}
