#include "gst/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "gst/model.hpp"
#include "gst/reference.hpp"
#include "gst/rng.hpp"

namespace gst {

double round12(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

std::string format12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace {

Json vector_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(round12(v(i)));
    return a;
}

Json rat_vec_json(const RatVec& v) {
    Json a = Json::array();
    for (const auto& r : v) a.push_back(to_string(r));
    return a;
}

GamePoint random_probabilistic_point(int n, Rng& rng) {
    RatVec x(n);
    for (int i = 0; i < n; ++i) {
        const auto den = 1 + rng.raw() % 64;
        const auto num = rng.raw() % (den + 1);
        x[i] = Rational(boost::multiprecision::cpp_int(num), boost::multiprecision::cpp_int(den));
    }
    return GamePoint(n, std::move(x));
}

}  // namespace

std::string restricted_poly_string(const RestrictedForm& r) {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < r.m; ++i) {
        for (int j = i; j < r.m; ++j) {
            Rational c = r.scale * r.R(i, j);
            if (i != j) c *= 2;
            if (c == 0) continue;
            const bool neg = c < 0;
            Rational a = abs(c);
            if (first) {
                if (neg) os << "-";
                first = false;
            } else {
                os << (neg ? " - " : " + ");
            }
            if (a != 1) os << to_string(a) << "*";
            os << "x" << (i + 1);
            if (i == j) os << "^2";
            else os << "*x" << (j + 1);
        }
    }
    if (first) os << "0";
    return os.str();
}

bool restricted_matches_reference(const RestrictedForm& r) {
    const auto terms = reference::restricted_polynomial(r.n);
    const auto scale = reference::restricted_scale(r.n);
    if (!terms || !scale || r.scale != *scale) return false;
    RatMat expected(r.m, r.m);
    for (const auto& t : *terms) {
        if (t.i == t.j) expected(t.i - 1, t.i - 1) = t.coefficient;
        else {
            expected(t.i - 1, t.j - 1) = t.coefficient / 2;
            expected(t.j - 1, t.i - 1) = t.coefficient / 2;
        }
    }
    RatMat scaled(r.m, r.m);
    for (int i = 0; i < r.m; ++i)
        for (int j = 0; j < r.m; ++j) scaled(i, j) = r.scale * r.R(i, j);
    return scaled == expected;
}

Json component_report_to_json(const ComponentReport& report) {
    Json j;
    j["n"] = report.n;
    j["samples"] = report.sample_count;
    j["min_component_size"] = report.min_component_size;
    Json grid = Json::array();
    for (double e : report.epsilon_grid) grid.push_back(round12(e));
    j["epsilon_grid"] = grid;
    j["components_per_epsilon"] = report.components_per_epsilon;
    j["significant_per_epsilon"] = report.significant_per_epsilon;
    if (report.stable_count) {
        j["stable_count"] = *report.stable_count;
        j["stable_index"] = report.stable_index;
        j["component_sizes"] = report.component_sizes;
    } else {
        j["stable_count"] = nullptr;
    }
    j["t_min"] = round12(report.t_min);
    if (report.min_cross_distance) {
        j["min_cross_distance"] = round12(*report.min_cross_distance);
        j["separation_bound"] = round12(*report.separation_bound);
        j["cross_edges_below_bound"] =
            *report.min_cross_distance < *report.separation_bound * (1.0 - 1e-6);
    }
    return j;
}

Json cloud_to_json(const SampleCloud& cloud) {
    Json j;
    j["n"] = cloud.n;
    j["count"] = cloud.size();
    j["seed"] = cloud.seed;
    j["t_max"] = round12(cloud.t_max_used);
    Json pts = Json::array();
    for (int i = 0; i < cloud.size(); ++i) {
        Json p;
        p["x"] = vector_json(cloud.X.row(i));
        p["y"] = vector_json(cloud.Y.row(i));
        p["t"] = round12(cloud.t(i));
        p["margin"] = round12(cloud.margin(i));
        if (!cloud.cylinder_sign.empty()) p["cyl"] = cloud.cylinder_sign[i];
        pts.push_back(std::move(p));
    }
    j["points"] = std::move(pts);
    return j;
}

Json witness_to_json(const PathWitness& w) {
    Json j;
    j["n"] = w.n;
    j["waypoints"] = static_cast<int>(w.waypoints.size());
    j["max_abs_psi"] = round12(w.max_abs_psi);
    j["min_influence_margin"] = round12(w.min_influence_margin);
    j["in_cube"] = w.in_cube;
    j["step_bound"] = round12(w.step_bound);
    return j;
}

Json run_suite(const SuiteConfig& config) {
    Json doc;
    doc["seed"] = config.seed;
    doc["nmin"] = config.nmin;
    doc["nmax"] = config.nmax;
    doc["samples"] = config.samples;
    doc["trials"] = config.trials;
    bool all_ok = true;

    // Spectral invariants and signatures.
    Json forms = Json::array();
    for (int n = config.nmin; n <= config.nmax; ++n) {
        const QuadraticForm q = build_form(n);
        const Spectrum s = eigendecompose(q);
        const ExactInertia exact = exact_inertia(q.Q);
        const Eigen::MatrixXd d = s.eigenvalues.asDiagonal();
        const double ortho = (s.P.transpose() * s.P - Eigen::MatrixXd::Identity(n, n))
                                 .cwiseAbs()
                                 .maxCoeff();
        const double diag = (s.P.transpose() * s.Q * s.P - d).cwiseAbs().maxCoeff();
        const bool inertia_match =
            exact == ExactInertia{s.positive, s.zero, s.negative};
        const auto ref = reference::inertia(n);
        const bool ref_match = !ref || (*ref == exact);
        Json f;
        f["n"] = n;
        f["eigenvalues"] = vector_json(s.eigenvalues);
        f["inertia"] = {s.positive, s.zero, s.negative};
        f["orthogonality_error"] = round12(ortho);
        f["diagonalization_error"] = round12(diag);
        f["slice_type"] = slice_type(s).description();
        f["matches_exact_inertia"] = inertia_match;
        f["matches_reference"] = ref ? Json(ref_match) : Json("n/a");
        forms.push_back(std::move(f));
        all_ok &= inertia_match && ref_match && ortho < 1e-10 && diag < 1e-10;
    }
    doc["forms"] = std::move(forms);

    // Restricted identities and collision bases.
    Json restricted = Json::array();
    for (int n = std::max(4, config.nmin); n <= std::min(7, config.nmax); ++n) {
        const QuadraticForm q = build_form(n);
        const RestrictedForm r = restrict_to_symmetric(q);
        const ExactInertia ri = exact_inertia(r.R);
        const auto kernel = kernel_basis(r.R);
        std::vector<RatVec> lifted;
        for (const auto& v : kernel) lifted.push_back(lift_symmetric(n, v));
        const auto square = perfect_square_check(r);
        const Spectrum s = eigendecompose(q);
        const CollisionSpace coll = collision_space(s, lifted);

        Json e;
        e["n"] = n;
        e["scale"] = to_string(r.scale);
        e["polynomial"] = restricted_poly_string(r);
        e["inertia"] = {ri.positive, ri.zero, ri.negative};
        e["kernel_dim"] = static_cast<int>(kernel.size());
        Json kb = Json::array();
        for (const auto& v : lifted) kb.push_back(rat_vec_json(v));
        e["kernel_basis"] = std::move(kb);
        if (square) {
            e["perfect_square"] = {{"coefficient", to_string(square->coefficient)},
                                   {"indices", {square->a, square->b}}};
        } else {
            e["perfect_square"] = nullptr;
        }
        const bool poly_ok = restricted_matches_reference(r);
        const auto dim_ref = reference::collision_dim(n);
        const bool dim_ok = dim_ref && coll.dim == *dim_ref;
        bool b2_ok = true;
        if (const auto ref_b2 = reference::reference_b2(n)) {
            b2_ok = coll.b2() && matches_reference_b2(s, *coll.b2(), *ref_b2,
                                                      reference::kB2Tolerance);
            e["b2"] = coll.b2() ? vector_json(*coll.b2()) : Json(nullptr);
            e["b2_matches_reference"] = b2_ok;
        } else {
            e["b2_matches_reference"] = "n/a";
        }
        e["matches_reference"] = poly_ok && dim_ok;
        restricted.push_back(std::move(e));
        all_ok &= poly_ok && dim_ok && b2_ok && ri.positive == 0;
    }
    doc["restricted"] = std::move(restricted);

    // Brute-force oracle conformance.
    Json oracle = Json::array();
    for (int n = config.nmin; n <= config.nmax; ++n) {
        Rng rng(config.seed + 7919u * static_cast<std::uint64_t>(n));
        int passed = 0;
        for (int trial = 0; trial < config.trials; ++trial) {
            const GamePoint p = random_probabilistic_point(n, rng);
            if (independence_residual(p).relation_ok) ++passed;
        }
        Json o;
        o["n"] = n;
        o["trials"] = config.trials;
        o["passed"] = passed;
        oracle.push_back(std::move(o));
        all_ok &= passed == config.trials;
    }
    doc["oracle"] = std::move(oracle);

    // Component counts.
    Json components = Json::array();
    for (int n = config.nmin; n <= config.nmax; ++n) {
        const Spectrum s = eigendecompose(build_form(n));
        SamplerConfig sc;
        sc.margin_floor = config.margin_floor;
        const SampleCloud cloud =
            sample_gst(s, config.samples, config.seed + static_cast<std::uint64_t>(n), sc);
        const ComponentReport rep = count_components(cloud, config.components);
        Json c = component_report_to_json(rep);
        const auto expected = reference::component_count(n);
        if (expected) {
            c["expected"] = *expected;
            const bool ok = rep.stable_count && *rep.stable_count == *expected;
            c["ok"] = ok;
            all_ok &= ok;
        }
        components.push_back(std::move(c));
    }
    doc["components"] = std::move(components);

    // Path witnesses.
    Json paths = Json::array();
    for (int n = std::max(4, config.nmin); n <= std::min(7, config.nmax); ++n) {
        const QuadraticForm q = build_form(n);
        const Spectrum s = eigendecompose(q);
        const RestrictedForm r = restrict_to_symmetric(q);
        std::vector<RatVec> lifted;
        for (const auto& v : kernel_basis(r.R)) lifted.push_back(lift_symmetric(n, v));
        const CollisionSpace coll = collision_space(s, lifted);
        SamplerConfig sc;
        sc.margin_floor = config.margin_floor;
        const SampleCloud cloud =
            sample_gst(s, 512, config.seed + 100 + static_cast<std::uint64_t>(n), sc);
        Rng rng(config.seed + 200 + static_cast<std::uint64_t>(n));

        Json pj;
        pj["n"] = n;
        if (n == 4) {
            int same_pass = 0, opp_refused = 0;
            const int half = config.path_pairs / 2;
            for (int k = 0; k < half; ++k) {
                auto pick = [&](int sign) {
                    for (;;) {
                        const int i = rng.uniform_index(cloud.size());
                        if (cloud.cylinder_sign[i] == sign) return i;
                    }
                };
                const int a = pick(1), b = pick(1);
                try {
                    build_path(cloud.X.row(a), cloud.X.row(b), s, coll);
                    ++same_pass;
                } catch (const std::exception&) {
                }
                const int c = pick(1), d = pick(-1);
                try {
                    build_path(cloud.X.row(c), cloud.X.row(d), s, coll);
                } catch (const DifferentComponents&) {
                    ++opp_refused;
                }
            }
            pj["same_cylinder_pairs"] = half;
            pj["same_cylinder_passed"] = same_pass;
            pj["opposite_cylinder_pairs"] = half;
            pj["opposite_cylinder_refused"] = opp_refused;
            all_ok &= same_pass == half && opp_refused == half;
        } else {
            int passed = 0;
            double worst_psi = 0.0;
            long total_waypoints = 0;
            for (int k = 0; k < config.path_pairs; ++k) {
                const int a = rng.uniform_index(cloud.size());
                int b = rng.uniform_index(cloud.size());
                if (b == a) b = (b + 1) % cloud.size();
                try {
                    const PathWitness w = build_path(cloud.X.row(a), cloud.X.row(b), s, coll);
                    ++passed;
                    worst_psi = std::max(worst_psi, w.max_abs_psi);
                    total_waypoints += static_cast<long>(w.waypoints.size());
                } catch (const std::exception&) {
                }
            }
            pj["pairs"] = config.path_pairs;
            pj["passed"] = passed;
            pj["max_abs_psi"] = round12(worst_psi);
            pj["mean_waypoints"] =
                passed ? round12(double(total_waypoints) / passed) : 0.0;
            all_ok &= passed == config.path_pairs;
        }
        paths.push_back(std::move(pj));
    }
    doc["paths"] = std::move(paths);

    doc["ok"] = all_ok;
    return doc;
}

}  // namespace gst
