// Command-line front end: one subcommand per claim family.
//
// Exit codes: 0 success, 1 check/validation failure, 2 usage error,
// 3 different-components refusal.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gst/model.hpp"
#include "gst/reference.hpp"
#include "gst/report.hpp"
#include "gst/rng.hpp"

namespace {

using namespace gst;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDifferentComponents = 3;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("GST_SEED")) {
        char* end = nullptr;
        const auto v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
    }
    return 1;
}

struct Output {
    std::string path;
    std::string format = "text";

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            if (!text.empty() && text.back() != '\n') std::cout << '\n';
        } else {
            std::ofstream os(path, std::ios::binary);
            os << text;
        }
    }
    void write_json(const Json& j) const { write(j.dump(2) + "\n"); }
};

struct CollisionBundle {
    QuadraticForm q;
    Spectrum s;
    RestrictedForm r;
    std::vector<RatVec> lifted;
    CollisionSpace coll;
};

CollisionBundle make_bundle(int n) {
    CollisionBundle b{build_form(n), {}, {}, {}, {}};
    b.s = eigendecompose(b.q);
    b.r = restrict_to_symmetric(b.q);
    for (const auto& v : kernel_basis(b.r.R)) b.lifted.push_back(lift_symmetric(n, v));
    b.coll = collision_space(b.s, b.lifted);
    return b;
}

std::string rational_matrix_text(const RatMat& m) {
    std::ostringstream os;
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) os << (j ? " " : "") << to_string(m(i, j));
        os << '\n';
    }
    return os.str();
}

int cmd_form(int n, const Output& out) {
    const QuadraticForm q = build_form(n);
    const Spectrum s = eigendecompose(q);
    const ExactInertia inertia = exact_inertia(q.Q);
    const SliceType st = slice_type(s);

    if (out.format == "json") {
        Json j;
        j["n"] = n;
        Json rows = Json::array();
        for (int i = 0; i < n; ++i) {
            Json row = Json::array();
            for (int c = 0; c < n; ++c) row.push_back(to_string(q.Q(i, c)));
            rows.push_back(std::move(row));
        }
        j["Q"] = std::move(rows);
        Json eig = Json::array();
        for (int i = 0; i < n; ++i) eig.push_back(round12(s.eigenvalues(i)));
        j["eigenvalues"] = std::move(eig);
        j["inertia"] = {inertia.positive, inertia.zero, inertia.negative};
        j["slice_type"] = st.description();
        out.write_json(j);
    } else {
        std::ostringstream os;
        os << "Q_" << n << " (exact):\n" << rational_matrix_text(q.Q);
        os << "eigenvalues:";
        for (int i = 0; i < n; ++i) os << ' ' << format12(s.eigenvalues(i));
        os << "\ninertia (p,z,q): (" << inertia.positive << ", " << inertia.zero << ", "
           << inertia.negative << ")\n";
        os << "slice type: " << st.description() << '\n';
        out.write(os.str());
    }
    return kExitOk;
}

int cmd_restricted(int n, const Output& out) {
    const CollisionBundle b = make_bundle(n);
    const ExactInertia ri = exact_inertia(b.r.R);
    const auto square = perfect_square_check(b.r);

    const bool have_reference = reference::restricted_polynomial(n).has_value();
    const bool poly_ok = have_reference && restricted_matches_reference(b.r);
    const auto ref_b2 = reference::reference_b2(n);
    std::optional<bool> b2_ok;
    if (ref_b2 && b.coll.b2())
        b2_ok = matches_reference_b2(b.s, *b.coll.b2(), *ref_b2, reference::kB2Tolerance);

    if (out.format == "json") {
        Json j;
        j["n"] = n;
        j["scale"] = to_string(b.r.scale);
        j["polynomial"] = restricted_poly_string(b.r);
        j["inertia"] = {ri.positive, ri.zero, ri.negative};
        j["kernel_dim"] = static_cast<int>(b.lifted.size());
        Json kb = Json::array();
        for (const auto& v : b.lifted) {
            Json vec = Json::array();
            for (const auto& e : v) vec.push_back(to_string(e));
            kb.push_back(std::move(vec));
        }
        j["kernel_basis"] = std::move(kb);
        if (square)
            j["perfect_square"] = {{"coefficient", to_string(square->coefficient)},
                                   {"indices", {square->a, square->b}}};
        else
            j["perfect_square"] = nullptr;
        if (b.coll.b2()) {
            Json bv = Json::array();
            for (int i = 0; i < n; ++i) bv.push_back(round12((*b.coll.b2())(i)));
            j["b2"] = std::move(bv);
        }
        j["reference_match"] = have_reference
                                   ? Json(poly_ok && (!b2_ok || *b2_ok))
                                   : Json("n/a");
        out.write_json(j);
    } else {
        std::ostringstream os;
        os << "restricted form, n=" << n << " (scale " << to_string(b.r.scale) << "):\n  "
           << restricted_poly_string(b.r) << '\n';
        os << "inertia (p,z,q): (" << ri.positive << ", " << ri.zero << ", " << ri.negative
           << ")\n";
        os << "kernel (lifted), dim " << b.lifted.size() << ":\n";
        for (const auto& v : b.lifted) {
            os << "  (";
            for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << to_string(v[i]);
            os << ")\n";
        }
        if (square)
            os << "perfect square: -" << to_string(square->coefficient) << "*(x" << square->a
               << " - x" << square->b << ")^2\n";
        else
            os << "perfect square: none\n";
        if (b.coll.b2()) {
            os << "b2:";
            for (int i = 0; i < n; ++i) os << ' ' << format12((*b.coll.b2())(i));
            os << '\n';
        }
        if (have_reference) {
            os << "reference match: " << ((poly_ok && (!b2_ok || *b2_ok)) ? "true" : "false")
               << '\n';
        } else {
            os << "reference match: n/a\n";
        }
        out.write(os.str());
    }
    return kExitOk;
}

int cmd_oracle(int n, int trials, std::uint64_t seed, const std::string& inject,
               const Output& out) {
    std::vector<GamePoint> points;
    if (!inject.empty()) {
        points.emplace_back(n, parse_rational_vector(inject));
    } else {
        Rng rng(seed + 7919u * static_cast<std::uint64_t>(n));
        for (int k = 0; k < trials; ++k) {
            RatVec x(n);
            for (int i = 0; i < n; ++i) {
                const auto den = 1 + rng.raw() % 64;
                const auto num = rng.raw() % (den + 1);
                x[i] = Rational(boost::multiprecision::cpp_int(num),
                                boost::multiprecision::cpp_int(den));
            }
            points.emplace_back(n, std::move(x));
        }
    }

    int passed = 0;
    Json details = Json::array();
    for (const auto& p : points) {
        const ResidualReport r = independence_residual(p);
        if (r.relation_ok) ++passed;
        if (!inject.empty() || !r.relation_ok) {
            Json d;
            Json xv = Json::array();
            for (const auto& e : p.x) xv.push_back(to_string(e));
            d["x"] = std::move(xv);
            d["marginal"] = to_string(r.marginal);
            d["joint"] = to_string(r.joint);
            d["residual"] = to_string(r.residual);
            d["psi"] = to_string(r.psi);
            d["relation_ok"] = r.relation_ok;
            details.push_back(std::move(d));
        }
    }
    const int total = static_cast<int>(points.size());

    if (out.format == "json") {
        Json j;
        j["n"] = n;
        j["trials"] = total;
        j["passed"] = passed;
        if (!details.empty()) j["details"] = std::move(details);
        out.write_json(j);
    } else {
        std::ostringstream os;
        os << "oracle n=" << n << ": " << passed << "/" << total << " residual == -psi\n";
        for (const auto& d : details)
            os << "  x=" << d["x"].dump() << " residual=" << d["residual"].get<std::string>()
               << " psi=" << d["psi"].get<std::string>()
               << (d["relation_ok"].get<bool>() ? " ok" : " MISMATCH") << '\n';
        out.write(os.str());
    }
    return passed == total ? kExitOk : kExitCheckFailed;
}

int cmd_components(int n, int samples, std::uint64_t seed, double margin_floor,
                   const ComponentConfig& cc, bool check, const std::string& cloud_out,
                   const Output& out) {
    const Spectrum s = eigendecompose(build_form(n));
    SamplerConfig sc;
    sc.margin_floor = margin_floor;
    const SampleCloud cloud = sample_gst(s, samples, seed, sc);
    if (!cloud_out.empty()) {
        std::ofstream os(cloud_out, std::ios::binary);
        write_cloud_csv(os, cloud);
    }
    if (out.format == "csv") {
        std::ostringstream os;
        write_cloud_csv(os, cloud);
        out.write(os.str());
        return kExitOk;
    }
    const ComponentReport rep = count_components(cloud, cc);

    Json j = component_report_to_json(rep);
    const auto expected = reference::component_count(n);
    bool ok = true;
    if (check) {
        ok = expected && rep.stable_count && *rep.stable_count == *expected;
        j["expected"] = expected ? Json(*expected) : Json(nullptr);
        j["ok"] = ok;
    }

    if (out.format == "json") {
        out.write_json(j);
    } else {
        std::ostringstream os;
        os << "components n=" << n << " samples=" << rep.sample_count << " t_max="
           << format12(cloud.t_max_used) << "\n";
        os << "  eps:";
        for (double e : rep.epsilon_grid) os << ' ' << format12(e);
        os << "\n  raw:";
        for (int c : rep.components_per_epsilon) os << ' ' << c;
        os << "\n  sig:";
        for (int c : rep.significant_per_epsilon) os << ' ' << c;
        os << '\n';
        if (rep.stable_count)
            os << "  stable count: " << *rep.stable_count << " (from grid index "
               << rep.stable_index << ")\n";
        else
            os << "  warning: no stable plateau (>=3 equal consecutive counts) in the grid\n";
        if (rep.min_cross_distance)
            os << "  n=4 separation: min cross distance " << format12(*rep.min_cross_distance)
               << " vs bound " << format12(*rep.separation_bound) << '\n';
        if (check) os << "  check: " << (ok ? "pass" : "FAIL") << '\n';
        out.write(os.str());
    }
    return (!check || ok) ? kExitOk : kExitCheckFailed;
}

int cmd_path(int n, std::uint64_t seed, bool random_pair, bool opposite, const std::string& from,
             const std::string& to, double step, const std::string& waypoints_out,
             const Output& out) {
    const CollisionBundle b = make_bundle(n);
    Eigen::VectorXd p, q;

    if (random_pair) {
        SamplerConfig sc;
        sc.margin_floor = 0.05;
        const SampleCloud cloud = sample_gst(b.s, 512, seed, sc);
        Rng rng(seed + 31);
        if (n == 4 && opposite) {
            auto pick = [&](int sign) {
                for (;;) {
                    const int i = rng.uniform_index(cloud.size());
                    if (cloud.cylinder_sign[i] == sign) return i;
                }
            };
            p = cloud.X.row(pick(1));
            q = cloud.X.row(pick(-1));
        } else if (n == 4) {
            auto pick = [&](int sign) {
                for (;;) {
                    const int i = rng.uniform_index(cloud.size());
                    if (cloud.cylinder_sign[i] == sign) return i;
                }
            };
            p = cloud.X.row(pick(1));
            q = cloud.X.row(pick(1));
        } else {
            const int a = rng.uniform_index(cloud.size());
            int c = rng.uniform_index(cloud.size());
            if (c == a) c = (c + 1) % cloud.size();
            p = cloud.X.row(a);
            q = cloud.X.row(c);
        }
    } else {
        if (from.empty() || to.empty())
            throw CLI::ValidationError("path", "need --random-pair or both --from and --to");
        p = to_double(parse_rational_vector(from));
        q = to_double(parse_rational_vector(to));
        if (p.size() != n || q.size() != n)
            throw CLI::ValidationError("path", "--from/--to must have n entries");
    }

    PathConfig cfg;
    cfg.step = step;
    const PathWitness w = build_path(p, q, b.s, b.coll, cfg);
    const PathDiagnostics d = validate_path(w, b.s, cfg);
    if (!waypoints_out.empty()) {
        std::ofstream os(waypoints_out, std::ios::binary);
        write_waypoints_csv(os, w);
    }

    if (out.format == "csv") {
        std::ostringstream os;
        write_waypoints_csv(os, w);
        out.write(os.str());
    } else if (out.format == "json") {
        Json j = witness_to_json(w);
        j["validated"] = d.pass;
        out.write_json(j);
    } else {
        std::ostringstream os;
        os << "path n=" << n << ": " << w.waypoints.size() << " waypoints, max|psi|="
           << format12(w.max_abs_psi) << ", min margin=" << format12(w.min_influence_margin)
           << ", step<=" << format12(w.step_bound) << ", in cube: "
           << (w.in_cube ? "yes" : "no") << '\n';
        os << "validated: " << (d.pass ? "pass" : "FAIL") << '\n';
        out.write(os.str());
    }
    return d.pass ? kExitOk : kExitCheckFailed;
}

int cmd_report(const SuiteConfig& cfg, const Output& out) {
    const Json doc = run_suite(cfg);
    if (out.format == "text") {
        std::ostringstream os;
        os << "suite ok: " << (doc["ok"].get<bool>() ? "true" : "false") << '\n';
        os << doc.dump(2) << '\n';
        out.write(os.str());
    } else {
        out.write_json(doc);
    }
    return doc["ok"].get<bool>() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"independence/influence solution-set toolkit"};
    app.require_subcommand(1);

    int n = 5;
    int nmax = 10;
    std::uint64_t seed = default_seed();
    int samples = 10000;
    int trials = 100;
    Output out;
    double eps_min = -1, eps_max = -1;
    int eps_steps = 20;
    double margin_floor = 0.05;
    bool check = false;
    std::string inject_x, from, to, cloud_out, waypoints_out;
    bool random_pair = false, opposite = false;
    double step = 1e-2;

    auto add_common = [&](CLI::App* cmd, bool with_n = true) {
        if (with_n) cmd->add_option("--n", n, "player count (n >= 3)");
        cmd->add_option("--seed", seed, "RNG seed (default: GST_SEED env or 1)");
        cmd->add_option("--format", out.format, "text | json | csv")
            ->check(CLI::IsMember({"text", "json", "csv"}));
        cmd->add_option("--out", out.path, "output file (default stdout)");
    };

    auto* form = app.add_subcommand("form", "exact Q_n, eigenvalues, inertia, slice type");
    add_common(form);

    auto* restricted =
        app.add_subcommand("restricted", "restricted form, kernel, perfect square, b-vectors");
    add_common(restricted);

    auto* oracle = app.add_subcommand("oracle", "brute-force independence-residual conformance");
    add_common(oracle);
    oracle->add_option("--trials", trials, "random rational vectors to test");
    oracle->add_option("--x", inject_x, "test one exact vector, e.g. \"1,0,0\"");

    auto* components = app.add_subcommand("components", "sample the solution set and count components");
    add_common(components);
    components->add_option("--samples", samples, "accepted sample count");
    components->add_option("--eps-min", eps_min, "epsilon grid start (default: from NN distances)");
    components->add_option("--eps-max", eps_max, "epsilon grid end");
    components->add_option("--eps-steps", eps_steps, "epsilon grid size");
    components->add_option("--margin-floor", margin_floor,
                           "influence-margin rejection floor for this analysis");
    components->add_flag("--check", check, "exit 1 unless the stable count matches the table");
    components->add_option("--cloud-out", cloud_out, "also write the sampled cloud as CSV");

    auto* path = app.add_subcommand("path", "build and validate a witness path");
    add_common(path);
    path->add_flag("--random-pair", random_pair, "draw endpoints from a seeded sample");
    path->add_flag("--opposite-cylinders", opposite, "n=4: endpoints in opposite cylinders");
    path->add_option("--from", from, "first endpoint, comma-separated exact coordinates");
    path->add_option("--to", to, "second endpoint");
    path->add_option("--step", step, "max waypoint spacing");
    path->add_option("--waypoints-out", waypoints_out, "write waypoints CSV");

    auto* report = app.add_subcommand("report", "full suite over an n range, one JSON document");
    add_common(report, false);
    report->add_option("--nmax", nmax, "largest n (default 10)");
    report->add_option("--samples", samples, "component-analysis samples per n");
    report->add_option("--trials", trials, "oracle trials per n");
    report->add_option("--margin-floor", margin_floor, "component-analysis margin floor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (form->parsed()) return cmd_form(n, out);
        if (restricted->parsed()) return cmd_restricted(n, out);
        if (oracle->parsed()) return cmd_oracle(n, trials, seed, inject_x, out);
        if (components->parsed()) {
            ComponentConfig cc;
            cc.eps_min = eps_min;
            cc.eps_max = eps_max;
            cc.eps_steps = eps_steps;
            return cmd_components(n, samples, seed, margin_floor, cc, check, cloud_out, out);
        }
        if (path->parsed())
            return cmd_path(n, seed, random_pair, opposite, from, to, step, waypoints_out, out);
        if (report->parsed()) {
            SuiteConfig cfg;
            cfg.seed = seed;
            cfg.nmax = nmax;
            cfg.samples = samples;
            cfg.trials = trials;
            cfg.margin_floor = margin_floor;
            return cmd_report(cfg, out);
        }
    } catch (const DifferentComponents& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kExitDifferentComponents;
    } catch (const InvalidN& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const EnumerationCapExceeded& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DimensionMismatch& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ValidationFailed& e) {
        std::cerr << "validation failed: " << e.what() << '\n';
        return kExitCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
    return kExitUsage;
}
