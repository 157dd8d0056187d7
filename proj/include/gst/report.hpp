// Full-suite orchestration and serialization for the CLI.
#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

#include "gst/geometry.hpp"

namespace gst {

using Json = nlohmann::ordered_json;

// Rounds to 12 significant digits so serialized output is stable.
double round12(double v);
std::string format12(double v);

// Display form of scale * R, e.g. "-1/2*x1^2 + x1*x2 - 1/2*x2^2".
std::string restricted_poly_string(const RestrictedForm& r);

// Exact comparison of scale * R against the known-good coefficient table
// (false when no table entry exists for r.n).
bool restricted_matches_reference(const RestrictedForm& r);

struct SuiteConfig {
    int nmin = 3;
    int nmax = 10;
    std::uint64_t seed = 1;
    int samples = 10000;        // component-analysis cloud size per n
    int trials = 100;           // oracle trials per n
    int path_pairs = 10;        // witness pairs per n in [4,7]
    double margin_floor = 0.05; // component-analysis sampling profile
    ComponentConfig components;
};

// Runs the whole suite (forms, restricted identities, collision bases,
// oracle conformance, component counts, path witnesses) and returns one
// document. doc["ok"] is true iff every check passed.
Json run_suite(const SuiteConfig& config);

Json cloud_to_json(const SampleCloud& cloud);
Json component_report_to_json(const ComponentReport& report);
Json witness_to_json(const PathWitness& w);

}  // namespace gst
