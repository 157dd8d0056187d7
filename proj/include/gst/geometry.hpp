// Sampling the solution set, counting its components, and building witness
// paths.
//
// Points are sampled in diagonal coordinates: y_1 free, the positive and
// negative eigenvalue blocks on equal-energy ellipsoids, then mapped by
// x = m + P y with m = (1/2,...,1/2). Since Q m = 0 the shift preserves the
// form, so every accepted x satisfies the independence equation to floating
// precision by construction.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gst/spectral.hpp"

namespace gst {

// ---------------------------------------------------------------- sampling

struct SliceSpec {
    double s = 0.0;  // half-width of the free y_1 interval, > 0
    double t = 0.0;  // shared ellipsoid energy, >= 0
};

struct SamplerConfig {
    double t_max_init = 0.25;     // starting slice energy cap; halved until accepted
    double acceptance_floor = 0.10;
    double margin_floor = 1e-9;   // reject points with influence margin <= this
    double s_half = -1.0;         // y_1 half-width; <0 means sqrt(n)/2
    int shards = 8;               // fixed shard count; seeds derived as seed + shard
    int pilot_attempts = 512;
    int max_halvings = 40;
    long long max_attempts_per_point = 10000;
};

struct SampleCloud {
    int n = 0;
    Eigen::MatrixXd X;  // rows are accepted points in [0,1]^n
    Eigen::MatrixXd Y;  // rows are y = P^T (x - m)
    Eigen::VectorXd t;
    Eigen::VectorXd margin;
    std::vector<int> cylinder_sign;  // sign of y_2 when n == 4, else empty
    Eigen::VectorXd eigenvalues;     // copy of the spectrum's canonical eigenvalues
    std::uint64_t seed = 0;
    SamplerConfig config;
    double t_max_used = 0.0;

    int size() const { return static_cast<int>(X.rows()); }
};

// Draws count points of S_{s,t}: y_1 uniform on (-s,s), each block uniform
// on its sphere then scaled per-axis. Throws EmptySlice if a block is empty.
std::vector<Eigen::VectorXd> sample_slice(const SliceSpec& spec, const Spectrum& s, int count,
                                          std::uint64_t seed);

// Rejection sampler for the full solution set: t uniform on (0, t_max] with
// t_max auto-tuned, mapped into the cube, rejected on cube membership and
// influence margin. Deterministic for a given seed and config (work is split
// into config.shards shards with derived seeds, concatenated in shard
// order). Throws SamplingStalled when a shard exhausts its attempt budget.
SampleCloud sample_gst(const Spectrum& s, int count, std::uint64_t seed,
                       const SamplerConfig& config = {});

// Euclidean distance from y to the span of the collision space's y-basis.
// Equals the x-space distance from x - m to the palindromic subspace.
double distance_to_T(const Eigen::VectorXd& y, const CollisionSpace& coll);

// Influence margin of a floating-point x.
double influence_margin(const Eigen::VectorXd& x);

// ------------------------------------------------------------- components

struct ComponentConfig {
    int eps_steps = 20;
    double eps_min = -1.0;       // <=0: 0.5 * median nearest-neighbor distance
    double eps_max = -1.0;       // <=0: 2.5 * max nearest-neighbor distance
    double min_fraction = 0.01;  // cluster-size threshold for the stable count
    bool use_y_metric = false;   // distances in y instead of x (identical by orthogonality)
};

struct ComponentReport {
    int n = 0;
    int sample_count = 0;
    int min_component_size = 0;
    std::vector<double> epsilon_grid;
    std::vector<int> components_per_epsilon;   // raw counts, nonincreasing
    std::vector<int> significant_per_epsilon;  // counts of clusters >= min_component_size
    std::optional<int> stable_count;           // first >=3-long plateau of significant counts
    int stable_index = -1;                     // grid index where the plateau starts
    std::vector<int> component_sizes;          // significant cluster sizes at the stable epsilon
    double t_min = 0.0;
    // n == 4 only: separation between the two cylinder-sign classes.
    std::optional<double> min_cross_distance;
    std::optional<double> separation_bound;  // 2 sqrt(t_min / lambda_2)
};

// Single-linkage component analysis over the epsilon grid. The raw counts per
// epsilon equal the epsilon-graph component counts (minimum-spanning-tree
// equivalence); the stable count reads the first plateau of length >= 3 among
// counts of clusters of at least min_component_size points.
ComponentReport count_components(const SampleCloud& cloud, const ComponentConfig& config = {});

// ------------------------------------------------------------------ paths

struct PathConfig {
    double step = 1e-2;        // max consecutive waypoint distance
    double t_clearance = 1e-3; // target clearance from the collision set inside slices
    double psi_tol = 1e-8;     // |psi| bound enforced on every waypoint
    double endpoint_psi_tol = 1e-8;
    double cube_tol = 1e-12;
    double t_cap = 1e-2;       // upper bound on the common slice energy
};

struct PathWitness {
    int n = 0;
    std::vector<Eigen::VectorXd> waypoints;  // first/last equal the endpoints
    double max_abs_psi = 0.0;
    double min_influence_margin = 0.0;
    bool in_cube = false;
    double step_bound = 0.0;  // max consecutive distance actually observed
};

struct PathDiagnostics {
    bool pass = false;
    int first_bad_index = -1;
    std::string reason;
    double max_abs_psi = 0.0;
    double min_influence_margin = 0.0;
    double max_step = 0.0;
};

// Connects two solution points through a common low-energy slice: scale the
// endpoints down along straight lines through m, slide the free coordinate,
// rotate each spherical block along great-circle arcs (routing around the
// collision set's in-slice points when the collision space is
// two-dimensional), then scale back up. Throws DifferentComponents when a
// one-point-sphere block has opposite signs at the endpoints, and
// ValidationFailed if the constructed waypoints violate tolerances.
PathWitness build_path(const Eigen::VectorXd& p, const Eigen::VectorXd& q, const Spectrum& s,
                       const CollisionSpace& coll, const PathConfig& config = {});

// Recomputes |psi|, influence margin, cube membership, and the step bound
// for every waypoint.
PathDiagnostics validate_path(const PathWitness& w, const Spectrum& s, const PathConfig& tolerances);

// --------------------------------------------------------------------- io

// CSV with header n,t,margin,x1..xn,y1..yn,cyl (cyl empty unless n == 4).
void write_cloud_csv(std::ostream& os, const SampleCloud& cloud);

// CSV with header i,x1..xn.
void write_waypoints_csv(std::ostream& os, const PathWitness& w);

}  // namespace gst
