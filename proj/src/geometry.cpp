#include "gst/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "gst/rng.hpp"

namespace gst {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct SlicePoint {
    double t = 0.0;
    Eigen::VectorXd y;
};

// One slice draw in canonical y coordinates (y_1 free, blocks on their
// equal-energy ellipsoids).
SlicePoint draw_slice_point(Rng& rng, const Spectrum& s, double s_half, double t) {
    const int n = s.n;
    const int p = s.positive, q = s.negative;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    y(0) = rng.uniform(-s_half, s_half);
    const Eigen::VectorXd up = rng.sphere(p);
    const Eigen::VectorXd un = rng.sphere(q);
    for (int i = 0; i < p; ++i) y(1 + i) = up(i) * std::sqrt(t / s.eigenvalues(1 + i));
    for (int i = 0; i < q; ++i) y(1 + p + i) = un(i) * std::sqrt(t / -s.eigenvalues(1 + p + i));
    return {t, std::move(y)};
}

}  // namespace

std::vector<Eigen::VectorXd> sample_slice(const SliceSpec& spec, const Spectrum& s, int count,
                                          std::uint64_t seed) {
    if (s.positive == 0 || s.negative == 0)
        throw EmptySlice("sample_slice: a definite block is empty");
    if (spec.s <= 0 || spec.t < 0)
        throw std::invalid_argument("sample_slice: requires s > 0 and t >= 0");
    if (s.zero != 1) throw UnexpectedKernelDim("sample_slice: kernel dimension != 1");

    Rng rng(seed);
    std::vector<Eigen::VectorXd> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(draw_slice_point(rng, s, spec.s, spec.t).y);
    return out;
}

double influence_margin(const Eigen::VectorXd& x) {
    const int n = static_cast<int>(x.size());
    double best = 0.0;
    for (int i = 0; i < n; ++i) best = std::max(best, std::abs(x(i) - x(n - 1 - i)));
    return best;
}

SampleCloud sample_gst(const Spectrum& s, int count, std::uint64_t seed,
                       const SamplerConfig& config) {
    const int n = s.n;
    if (s.positive == 0 || s.negative == 0)
        throw EmptySlice("sample_gst: a definite block is empty");
    if (s.zero != 1) throw UnexpectedKernelDim("sample_gst: kernel dimension != 1");
    const double s_half = config.s_half > 0 ? config.s_half : std::sqrt(double(n)) / 2.0;
    const Eigen::VectorXd m = Eigen::VectorXd::Constant(n, 0.5);

    struct Accepted {
        Eigen::VectorXd x, y;
        double t, margin;
    };
    auto attempt = [&](Rng& rng, double t_max) -> std::optional<Accepted> {
        const double t = t_max * (1.0 - rng.uniform01());  // (0, t_max]
        SlicePoint sp = draw_slice_point(rng, s, s_half, t);
        Eigen::VectorXd x = m + s.P * sp.y;
        for (int i = 0; i < n; ++i)
            if (x(i) < 0.0 || x(i) > 1.0) return std::nullopt;
        const double margin = influence_margin(x);
        if (margin <= config.margin_floor) return std::nullopt;
        return Accepted{std::move(x), std::move(sp.y), t, margin};
    };

    // Auto-tune t_max: halve until the pilot acceptance rate clears the floor.
    double t_max = config.t_max_init;
    {
        Rng pilot(seed + static_cast<std::uint64_t>(config.shards));
        bool tuned = false;
        long long tried = 0;
        for (int h = 0; h <= config.max_halvings; ++h) {
            int acc = 0;
            for (int i = 0; i < config.pilot_attempts; ++i, ++tried)
                if (attempt(pilot, t_max)) ++acc;
            if (acc > config.acceptance_floor * config.pilot_attempts) {
                tuned = true;
                break;
            }
            t_max /= 2.0;
        }
        if (!tuned) throw SamplingStalled("sample_gst: auto-tune never reached the acceptance floor", tried);
    }

    // Sharded sampling with derived seeds; concatenation in shard order keeps
    // the result independent of any execution interleaving.
    std::vector<Accepted> points;
    points.reserve(count);
    const int shards = std::max(1, config.shards);
    for (int shard = 0; shard < shards; ++shard) {
        int quota = count / shards + (shard < count % shards ? 1 : 0);
        if (quota == 0) continue;
        Rng rng(seed + static_cast<std::uint64_t>(shard));
        long long budget = config.max_attempts_per_point * quota;
        long long attempts = 0;
        int got = 0;
        while (got < quota) {
            if (attempts++ >= budget)
                throw SamplingStalled("sample_gst: shard exhausted its attempt budget", attempts);
            if (auto a = attempt(rng, t_max)) {
                points.push_back(std::move(*a));
                ++got;
            }
        }
    }

    SampleCloud cloud;
    cloud.n = n;
    cloud.X.resize(count, n);
    cloud.Y.resize(count, n);
    cloud.t.resize(count);
    cloud.margin.resize(count);
    if (n == 4) cloud.cylinder_sign.resize(count);
    for (int i = 0; i < count; ++i) {
        cloud.X.row(i) = points[i].x;
        cloud.Y.row(i) = points[i].y;
        cloud.t(i) = points[i].t;
        cloud.margin(i) = points[i].margin;
        if (n == 4) cloud.cylinder_sign[i] = points[i].y(1) >= 0 ? 1 : -1;
    }
    cloud.eigenvalues = s.eigenvalues;
    cloud.seed = seed;
    cloud.config = config;
    cloud.t_max_used = t_max;
    return cloud;
}

double distance_to_T(const Eigen::VectorXd& y, const CollisionSpace& coll) {
    Eigen::VectorXd r = y;
    // y_basis is orthogonal by construction (b2 has first coordinate 0).
    for (const auto& b : coll.y_basis) {
        const double nb2 = b.squaredNorm();
        if (nb2 > 0) r -= (r.dot(b) / nb2) * b;
    }
    return r.norm();
}

// ------------------------------------------------------------- components

namespace {

struct UnionFind {
    std::vector<int> parent, size;
    explicit UnionFind(int n) : parent(n), size(n, 1) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
        return true;
    }
};

struct MstEdge {
    double w;
    int a, b;
};

// Prim's algorithm on the complete Euclidean graph, O(N^2) time, O(N) space.
std::vector<MstEdge> euclidean_mst(const Eigen::MatrixXd& rows) {
    const int n = static_cast<int>(rows.rows());
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<int> from(n, -1);
    std::vector<char> done(n, 0);
    std::vector<MstEdge> edges;
    edges.reserve(n > 0 ? n - 1 : 0);

    int current = 0;
    done[0] = 1;
    for (int added = 1; added < n; ++added) {
        const auto crow = rows.row(current);
        int next = -1;
        double next_d = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (done[j]) continue;
            const double d2 = (rows.row(j) - crow).squaredNorm();
            if (d2 < best[j]) {
                best[j] = d2;
                from[j] = current;
            }
            if (best[j] < next_d) {
                next_d = best[j];
                next = j;
            }
        }
        done[next] = 1;
        edges.push_back({std::sqrt(best[next]), next, from[next]});
        current = next;
    }
    return edges;
}

}  // namespace

ComponentReport count_components(const SampleCloud& cloud, const ComponentConfig& config) {
    const int n_points = cloud.size();
    if (n_points == 0) throw std::invalid_argument("count_components: empty cloud");

    ComponentReport report;
    report.n = cloud.n;
    report.sample_count = n_points;
    report.t_min = cloud.t.size() ? cloud.t.minCoeff() : 0.0;
    report.min_component_size =
        std::max(3, static_cast<int>(std::lround(config.min_fraction * n_points)));

    const Eigen::MatrixXd& rows = config.use_y_metric ? cloud.Y : cloud.X;
    std::vector<MstEdge> edges = euclidean_mst(rows);
    std::sort(edges.begin(), edges.end(), [](const MstEdge& a, const MstEdge& b) { return a.w < b.w; });

    // Every point's nearest-neighbor edge is an MST edge, so per-node minima
    // of incident MST edges recover the nearest-neighbor distances.
    std::vector<double> nn(n_points, std::numeric_limits<double>::infinity());
    for (const auto& e : edges) {
        nn[e.a] = std::min(nn[e.a], e.w);
        nn[e.b] = std::min(nn[e.b], e.w);
    }
    std::vector<double> nn_sorted = nn;
    std::sort(nn_sorted.begin(), nn_sorted.end());
    const double med_nn = nn_sorted[n_points / 2];
    const double max_nn = nn_sorted.back();

    double eps_min = config.eps_min > 0 ? config.eps_min : 0.5 * med_nn;
    double eps_max = config.eps_max > 0 ? config.eps_max : 2.5 * max_nn;
    if (!(eps_min > 0)) eps_min = 1e-12;
    if (eps_max <= eps_min) eps_max = eps_min * 2;
    const int steps = std::max(2, config.eps_steps);
    report.epsilon_grid.resize(steps);
    const double ratio = std::pow(eps_max / eps_min, 1.0 / (steps - 1));
    for (int g = 0; g < steps; ++g) report.epsilon_grid[g] = eps_min * std::pow(ratio, g);

    // Single pass up the grid: the epsilon-graph components equal the
    // single-linkage forest over MST edges of weight <= epsilon.
    UnionFind uf(n_points);
    size_t next_edge = 0;
    int merged = 0;
    std::vector<std::vector<int>> sig_sizes_per_eps;
    for (double eps : report.epsilon_grid) {
        while (next_edge < edges.size() && edges[next_edge].w <= eps) {
            if (uf.unite(edges[next_edge].a, edges[next_edge].b)) ++merged;
            ++next_edge;
        }
        report.components_per_epsilon.push_back(n_points - merged);
        std::vector<int> sig;
        for (int i = 0; i < n_points; ++i)
            if (uf.find(i) == i && uf.size[i] >= report.min_component_size) sig.push_back(uf.size[i]);
        std::sort(sig.begin(), sig.end(), std::greater<int>());
        report.significant_per_epsilon.push_back(static_cast<int>(sig.size()));
        sig_sizes_per_eps.push_back(std::move(sig));
    }

    // Stable count: smallest-epsilon run of >= 3 equal significant counts >= 1.
    const auto& sig = report.significant_per_epsilon;
    for (size_t i = 0; i < sig.size();) {
        size_t j = i;
        while (j < sig.size() && sig[j] == sig[i]) ++j;
        if (j - i >= 3 && sig[i] >= 1) {
            report.stable_count = sig[i];
            report.stable_index = static_cast<int>(i);
            report.component_sizes = sig_sizes_per_eps[i];
            break;
        }
        i = j;
    }

    // n = 4: separation between the two cylinder-sign classes.
    if (cloud.n == 4 && !cloud.cylinder_sign.empty()) {
        std::vector<int> plus, minus;
        for (int i = 0; i < n_points; ++i)
            (cloud.cylinder_sign[i] > 0 ? plus : minus).push_back(i);
        if (!plus.empty() && !minus.empty()) {
            double best = std::numeric_limits<double>::infinity();
            for (int a : plus)
                for (int b : minus)
                    best = std::min(best, (rows.row(a) - rows.row(b)).squaredNorm());
            report.min_cross_distance = std::sqrt(best);
            if (cloud.eigenvalues.size() >= 2)
                report.separation_bound = 2.0 * std::sqrt(report.t_min / cloud.eigenvalues(1));
        }
    }
    return report;
}

// ------------------------------------------------------------------ paths

namespace {

struct Block {
    std::vector<int> idx;       // y indices of this block
    Eigen::VectorXd sqrt_lam;   // sqrt(|lambda_i|), same order as idx

    int dim() const { return static_cast<int>(idx.size()); }

    Eigen::VectorXd z_of(const Eigen::VectorXd& y) const {
        Eigen::VectorXd z(dim());
        for (int i = 0; i < dim(); ++i) z(i) = y(idx[i]) * sqrt_lam(i);
        return z;
    }
    void apply_z(Eigen::VectorXd& y, const Eigen::VectorXd& z) const {
        for (int i = 0; i < dim(); ++i) y(idx[i]) = z(i) / sqrt_lam(i);
    }
    double min_sqrt_lam() const { return sqrt_lam.minCoeff(); }
    double max_sqrt_lam() const { return sqrt_lam.maxCoeff(); }
};

Eigen::VectorXd slerp(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double phi, double tau) {
    if (phi < 1e-12) return u;
    const double s = std::sin(phi);
    return (std::sin((1.0 - tau) * phi) * u + std::sin(tau * phi) * v) / s;
}

class PathBuilder {
public:
    PathBuilder(const Spectrum& s, const CollisionSpace& coll, const PathConfig& cfg)
        : s_(s), coll_(coll), cfg_(cfg), n_(s.n), m_(Eigen::VectorXd::Constant(s.n, 0.5)) {
        for (int i : s.positive_indices()) {
            pos_.idx.push_back(i);
        }
        for (int i : s.negative_indices()) neg_.idx.push_back(i);
        pos_.sqrt_lam.resize(pos_.dim());
        neg_.sqrt_lam.resize(neg_.dim());
        for (int i = 0; i < pos_.dim(); ++i) pos_.sqrt_lam(i) = std::sqrt(s.eigenvalues(pos_.idx[i]));
        for (int i = 0; i < neg_.dim(); ++i) neg_.sqrt_lam(i) = std::sqrt(-s.eigenvalues(neg_.idx[i]));
    }

    PathWitness run(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
        check_endpoint(p, "p");
        check_endpoint(q, "q");

        PathWitness w;
        w.n = n_;
        if ((p - q).norm() < 1e-12) {
            w.waypoints = {p};
            finalize(w, p, p);
            return w;
        }

        const Eigen::VectorXd yp = s_.P.transpose() * (p - m_);
        const Eigen::VectorXd yq = s_.P.transpose() * (q - m_);
        const double mp = block_energy(pos_, yp);
        const double mq = block_energy(pos_, yq);
        if (mp < 1e-13 || mq < 1e-13)
            throw ValidationFailed("build_path: endpoint slice energy vanishes (on the collision set)", -1);

        // Sign obstruction on 0-sphere blocks.
        check_sign_block(pos_, yp, yq);
        check_sign_block(neg_, yp, yq);

        const double t = choose_t(yp, yq, mp, mq);
        const double ap = std::sqrt(t / mp), aq = std::sqrt(t / mq);

        // p --(straight through m)--> scaled p
        emit_straight(p, m_ + ap * (p - m_));

        // slide the free coordinate, blocks fixed
        Eigen::VectorXd y = ap * yp;
        {
            Eigen::VectorXd y_to = y;
            y_to(0) = aq * yq(0);
            emit_linear_y(y, y_to);
            y = y_to;
        }

        // rotate the blocks within the common slice
        const Eigen::VectorXd yq_scaled = aq * yq;
        move_block(y, pos_, yq_scaled, neg_, t);
        move_block(y, neg_, yq_scaled, pos_, t);

        // scaled q --> q
        emit_straight(m_ + aq * (q - m_), q);

        w.waypoints = std::move(xs_);
        finalize(w, p, q);
        return w;
    }

private:
    void check_endpoint(const Eigen::VectorXd& x, const char* name) const {
        if (x.size() != n_) throw DimensionMismatch("build_path: endpoint size != n");
        for (int i = 0; i < n_; ++i)
            if (x(i) < -cfg_.cube_tol || x(i) > 1.0 + cfg_.cube_tol)
                throw ValidationFailed(std::string("build_path: endpoint ") + name + " outside the cube", -1);
        if (std::abs(s_.psi(x)) > cfg_.endpoint_psi_tol)
            throw ValidationFailed(std::string("build_path: endpoint ") + name + " violates the form", -1);
        if (influence_margin(x) <= 0.0)
            throw ValidationFailed(std::string("build_path: endpoint ") + name + " has zero influence margin", -1);
    }

    double block_energy(const Block& b, const Eigen::VectorXd& y) const {
        return b.z_of(y).squaredNorm();
    }

    void check_sign_block(const Block& b, const Eigen::VectorXd& yp, const Eigen::VectorXd& yq) const {
        if (b.dim() != 1) return;
        const double a = yp(b.idx[0]), c = yq(b.idx[0]);
        if ((a >= 0) != (c >= 0))
            throw DifferentComponents(
                "build_path: endpoints lie on opposite sides of a 0-sphere block");
    }

    double choose_t(const Eigen::VectorXd& yp, const Eigen::VectorXd& yq, double mp, double mq) const {
        double t = std::min({mp, mq, cfg_.t_cap});
        // In-slice waypoints satisfy |x_i - 1/2| <= |y_1|/sqrt(n) + ||blocks||,
        // and both terms scale with sqrt(t); keep a cushion inside the cube.
        const double a = std::max(std::abs(yp(0)) / std::sqrt(mp), std::abs(yq(0)) / std::sqrt(mq));
        const double k = 1.0 / (pos_.min_sqrt_lam() * pos_.min_sqrt_lam()) +
                         1.0 / (neg_.min_sqrt_lam() * neg_.min_sqrt_lam());
        const double rate = a / std::sqrt(double(n_)) + std::sqrt(k);
        const double limit = 0.48 / rate;  // sqrt(t) bound
        t = std::min(t, limit * limit);
        return t;
    }

    void emit(const Eigen::VectorXd& x) {
        if (!xs_.empty() && (xs_.back() - x).norm() < 1e-15) return;
        xs_.push_back(x);
    }

    void emit_straight(const Eigen::VectorXd& from, const Eigen::VectorXd& to) {
        const double len = (to - from).norm();
        const int steps = std::max(1, static_cast<int>(std::ceil(len / cfg_.step)));
        for (int i = 0; i <= steps; ++i) {
            const double tau = double(i) / steps;
            emit(from + tau * (to - from));
        }
    }

    void emit_linear_y(const Eigen::VectorXd& y_from, const Eigen::VectorXd& y_to) {
        const double len = (y_to - y_from).norm();  // equals the x-space length
        const int steps = std::max(1, static_cast<int>(std::ceil(len / cfg_.step)));
        for (int i = 0; i <= steps; ++i) {
            const double tau = double(i) / steps;
            emit(m_ + s_.P * (y_from + tau * (y_to - y_from)));
        }
    }

    // In-slice T obstacle for a block: unit z-direction of the collision
    // basis restricted to the block, when the collision space meets slices.
    std::optional<Eigen::VectorXd> obstacle_dir(const Block& b) const {
        if (coll_.dim != 2) return std::nullopt;
        const auto b2 = coll_.b2();
        if (!b2) return std::nullopt;
        Eigen::VectorXd zb(b.dim());
        for (int i = 0; i < b.dim(); ++i) zb(i) = (*b2)(b.idx[i]) * b.sqrt_lam(i);
        const double norm = zb.norm();
        if (norm < 1e-12) return std::nullopt;
        return Eigen::VectorXd(zb / norm);
    }

    // Rotates `block` from its position in y to the target's position, both
    // on the energy-t sphere in z coordinates, avoiding the in-slice
    // collision points activated by the other (fixed) block.
    void move_block(Eigen::VectorXd& y, const Block& block, const Eigen::VectorXd& y_target,
                    const Block& other, double t) {
        const Eigen::VectorXd z_from = block.z_of(y);
        const Eigen::VectorXd z_to = block.z_of(y_target);
        if ((z_from - z_to).norm() < 1e-14) {
            block.apply_z(y, z_to);
            return;
        }
        if (block.dim() == 1) {
            // signs already checked; nothing to move on S^0
            block.apply_z(y, z_to);
            return;
        }
        const double radius = std::sqrt(t);
        const Eigen::VectorXd u = z_from / z_from.norm();
        const Eigen::VectorXd v = z_to / z_to.norm();

        // Active obstacle signs: the other block must sit near its own
        // collision value with the same sign for a waypoint to approach T.
        std::vector<Eigen::VectorXd> obstacles;
        if (auto dir = obstacle_dir(block)) {
            if (auto other_dir = obstacle_dir(other)) {
                const Eigen::VectorXd z_other = other.z_of(y);
                const double act = std::max(4.0 * cfg_.t_clearance * other.max_sqrt_lam(), 1e-9);
                for (double sigma : {1.0, -1.0})
                    if ((z_other - sigma * radius * (*other_dir)).norm() <= act)
                        obstacles.push_back(sigma * radius * (*dir));
            }
        }

        const double z_clear_target =
            std::min(cfg_.t_clearance * block.max_sqrt_lam(), 0.5 * radius);
        emit_arc(y, block, u, v, radius, obstacles, z_clear_target);
        block.apply_z(y, z_to);
        emit(m_ + s_.P * y);
    }

    // Emits the discretized spherical arc radius*slerp(u,v), routing around
    // obstacles. u, v are unit vectors.
    void emit_arc(Eigen::VectorXd& y, const Block& block, const Eigen::VectorXd& u,
                  const Eigen::VectorXd& v, double radius,
                  const std::vector<Eigen::VectorXd>& obstacles, double z_clear, int depth = 0) {
        const double dot = std::clamp(u.dot(v), -1.0, 1.0);
        double phi = std::acos(dot);

        if (block.dim() == 2) {
            emit_circle_arc(y, block, u, v, radius, obstacles, z_clear);
            return;
        }

        // Antipodal endpoints: no unique great circle; insert a deterministic
        // waypoint orthogonal to u.
        if (phi > kPi - 1e-6) {
            const Eigen::VectorXd r = orthogonal_unit(u, obstacles);
            emit_arc(y, block, u, r, radius, obstacles, z_clear, depth + 1);
            emit_arc(y, block, r, v, radius, obstacles, z_clear, depth + 1);
            return;
        }

        if (depth < 3 && !obstacles.empty()) {
            const double eff = effective_clearance(u, v, radius, obstacles, z_clear);
            if (arc_min_distance(u, v, phi, radius, obstacles) < eff) {
                // Detour via a point orthogonal to the obstacle direction.
                const Eigen::VectorXd r = detour_point(u, v, obstacles);
                emit_arc(y, block, u, r, radius, obstacles, z_clear, depth + 1);
                emit_arc(y, block, r, v, radius, obstacles, z_clear, depth + 1);
                return;
            }
        }

        const double arc_len_y = phi * radius / block.min_sqrt_lam();
        const int steps = std::max(1, static_cast<int>(std::ceil(arc_len_y / cfg_.step)));
        for (int i = 1; i <= steps; ++i) {
            const Eigen::VectorXd g = slerp(u, v, phi, double(i) / steps);
            block.apply_z(y, radius * g);
            emit(m_ + s_.P * y);
        }
    }

    // Circle case: choose the rotation direction whose swept arc clears the
    // active obstacles; with at most one active obstacle one direction always
    // exists. Falls back to the direction with the larger minimum distance.
    void emit_circle_arc(Eigen::VectorXd& y, const Block& block, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& v, double radius,
                         const std::vector<Eigen::VectorXd>& obstacles, double z_clear) {
        const double theta_u = std::atan2(u(1), u(0));
        const double theta_v = std::atan2(v(1), v(0));
        double delta = theta_v - theta_u;
        while (delta <= -kPi) delta += 2 * kPi;
        while (delta > kPi) delta -= 2 * kPi;
        const double candidates[2] = {delta, delta > 0 ? delta - 2 * kPi : delta + 2 * kPi};

        const double eff = effective_clearance(u, v, radius, obstacles, z_clear);
        double chosen = candidates[0];
        double best_min = -1.0;
        for (double cand : candidates) {
            double min_d = std::numeric_limits<double>::infinity();
            for (const auto& ob : obstacles) {
                const double theta_o = std::atan2(ob(1), ob(0));
                // angular distance from the swept arc to the obstacle
                double rel = theta_o - theta_u;
                while (rel <= -kPi) rel += 2 * kPi;
                while (rel > kPi) rel -= 2 * kPi;
                double ang;
                if (cand > 0) {
                    const double r = rel < 0 ? rel + 2 * kPi : rel;
                    ang = r <= cand ? 0.0 : std::min(r - cand, 2 * kPi - r);
                } else {
                    const double r = rel > 0 ? rel - 2 * kPi : rel;
                    ang = r >= cand ? 0.0 : std::min(cand - r, 2 * kPi + r);
                }
                min_d = std::min(min_d, 2 * radius * std::sin(std::min(ang, kPi) / 2.0));
            }
            if (min_d >= eff) {
                chosen = cand;
                best_min = min_d;
                break;
            }
            if (min_d > best_min) {
                best_min = min_d;
                chosen = cand;
            }
        }

        const double arc_len_y = std::abs(chosen) * radius / block.min_sqrt_lam();
        const int steps = std::max(1, static_cast<int>(std::ceil(arc_len_y / cfg_.step)));
        for (int i = 1; i <= steps; ++i) {
            const double th = theta_u + chosen * double(i) / steps;
            Eigen::VectorXd g(2);
            g << std::cos(th), std::sin(th);
            block.apply_z(y, radius * g);
            emit(m_ + s_.P * y);
        }
    }

    // Clearance cannot exceed what the endpoints themselves satisfy.
    static double effective_clearance(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                      double radius, const std::vector<Eigen::VectorXd>& obstacles,
                                      double z_clear) {
        double eff = z_clear;
        for (const auto& ob : obstacles) {
            eff = std::min(eff, 0.45 * (radius * u - ob).norm());
            eff = std::min(eff, 0.45 * (radius * v - ob).norm());
        }
        return eff;
    }

    static double arc_min_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double phi,
                                   double radius, const std::vector<Eigen::VectorXd>& obstacles) {
        double best = std::numeric_limits<double>::infinity();
        constexpr int kProbe = 64;
        for (int i = 0; i <= kProbe; ++i) {
            const Eigen::VectorXd g = radius * slerp(u, v, phi, double(i) / kProbe);
            for (const auto& ob : obstacles) best = std::min(best, (g - ob).norm());
        }
        return best;
    }

    // A unit vector orthogonal to the obstacle direction (and well away from
    // u), chosen deterministically.
    static Eigen::VectorXd orthogonal_unit(const Eigen::VectorXd& u,
                                           const std::vector<Eigen::VectorXd>& obstacles) {
        const int d = static_cast<int>(u.size());
        Eigen::VectorXd best = Eigen::VectorXd::Zero(d);
        double best_score = -1.0;
        for (int k = 0; k < d; ++k) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
            e(k) = 1.0;
            Eigen::VectorXd w = e - (e.dot(u)) * u;
            for (const auto& ob : obstacles) {
                const Eigen::VectorXd od = ob.normalized();
                w -= (w.dot(od)) * od;
            }
            const double norm = w.norm();
            if (norm < 1e-9) continue;
            w /= norm;
            const double score = 1.0 - std::abs(w.dot(u));
            if (score > best_score) {
                best_score = score;
                best = w;
            }
        }
        if (best_score < 0) {  // degenerate; fall back to any orthogonal of u
            Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
            e(u.cwiseAbs().minCoeff() == std::abs(u(0)) ? 0 : d - 1) = 1.0;
            best = (e - e.dot(u) * u).normalized();
        }
        return best;
    }

    static Eigen::VectorXd detour_point(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                        const std::vector<Eigen::VectorXd>& obstacles) {
        // Midpoint of the chord, pushed orthogonal to the obstacle direction.
        Eigen::VectorXd mid = (u + v);
        if (mid.norm() < 1e-9) mid = u;  // antipodal handled upstream
        mid.normalize();
        for (const auto& ob : obstacles) {
            const Eigen::VectorXd od = ob.normalized();
            mid -= (mid.dot(od)) * od;
        }
        if (mid.norm() < 1e-9) return orthogonal_unit(u, obstacles);
        return mid.normalized();
    }

    void finalize(PathWitness& w, const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
        if (!w.waypoints.empty()) {
            w.waypoints.front() = p;
            w.waypoints.back() = q;
        }
        w.max_abs_psi = 0.0;
        w.min_influence_margin = std::numeric_limits<double>::infinity();
        w.in_cube = true;
        w.step_bound = 0.0;
        for (size_t i = 0; i < w.waypoints.size(); ++i) {
            const auto& x = w.waypoints[i];
            w.max_abs_psi = std::max(w.max_abs_psi, std::abs(s_.psi(x)));
            w.min_influence_margin = std::min(w.min_influence_margin, influence_margin(x));
            for (int c = 0; c < n_; ++c)
                if (x(c) < -cfg_.cube_tol || x(c) > 1.0 + cfg_.cube_tol) w.in_cube = false;
            if (i > 0) w.step_bound = std::max(w.step_bound, (x - w.waypoints[i - 1]).norm());
        }
    }

    const Spectrum& s_;
    const CollisionSpace& coll_;
    PathConfig cfg_;
    int n_;
    Eigen::VectorXd m_;
    Block pos_, neg_;
    std::vector<Eigen::VectorXd> xs_;
};

PathWitness build_and_check(const Eigen::VectorXd& p, const Eigen::VectorXd& q, const Spectrum& s,
                            const CollisionSpace& coll, const PathConfig& config) {
    PathBuilder builder(s, coll, config);
    PathWitness w = builder.run(p, q);
    PathDiagnostics d = validate_path(w, s, config);
    if (!d.pass) throw ValidationFailed("build_path: " + d.reason, d.first_bad_index);
    return w;
}

}  // namespace

PathWitness build_path(const Eigen::VectorXd& p, const Eigen::VectorXd& q, const Spectrum& s,
                       const CollisionSpace& coll, const PathConfig& config) {
    return build_and_check(p, q, s, coll, config);
}

PathDiagnostics validate_path(const PathWitness& w, const Spectrum& s, const PathConfig& tol) {
    PathDiagnostics d;
    d.min_influence_margin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < w.waypoints.size(); ++i) {
        const auto& x = w.waypoints[i];
        const double psi = std::abs(s.psi(x));
        d.max_abs_psi = std::max(d.max_abs_psi, psi);
        if (psi > tol.psi_tol) {
            d.first_bad_index = static_cast<int>(i);
            d.reason = "psi tolerance exceeded";
            return d;
        }
        const double margin = influence_margin(x);
        d.min_influence_margin = std::min(d.min_influence_margin, margin);
        if (margin <= 0.0) {
            d.first_bad_index = static_cast<int>(i);
            d.reason = "influence margin vanished";
            return d;
        }
        for (int c = 0; c < x.size(); ++c) {
            if (x(c) < -tol.cube_tol || x(c) > 1.0 + tol.cube_tol) {
                d.first_bad_index = static_cast<int>(i);
                d.reason = "waypoint left the cube";
                return d;
            }
        }
        if (i > 0) {
            const double step = (x - w.waypoints[i - 1]).norm();
            d.max_step = std::max(d.max_step, step);
            if (step > tol.step * 1.05) {
                d.first_bad_index = static_cast<int>(i);
                d.reason = "step bound exceeded";
                return d;
            }
        }
    }
    d.pass = true;
    return d;
}

// --------------------------------------------------------------------- io

namespace {

void write_double(std::ostream& os, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    os << buf;
}

}  // namespace

void write_cloud_csv(std::ostream& os, const SampleCloud& cloud) {
    os << "n,t,margin";
    for (int i = 1; i <= cloud.n; ++i) os << ",x" << i;
    for (int i = 1; i <= cloud.n; ++i) os << ",y" << i;
    os << ",cyl\n";
    for (int r = 0; r < cloud.size(); ++r) {
        os << cloud.n << ',';
        write_double(os, cloud.t(r));
        os << ',';
        write_double(os, cloud.margin(r));
        for (int c = 0; c < cloud.n; ++c) {
            os << ',';
            write_double(os, cloud.X(r, c));
        }
        for (int c = 0; c < cloud.n; ++c) {
            os << ',';
            write_double(os, cloud.Y(r, c));
        }
        os << ',';
        if (!cloud.cylinder_sign.empty()) os << cloud.cylinder_sign[r];
        os << '\n';
    }
}

void write_waypoints_csv(std::ostream& os, const PathWitness& w) {
    os << "i";
    for (int i = 1; i <= w.n; ++i) os << ",x" << i;
    os << '\n';
    for (size_t r = 0; r < w.waypoints.size(); ++r) {
        os << r;
        for (int c = 0; c < w.n; ++c) {
            os << ',';
            write_double(os, w.waypoints[r](c));
        }
        os << '\n';
    }
}

}  // namespace gst
