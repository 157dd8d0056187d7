// Seeded RNG with self-contained distributions.
//
// std::mt19937_64 supplies the bits; the uniform/normal transforms are
// implemented here rather than via std::*_distribution so that a given seed
// reproduces the same stream on every standard library.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

namespace gst {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // Uniform in [0,1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Marsaglia polar method; one spare cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // Uniform direction on S^{dim-1}.
    Eigen::VectorXd sphere(int dim) {
        Eigen::VectorXd v(dim);
        double norm2;
        do {
            for (int i = 0; i < dim; ++i) v(i) = normal();
            norm2 = v.squaredNorm();
        } while (norm2 == 0.0);
        return v / std::sqrt(norm2);
    }

    int uniform_index(int count) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(count)); }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace gst
