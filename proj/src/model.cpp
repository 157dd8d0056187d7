#include "gst/model.hpp"

#include <cstdint>
#include <sstream>

#include "gst/quadratic.hpp"

namespace gst {

namespace {

Rational binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    boost::multiprecision::cpp_int c = 1;
    for (int i = 0; i < k; ++i) {
        c *= (n - i);
        c /= (i + 1);
    }
    return Rational(c);
}

Rational pow2(int e) { return Rational(boost::multiprecision::cpp_int(1) << e); }

void require_cap(int n, int cap) {
    if (n > cap) {
        std::ostringstream os;
        os << "enumeration cap exceeded: n=" << n << " > cap=" << cap;
        throw EnumerationCapExceeded(os.str());
    }
}

}  // namespace

GamePoint::GamePoint(int n_, RatVec x_) : n(n_), x(std::move(x_)) {
    if (n < 3) throw InvalidN("GamePoint requires n >= 3");
    if (static_cast<int>(x.size()) != n) throw DimensionMismatch("GamePoint: |x| != n");
}

bool GamePoint::probabilistic() const {
    for (const auto& v : x)
        if (v < 0 || v > 1) return false;
    return true;
}

Rational influence_margin(const GamePoint& p) {
    Rational best = 0;
    for (int s = 0; s < p.n; ++s) {
        Rational d = abs(p.x[s] - p.x[p.n - 1 - s]);
        if (d > best) best = d;
    }
    return best;
}

Rational marginal_effect_prob(const GamePoint& p) {
    Rational sum = 0;
    for (int k = 0; k < p.n; ++k) sum += binomial(p.n - 1, k) * p.x[k];
    return sum / pow2(p.n - 1);
}

ResidualReport independence_residual(const GamePoint& p, int cap) {
    return independence_residual(p, {0, 1, 2}, cap);
}

ResidualReport independence_residual(const GamePoint& p, std::array<int, 3> ijk, int cap) {
    require_cap(p.n, cap);
    const int n = p.n;
    const auto [i, j, k] = ijk;
    if (i == j || j == k || i == k || i < 0 || j < 0 || k < 0 || i >= n || j >= n || k >= n)
        throw DimensionMismatch("independence_residual: indices must be distinct and in range");

    // Cause k is pinned to 1 (its value is immaterial: flipping every cause
    // preserves all agreement counts). The other n-1 causes run over all
    // assignments. A player's agreement count is `ones` if its cause is 1,
    // else n - ones.
    std::vector<int> others;
    for (int q = 0; q < n; ++q)
        if (q != k) others.push_back(q);
    int pos_i = -1, pos_j = -1;
    for (size_t t = 0; t < others.size(); ++t) {
        if (others[t] == i) pos_i = static_cast<int>(t);
        if (others[t] == j) pos_j = static_cast<int>(t);
    }

    Rational acc = 0;
    const std::uint32_t total = 1u << (n - 1);
    for (std::uint32_t mask = 0; mask < total; ++mask) {
        const int ones = __builtin_popcount(mask) + 1;  // cause k contributes 1
        const int ki = (mask >> pos_i) & 1u ? ones : n - ones;
        const int kj = (mask >> pos_j) & 1u ? ones : n - ones;
        acc += p.x[ki - 1] * p.x[kj - 1];
    }

    ResidualReport r;
    r.n = n;
    r.x = p;
    r.joint = acc / pow2(n - 1);
    r.marginal = marginal_effect_prob(p);
    r.residual = r.joint - r.marginal * r.marginal;
    r.psi = eval_psi(build_form(n), p.x);
    r.relation_ok = (r.residual == -r.psi);
    return r;
}

bool influence_bruteforce(const GamePoint& p, int cap) {
    require_cap(p.n, cap);
    const int n = p.n;
    // Cause c influences effect e iff flipping c changes x_{k_e} for some
    // assignment of the remaining causes. Flipping a player's own cause maps
    // its agreement count s to n - s + 1; flipping another player's cause
    // shifts the count by one.
    for (int c = 0; c < n; ++c) {
        for (int e = 0; e < n; ++e) {
            bool influenced = false;
            std::vector<int> others;
            for (int q = 0; q < n; ++q)
                if (q != c) others.push_back(q);
            int pos_e = -1;
            for (size_t t = 0; t < others.size(); ++t)
                if (others[t] == e) pos_e = static_cast<int>(t);

            const std::uint32_t total = 1u << (n - 1);
            for (std::uint32_t mask = 0; mask < total && !influenced; ++mask) {
                const int ones_others = __builtin_popcount(mask);
                int ke_c0, ke_c1;
                if (c == e) {
                    // e's own cause flips: agreement count goes s -> n-s+1
                    ke_c0 = n - ones_others;  // c_e = 0: agrees with the zeros
                    ke_c1 = ones_others + 1;  // c_e = 1: agrees with the ones
                } else {
                    // agree_others counts the non-c players agreeing with e
                    // (e included); cause c adds one more iff it matches e.
                    const bool e_is_one = (mask >> pos_e) & 1u;
                    const int agree_others = e_is_one ? ones_others : (n - 1) - ones_others;
                    ke_c0 = agree_others + (e_is_one ? 0 : 1);
                    ke_c1 = agree_others + (e_is_one ? 1 : 0);
                }
                if (p.x[ke_c0 - 1] != p.x[ke_c1 - 1]) influenced = true;
            }
            if (!influenced) return false;
        }
    }
    return true;
}

}  // namespace gst
