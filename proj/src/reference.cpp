#include "gst/reference.hpp"

namespace gst {
namespace reference {

std::optional<Rational> restricted_scale(int n) {
    switch (n) {
        case 4: return Rational(8);
        case 5: return Rational(64);
        case 6: return Rational(256);
        case 7: return Rational(1024);
        default: return std::nullopt;
    }
}

std::optional<std::vector<PolyTerm>> restricted_polynomial(int n) {
    switch (n) {
        case 4:
            return std::vector<PolyTerm>{
                {1, 1, Rational(-1, 2)}, {1, 2, Rational(1)}, {2, 2, Rational(-1, 2)}};
        case 5:
            return std::vector<PolyTerm>{{1, 1, Rational(-3)}, {1, 3, Rational(6)}, {3, 3, Rational(-3)}};
        case 6:
            return std::vector<PolyTerm>{{1, 1, Rational(-7)},  {1, 2, Rational(-6)},
                                         {1, 3, Rational(20)},  {2, 2, Rational(-15)},
                                         {2, 3, Rational(36)},  {3, 3, Rational(-28)}};
        case 7:
            return std::vector<PolyTerm>{{1, 1, Rational(-15)}, {1, 2, Rational(-20)},
                                         {1, 3, Rational(30)},  {1, 4, Rational(20)},
                                         {2, 2, Rational(-60)}, {2, 3, Rational(20)},
                                         {2, 4, Rational(120)}, {3, 3, Rational(-15)},
                                         {3, 4, Rational(-20)}, {4, 4, Rational(-60)}};
        default:
            return std::nullopt;
    }
}

std::optional<std::optional<PerfectSquare>> perfect_square(int n) {
    switch (n) {
        case 4: return std::optional<PerfectSquare>{PerfectSquare{Rational(1, 2), 1, 2}};
        case 5: return std::optional<PerfectSquare>{PerfectSquare{Rational(3), 1, 3}};
        case 6:
        case 7: return std::optional<PerfectSquare>{std::nullopt};
        default: return std::nullopt;
    }
}

std::optional<int> collision_dim(int n) {
    switch (n) {
        case 4: return 1;
        case 5: return 2;
        case 6: return 1;
        case 7: return 2;
        default: return std::nullopt;
    }
}

std::optional<Eigen::VectorXd> reference_b2(int n) {
    if (n == 5) {
        Eigen::VectorXd b(5);
        b << 0.0, 0.686556, -0.606862, 0.519196, -0.301323;
        return b;
    }
    if (n == 7) {
        Eigen::VectorXd b(7);
        b << 0.0, -0.6902, 0.6635, -0.5705, 0.5168, -0.3974, 0.2172;
        return b;
    }
    return std::nullopt;
}

std::optional<ExactInertia> inertia(int n) {
    switch (n) {
        case 3: return ExactInertia{1, 1, 1};
        case 4: return ExactInertia{1, 1, 2};
        case 5: return ExactInertia{2, 1, 2};
        case 6: return ExactInertia{2, 1, 3};
        case 7: return ExactInertia{3, 1, 3};
        default: return std::nullopt;
    }
}

std::optional<int> component_count(int n) {
    if (n == 3 || n == 4) return 2;
    if (n >= 5 && n <= 10) return 1;
    return std::nullopt;
}

}  // namespace reference
}  // namespace gst
