#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "vsi/frames.hpp"

using namespace vsi;

namespace {
constexpr double kPi = std::numbers::pi;

AbcTriple balanced_cosine(double peak, double theta) {
    return AbcTriple{peak * std::cos(theta), peak * std::cos(theta - 2.0 * kPi / 3.0),
                     peak * std::cos(theta + 2.0 * kPi / 3.0)};
}
}  // namespace

TEST_CASE("frames: balanced cosine set lands on the d axis with its peak value") {
    for (const double theta : {0.0, 0.3, 1.7, 4.0}) {
        const Dq0Triple dq = park_forward(balanced_cosine(5.0, theta), theta);
        CHECK(dq.d == doctest::Approx(5.0).epsilon(1e-14));
        CHECK(dq.q == doctest::Approx(0.0).scale(5.0).epsilon(1e-14));
        CHECK(dq.zero == doctest::Approx(0.0).scale(5.0).epsilon(1e-14));
    }
}

TEST_CASE("frames: clarke is park at zero angle") {
    const AbcTriple x{1.2, -0.4, 2.5};
    const Dq0Triple a = clarke_forward(x);
    const Dq0Triple b = park_forward(x, 0.0);
    CHECK(a.d == b.d);
    CHECK(a.q == b.q);
    CHECK(a.zero == b.zero);
}

TEST_CASE("frames: zero channel is the arithmetic mean") {
    const AbcTriple x{3.0, 4.0, 5.0};
    CHECK(park_forward(x, 0.77).zero == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("frames: forward then inverse reproduces the phase quantities") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> amp(-10.0, 10.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
    for (int i = 0; i < 100; ++i) {
        const AbcTriple x{amp(rng), amp(rng), amp(rng)};
        const double theta = ang(rng);
        const AbcTriple back = park_inverse(park_forward(x, theta), theta);
        CHECK(back.a == doctest::Approx(x.a).scale(10.0).epsilon(1e-13));
        CHECK(back.b == doctest::Approx(x.b).scale(10.0).epsilon(1e-13));
        CHECK(back.c == doctest::Approx(x.c).scale(10.0).epsilon(1e-13));
    }
}

TEST_CASE("frames: function and matrix forms agree") {
    const AbcTriple x{1.0, -2.0, 0.5};
    const double theta = 0.9;
    const Eigen::Vector3d v = park_matrix(theta) * Eigen::Vector3d(x.a, x.b, x.c);
    const Dq0Triple dq = park_forward(x, theta);
    CHECK(v(0) == doctest::Approx(dq.d).epsilon(1e-14));
    CHECK(v(1) == doctest::Approx(dq.q).epsilon(1e-14));
    CHECK(v(2) == doctest::Approx(dq.zero).epsilon(1e-14));

    const Eigen::Vector3d w = park_inverse_matrix(theta) * v;
    CHECK(w(0) == doctest::Approx(x.a).epsilon(1e-13));
    CHECK(w(1) == doctest::Approx(x.b).epsilon(1e-13));
    CHECK(w(2) == doctest::Approx(x.c).epsilon(1e-13));
}

TEST_CASE("frames: park and its inverse multiply to the identity") {
    for (const double theta : {0.0, 0.5, 2.0, 5.5}) {
        const Eigen::Matrix3d prod = park_matrix(theta) * park_inverse_matrix(theta);
        CHECK((prod - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("frames: rotating-frame coupling matrix matches the differentiated transform") {
    const double omega = 2.0 * kPi * 50.0;
    const double h = 1e-6;
    for (const double theta : {0.1, 1.0, 2.9, 4.2}) {
        // d/dt T^{-1}(omega t) = omega * d/dtheta T^{-1}(theta), central difference.
        const Eigen::Matrix3d dinv =
            (park_inverse_matrix(theta + h) - park_inverse_matrix(theta - h)) / (2.0 * h);
        const Eigen::Matrix3d coupling = park_matrix(theta) * (omega * dinv);
        const Eigen::Matrix3d expected = rotation_coupling_matrix(omega);
        CHECK((coupling - expected).cwiseAbs().maxCoeff() < 1e-6 * omega);
    }
}

TEST_CASE("frames: coupling matrix layout") {
    const Eigen::Matrix3d m = rotation_coupling_matrix(3.0);
    CHECK(m(0, 1) == -3.0);
    CHECK(m(1, 0) == 3.0);
    CHECK(m(0, 0) == 0.0);
    CHECK(m(1, 1) == 0.0);
    CHECK(m.row(2).cwiseAbs().sum() == 0.0);
    CHECK(m.col(2).cwiseAbs().sum() == 0.0);
}
