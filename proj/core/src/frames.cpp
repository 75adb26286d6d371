#include "vsi/frames.hpp"

#include <cmath>
#include <numbers>

namespace vsi {

namespace {
constexpr double kThird = 2.0 * std::numbers::pi / 3.0;
}

Dq0Triple clarke_forward(const AbcTriple& abc) {
    return park_forward(abc, 0.0);
}

Dq0Triple park_forward(const AbcTriple& abc, double theta) {
    const double ca = std::cos(theta), cb = std::cos(theta - kThird), cc = std::cos(theta - 2.0 * kThird);
    const double sa = std::sin(theta), sb = std::sin(theta - kThird), sc = std::sin(theta - 2.0 * kThird);
    Dq0Triple out;
    out.d = (2.0 / 3.0) * (abc.a * ca + abc.b * cb + abc.c * cc);
    out.q = -(2.0 / 3.0) * (abc.a * sa + abc.b * sb + abc.c * sc);
    out.zero = (abc.a + abc.b + abc.c) / 3.0;
    return out;
}

AbcTriple park_inverse(const Dq0Triple& dq0, double theta) {
    AbcTriple out;
    out.a = dq0.d * std::cos(theta) - dq0.q * std::sin(theta) + dq0.zero;
    out.b = dq0.d * std::cos(theta - kThird) - dq0.q * std::sin(theta - kThird) + dq0.zero;
    out.c = dq0.d * std::cos(theta - 2.0 * kThird) - dq0.q * std::sin(theta - 2.0 * kThird) + dq0.zero;
    return out;
}

Eigen::Matrix3d park_matrix(double theta) {
    Eigen::Matrix3d t;
    t << std::cos(theta), std::cos(theta - kThird), std::cos(theta - 2.0 * kThird),
        -std::sin(theta), -std::sin(theta - kThird), -std::sin(theta - 2.0 * kThird),
        0.5, 0.5, 0.5;
    return (2.0 / 3.0) * t;
}

Eigen::Matrix3d park_inverse_matrix(double theta) {
    Eigen::Matrix3d t;
    t << std::cos(theta), -std::sin(theta), 1.0,
        std::cos(theta - kThird), -std::sin(theta - kThird), 1.0,
        std::cos(theta - 2.0 * kThird), -std::sin(theta - 2.0 * kThird), 1.0;
    return t;
}

Eigen::Matrix3d rotation_coupling_matrix(double omega) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    m(0, 1) = -omega;
    m(1, 0) = omega;
    return m;
}

}  // namespace vsi
