#pragma once

#include <Eigen/Core>

namespace vsi {

// Instantaneous three-phase quantities (volts or amperes, caller-interpreted).
struct AbcTriple {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// Synchronous-frame components. The theta = 0 case doubles as the stationary
// alpha/beta frame (d = alpha, q = beta).
struct Dq0Triple {
    double d = 0.0;
    double q = 0.0;
    double zero = 0.0;
};

// All transforms here are AMPLITUDE-invariant: a balanced cosine set of peak X
// maps to d = X, so dq values read directly as phase-peak quantities. The
// power-invariant sqrt(2/3) variant is deliberately not offered; mixing the
// two conventions is the classic way to be wrong by a factor of 1.5.

// Stationary-frame transform: alpha + j*beta = (2/3)(a + b*e^{j2pi/3} + c*e^{j4pi/3}),
// zero = (a + b + c)/3. Returned as Dq0Triple with d = alpha, q = beta.
Dq0Triple clarke_forward(const AbcTriple& abc);

// Rotating-frame transform at angle theta (theta = omega_s*t, d-axis on the
// phase-a voltage peak at theta = 0) and its exact inverse.
Dq0Triple park_forward(const AbcTriple& abc, double theta);
AbcTriple park_inverse(const Dq0Triple& dq0, double theta);

// The transform matrices themselves, for callers that want to differentiate
// or compose them. park_matrix(theta) * park_inverse_matrix(theta) = I.
Eigen::Matrix3d park_matrix(double theta);
Eigen::Matrix3d park_inverse_matrix(double theta);

// T(theta) * d/dt[T^{-1}(theta)] for theta = omega*t. With the q-axis-leading
// rows above this is
//   [[0, -omega, 0], [omega, 0, 0], [0, 0, 0]];
// the dq dynamics gain its NEGATIVE (+omega*x_q in the d row), which is the
// cross-coupling sign the averaged model carries.
Eigen::Matrix3d rotation_coupling_matrix(double omega);

}  // namespace vsi
