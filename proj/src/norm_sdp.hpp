// Internal barrier solver for the spectral-norm fitting problems behind the
// distance engine:
//
//   min t   s.t.  [[t I, A(c)], [A(c)*, t I]] >= 0,      A(c) = x - sum c_i b_i
//   (optionally)  [[  I, B(c)], [B(c)*,   I]] >= 0,      B(c) = sum c_i b_i
//
// Small dense log-det barrier with damped Newton centering. The dual block of
// the first constraint furnishes the annihilating functional used for lower
// bound certificates.
#pragma once

#include <vector>

#include "oadl/staralg.hpp"

namespace oadl::detail {

struct NormSdpResult {
    std::vector<Complex> coeffs;
    double objective = 0.0;        // barrier-accurate objective value
    ComplexMatrix dual_phi{1, 1};  // -2 * Z12 of the norm block (certificate candidate)
    bool converged = false;
};

NormSdpResult solve_norm_sdp(const ComplexMatrix& x, const StarSubspace& z,
                             bool ball_constraint);

}  // namespace oadl::detail
