#pragma once

#include <vector>

namespace creeppatch {

// Sampled traction field shared by every stress pipeline.  Semantics of the
// layers depend on the geometry:
//   * finite patch:  values = q = phi' + q0, transfer = phi', primitive = phi,
//     endpoint_exponent = edge exponent of the density (1 -+ x)^a;
//   * half-line reductions:  values = transfer = contact traction tau,
//     primitive = transmitted load (running integral of tau),
//     endpoint_exponent = power of tau at the weak end (0 when bounded).
struct StressField {
    std::vector<double> grid;
    double time = 0.0;
    std::vector<double> values;
    std::vector<double> transfer;
    std::vector<double> primitive;
    double endpoint_exponent = 0.5;
};

} // namespace creeppatch
