#pragma once

#include <stdexcept>
#include <string>

namespace gausscap {

/// Protocol/channel pairing that is not defined (e.g. photon-counting
/// capacity for an amplification channel).
struct unsupported_protocol : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Encoding/measurement combination that contradicts itself
/// (e.g. x-homodyne readout with nonzero p-quadrature signal).
struct invalid_combination : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The analytic water-filling split would assign negative variance to one
/// quadrature; the optimum lies in the single-quadrature regime instead.
struct infeasible_split : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iterative solver ran out of its iteration budget.  Carries the last
/// iterate's value and a gap estimate so callers can report diagnostics.
struct convergence_error : std::runtime_error {
    double last_bits;
    double gap;
    int iterations;
    convergence_error(const std::string& msg, double last, double g, int iters)
        : std::runtime_error(msg), last_bits(last), gap(g), iterations(iters) {}
};

} // namespace gausscap
