#pragma once

#include <map>
#include <string>
#include <vector>

namespace gausscap {

enum class Protocol {
    CoherentHeterodyne,
    CoherentHomodyne,
    SqueezedHomodyne,
    GeneralGaussian,
    NumberState,
    HolevoQuantity,
    HolevoBound,
};

inline const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::CoherentHeterodyne: return "coherent-heterodyne";
        case Protocol::CoherentHomodyne:   return "coherent-homodyne";
        case Protocol::SqueezedHomodyne:   return "squeezed-homodyne";
        case Protocol::GeneralGaussian:    return "general-gaussian";
        case Protocol::NumberState:        return "number-state";
        case Protocol::HolevoQuantity:     return "holevo-quantity";
        case Protocol::HolevoBound:        return "holevo-bound";
    }
    return "unknown";
}

/// Capacity in bits per channel use plus the parameters attaining it.
/// Fixed param keys: "r_opt", "s_opt", "sigma_x2", "sigma_p2".
/// `prior` is populated only by the photon-number-basis solver.
struct CapacityResult {
    double bits = 0.0;
    Protocol protocol = Protocol::CoherentHeterodyne;
    std::map<std::string, double> params;
    std::vector<double> prior;
};

} // namespace gausscap
