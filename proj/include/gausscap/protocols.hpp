#pragma once

#include <cmath>

#include "gausscap/capacity.hpp"
#include "gausscap/gaussian.hpp"

namespace gausscap {

namespace detail {

inline void require_nbar(double nbar) {
    if (nbar < 0.0) throw std::domain_error("capacity: nbar must be >= 0");
}

/// e^{2 r_opt} for single-quadrature squeezed signalling, in the
/// cancellation-free form (4Sn+2S+N)/(S + sqrt(S^2 + N(4Sn+2S+N))).
/// Equals (-S + sqrt((N+S)^2 + 4SNn))/N for N > 0 and degrades smoothly
/// to the noiseless limit 1 + 2n at N = 0.
inline double optimal_squeezing_e2r(double S, double N, double nbar) {
    const double c = N * (4.0 * S * nbar + 2.0 * S + N);
    return (4.0 * S * nbar + 2.0 * S + N) / (S + std::sqrt(S * S + c));
}

} // namespace detail

/// Symmetric dual-quadrature coherent encoding with heterodyne readout:
/// C = log2(1 + 2 S nbar / (1 + S + N)).
inline CapacityResult coherent_capacity(const ChannelParams& ch, double nbar) {
    detail::require_nbar(nbar);
    const double S = ch.strength, N = ch.added_noise();
    CapacityResult res;
    res.protocol = Protocol::CoherentHeterodyne;
    res.bits = std::log2(1.0 + 2.0 * S * nbar / (1.0 + S + N));
    res.params = {{"sigma_x2", nbar}, {"sigma_p2", nbar}};
    return res;
}

/// Coherent encoding on x only (sigma_x^2 = 2 nbar) with x homodyne:
/// C = (1/2) log2(1 + 4 S nbar / (S + N)).
inline CapacityResult coherent_single_quadrature_capacity(const ChannelParams& ch,
                                                          double nbar) {
    detail::require_nbar(nbar);
    const double S = ch.strength, N = ch.added_noise();
    CapacityResult res;
    res.protocol = Protocol::CoherentHomodyne;
    res.bits = 0.5 * std::log2(1.0 + 4.0 * S * nbar / (S + N));
    res.params = {{"sigma_x2", 2.0 * nbar}, {"sigma_p2", 0.0}};
    return res;
}

/// Capacity-optimal input squeezing r for single-quadrature signalling
/// under the photon budget nbar.  Satisfies sinh^2 r <= nbar.
inline double optimal_squeezing(const ChannelParams& ch, double nbar) {
    detail::require_nbar(nbar);
    const double e2r = detail::optimal_squeezing_e2r(ch.strength, ch.added_noise(), nbar);
    return 0.5 * std::log(e2r);
}

/// Squeezed single-quadrature encoding with x homodyne at the optimal r:
/// the capacity collapses to C = log2(e^{2 r_opt}).
inline CapacityResult squeezed_capacity(const ChannelParams& ch, double nbar) {
    detail::require_nbar(nbar);
    const double e2r = detail::optimal_squeezing_e2r(ch.strength, ch.added_noise(), nbar);
    const double r = 0.5 * std::log(e2r);
    const double sh = std::sinh(r);
    CapacityResult res;
    res.protocol = Protocol::SqueezedHomodyne;
    res.bits = std::log2(e2r);
    res.params = {{"r_opt", r},
                  {"sigma_x2", 2.0 * (nbar - sh * sh)},
                  {"sigma_p2", 0.0}};
    return res;
}

/// Photon budget above which coherent-heterodyne signalling overtakes the
/// squeezed scheme on a pure-loss/thermal channel for some band of eta:
/// n_c = (4 + 2 n_th + 4 sqrt(1 + n_th)) / (1 + 2 n_th); n_c(0) = 8.
inline double critical_photon_number(double n_th) {
    if (n_th < 0.0) throw std::domain_error("critical_photon_number: n_th must be >= 0");
    return (4.0 + 2.0 * n_th + 4.0 * std::sqrt(1.0 + n_th)) / (1.0 + 2.0 * n_th);
}

/// Heterodyne receiver with detector noise floor w/2 per quadrature
/// (w = 1 is the quantum limit): C = log2(1 + 2 g nbar / (w + g + N)).
/// Defined for amplification channels; increases with gain iff w > 1 + 2 n_th.
inline CapacityResult coarse_grained_coherent_capacity(const ChannelParams& ch,
                                                       double nbar, double w) {
    detail::require_nbar(nbar);
    if (ch.kind != ChannelKind::Amplification)
        throw unsupported_protocol(
            "coarse_grained_coherent_capacity: defined for amplification channels only");
    if (w < 1.0)
        throw std::domain_error("coarse_grained_coherent_capacity: w must be >= 1");
    const double g = ch.strength, N = ch.added_noise();
    CapacityResult res;
    res.protocol = Protocol::CoherentHeterodyne;
    res.bits = std::log2(1.0 + 2.0 * g * nbar / (w + g + N));
    res.params = {{"sigma_x2", nbar}, {"sigma_p2", nbar}};
    return res;
}

} // namespace gausscap
