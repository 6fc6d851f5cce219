#pragma once

#include <cmath>

#include "gausscap/gaussian.hpp"
#include "gausscap/protocols.hpp"

namespace gausscap {

/// Gaussian ensemble in moment form: every letter shares the seed
/// covariance; displacements are Gaussian with variance enc_x2 (enc_p2)
/// along x (p).  The average state adds diag(enc_x2, enc_p2) to the seed.
struct GaussianEnsemble {
    GaussianState seed;
    double enc_x2 = 0.0;
    double enc_p2 = 0.0;

    GaussianState average_state() const {
        GaussianState avg = seed;
        avg.cov_xx += enc_x2;
        avg.cov_pp += enc_p2;
        return avg;
    }
};

/// Coherent letters with symmetric displacement variance nbar per quadrature;
/// the average state is thermal with occupation nbar.
inline GaussianEnsemble coherent_ensemble(double nbar) {
    detail::require_nbar(nbar);
    return {GaussianState::vacuum(), nbar, nbar};
}

/// Squeezed letters at the capacity-optimal r for (ch, nbar), displaced
/// along x only with the remaining photon budget.
inline GaussianEnsemble squeezed_ensemble(const ChannelParams& ch, double nbar) {
    detail::require_nbar(nbar);
    const double r = optimal_squeezing(ch, nbar);
    const double sh = std::sinh(r);
    return {make_squeezed_state(r), 2.0 * (nbar - sh * sh), 0.0};
}

/// chi = S(channel(average)) - S(channel(seed)).  Displacements do not
/// change entropy, so the conditional term is a single output entropy.
inline double holevo_quantity(const ChannelParams& ch, const GaussianEnsemble& ens) {
    if (ens.enc_x2 < 0.0 || ens.enc_p2 < 0.0)
        throw std::domain_error("holevo_quantity: encoding variances must be >= 0");
    if (!ens.seed.is_physical())
        throw std::domain_error("holevo_quantity: seed covariance is unphysical");
    const double s_avg = von_neumann_entropy(apply_channel(ens.average_state(), ch));
    const double s_cond = von_neumann_entropy(apply_channel(ens.seed, ch));
    const double chi = s_avg - s_cond;
    return chi < 0.0 ? 0.0 : chi;
}

/// Upper bound on the classical capacity at photon budget nbar.
/// Loss: g(eta nbar + (1-eta) n_th) - g((1-eta) n_th) in closed form.
/// Amplification: the Holevo quantity of the symmetric coherent ensemble.
inline double holevo_bound(const ChannelParams& ch, double nbar) {
    detail::require_nbar(nbar);
    if (ch.kind == ChannelKind::Loss) {
        const double eta = ch.strength;
        return g_entropy(eta * nbar + (1.0 - eta) * ch.n_th)
             - g_entropy((1.0 - eta) * ch.n_th);
    }
    return holevo_quantity(ch, coherent_ensemble(nbar));
}

} // namespace gausscap
