#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "gausscap/errors.hpp"

namespace gausscap {

// Conventions used throughout: hbar = 1, [x, p] = i, vacuum quadrature
// variance 1/2.  Entropies and capacities are in bits.

/// Single-mode Gaussian state: quadrature means plus the three independent
/// entries of the symmetric 2x2 covariance matrix.
struct GaussianState {
    double mean_x = 0.0;
    double mean_p = 0.0;
    double cov_xx = 0.5;
    double cov_pp = 0.5;
    double cov_xp = 0.0;

    double cov_det() const { return cov_xx * cov_pp - cov_xp * cov_xp; }

    /// Heisenberg bound: det(cov) >= 1/4 up to numerical slack.
    bool is_physical(double slack = 1e-12) const {
        return cov_xx > 0.0 && cov_pp > 0.0 && cov_det() >= 0.25 - slack;
    }

    static GaussianState vacuum() { return {}; }

    static GaussianState thermal(double nbar) {
        if (nbar < 0.0) throw std::domain_error("thermal: nbar must be >= 0");
        return {0.0, 0.0, nbar + 0.5, nbar + 0.5, 0.0};
    }

    static GaussianState coherent(double x, double p) {
        return {x, p, 0.5, 0.5, 0.0};
    }
};

/// Squeezed vacuum displaced to (x, p): variance e^{-2r}/2 along x,
/// e^{+2r}/2 along p.  r > 0 squeezes the x quadrature.
inline GaussianState make_squeezed_state(double r, double x = 0.0, double p = 0.0) {
    return {x, p, 0.5 * std::exp(-2.0 * r), 0.5 * std::exp(2.0 * r), 0.0};
}

/// Covariance rotated by the phase-space rotation R(theta); means follow.
inline GaussianState rotated(const GaussianState& st, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    GaussianState out;
    out.mean_x = c * st.mean_x + s * st.mean_p;
    out.mean_p = -s * st.mean_x + c * st.mean_p;
    out.cov_xx = c * c * st.cov_xx + 2.0 * c * s * st.cov_xp + s * s * st.cov_pp;
    out.cov_pp = s * s * st.cov_xx - 2.0 * c * s * st.cov_xp + c * c * st.cov_pp;
    out.cov_xp = c * s * (st.cov_pp - st.cov_xx) + (c * c - s * s) * st.cov_xp;
    return out;
}

/// <n> = (tr cov - 1)/2 + (mean_x^2 + mean_p^2)/2.
inline double mean_photon_number(const GaussianState& st) {
    return 0.5 * (st.cov_xx + st.cov_pp - 1.0)
         + 0.5 * (st.mean_x * st.mean_x + st.mean_p * st.mean_p);
}

/// Bosonic entropy function g(x) = (1+x)log2(1+x) - x log2 x, g(0) = 0.
/// Inputs below 1e-12 return 0 (the x log x limit).
inline double g_entropy(double x) {
    if (x < 0.0) throw std::domain_error("g_entropy: argument must be >= 0");
    if (x < 1e-12) return 0.0;
    constexpr double ln2 = 0.6931471805599453;
    return ((1.0 + x) * std::log1p(x) - x * std::log(x)) / ln2;
}

/// Von Neumann entropy in bits: g(nu - 1/2) with nu = sqrt(det cov).
inline double von_neumann_entropy(const GaussianState& st) {
    const double det = st.cov_det();
    if (det < 0.25 - 1e-9)
        throw std::domain_error("von_neumann_entropy: unphysical covariance, det = "
                                + std::to_string(det));
    const double nu = std::sqrt(det < 0.25 ? 0.25 : det);
    return g_entropy(nu - 0.5);
}

enum class ChannelKind { Loss, Amplification };

/// Phase-insensitive Gaussian channel: a beam splitter of transmissivity
/// eta in [0,1] or a phase-preserving amplifier of gain g >= 1, with the
/// ancilla mode in a thermal state of occupation n_th >= 0.
struct ChannelParams {
    ChannelKind kind = ChannelKind::Loss;
    double strength = 1.0; // eta for Loss, g for Amplification
    double n_th = 0.0;

    static ChannelParams loss(double eta, double n_th = 0.0) {
        if (!(eta >= 0.0 && eta <= 1.0))
            throw std::domain_error("loss: eta must lie in [0, 1]");
        if (n_th < 0.0) throw std::domain_error("loss: n_th must be >= 0");
        return {ChannelKind::Loss, eta, n_th};
    }

    static ChannelParams amplification(double g, double n_th = 0.0) {
        if (!(g >= 1.0))
            throw std::domain_error("amplification: gain must be >= 1");
        if (n_th < 0.0) throw std::domain_error("amplification: n_th must be >= 0");
        return {ChannelKind::Amplification, g, n_th};
    }

    /// Added noise variance (both quadratures): N = |1 - strength|(1 + 2 n_th).
    double added_noise() const {
        return (kind == ChannelKind::Loss ? 1.0 - strength : strength - 1.0)
             * (1.0 + 2.0 * n_th);
    }
};

/// Moments transform: means scale by sqrt(strength); cov -> strength*cov + N/2.
inline GaussianState apply_channel(const GaussianState& st, const ChannelParams& ch) {
    const double s = ch.strength;
    const double half_noise = 0.5 * ch.added_noise();
    const double amp = std::sqrt(s);
    return {amp * st.mean_x, amp * st.mean_p,
            s * st.cov_xx + half_noise,
            s * st.cov_pp + half_noise,
            s * st.cov_xp};
}

} // namespace gausscap
