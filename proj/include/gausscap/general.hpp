#pragma once

#include <cmath>
#include <utility>

#include "gausscap/capacity.hpp"
#include "gausscap/gaussian.hpp"
#include "gausscap/protocols.hpp"

namespace gausscap {

/// Squeezed-coherent alphabet: every letter is squeezed by r (x quadrature
/// narrowed for r > 0) and displaced with Gaussian variance sigma_x2 / sigma_p2.
/// Photon budget used: (sigma_x2 + sigma_p2)/2 + sinh^2 r.
struct EncodingSpec {
    double r = 0.0;
    double sigma_x2 = 0.0;
    double sigma_p2 = 0.0;

    double photon_number() const {
        const double sh = std::sinh(r);
        return 0.5 * (sigma_x2 + sigma_p2) + sh * sh;
    }
};

/// Receiver model: projection onto squeezed coherent states with squeezing s
/// (s = 0 is heterodyne), or ideal x homodyne as an explicit variant rather
/// than a large-s limit.
struct MeasurementSpec {
    enum class Variant { Projective, HomodyneX };
    Variant variant = Variant::Projective;
    double s = 0.0;

    static MeasurementSpec projective(double s) { return {Variant::Projective, s}; }
    static MeasurementSpec homodyne_x() { return {Variant::HomodyneX, 0.0}; }
};

/// Shannon rate of the Gaussian measurement channel:
///   C = 1/2 [ log2(1 + S sigma_x2 / Dx) + log2(1 + S sigma_p2 / Dp) ]
/// with per-quadrature noise Dx = (S e^{-2r} + N)/2 + e^{-2s}/2 and
/// Dp = (S e^{+2r} + N)/2 + e^{+2s}/2; homodyne drops the measurement-state
/// noise on x and the whole p term (sigma_p2 must be 0).
inline double general_capacity(const ChannelParams& ch, const EncodingSpec& enc,
                               const MeasurementSpec& meas) {
    if (enc.sigma_x2 < 0.0 || enc.sigma_p2 < 0.0)
        throw std::domain_error("general_capacity: signal variances must be >= 0");
    const double S = ch.strength, N = ch.added_noise();
    const double e2r = std::exp(2.0 * enc.r);
    if (meas.variant == MeasurementSpec::Variant::HomodyneX) {
        if (enc.sigma_p2 > 0.0)
            throw invalid_combination(
                "general_capacity: x homodyne cannot read a p-quadrature signal");
        const double dx = 0.5 * (S / e2r + N);
        return 0.5 * std::log2(1.0 + S * enc.sigma_x2 / dx);
    }
    const double e2s = std::exp(2.0 * meas.s);
    const double dx = 0.5 * (S / e2r + N) + 0.5 / e2s;
    const double dp = 0.5 * (S * e2r + N) + 0.5 * e2s;
    return 0.5 * (std::log2(1.0 + S * enc.sigma_x2 / dx)
                + std::log2(1.0 + S * enc.sigma_p2 / dp));
}

namespace detail {

/// Water-filling asymmetry between the two signal variances at fixed (r, s):
/// (sigma_x2 - sigma_p2)/2 = sinh(2r)/2 + sinh(2s)/(2S).
inline double split_asymmetry(double S, double r, double s) {
    const double t = s == 0.0 ? 0.0 : std::sinh(2.0 * s) / (2.0 * S);
    return 0.5 * std::sinh(2.0 * r) + t;
}

} // namespace detail

/// Capacity-optimal division of the displacement budget between the
/// quadratures at fixed input squeezing r and measurement squeezing s.
/// Requires the strictly-two-quadrature regime
///   nbar - sinh^2 r > |sinh(2r)/2 + sinh(2s)/(2S)|;
/// outside it the optimum collapses onto a single quadrature.
inline std::pair<double, double> optimal_encoding_split(const ChannelParams& ch,
                                                        double r, double s,
                                                        double nbar) {
    detail::require_nbar(nbar);
    const double sh = std::sinh(r);
    const double avail = nbar - sh * sh;
    const double asym = detail::split_asymmetry(ch.strength, r, s);
    if (!(avail > std::fabs(asym)))
        throw infeasible_split("optimal_encoding_split: budget too small for a "
                               "two-quadrature optimum at this (r, s)");
    return {avail + asym, avail - asym};
}

/// Capacity-optimal input squeezing at fixed measurement squeezing s,
/// independent of the photon budget: e^{2r} = sqrt((N+e^{2s})/(N+e^{-2s})).
/// Reduces to r = s on a noiseless channel and grows monotonically with s.
inline double optimal_input_squeezing(const ChannelParams& ch, double s) {
    const double N = ch.added_noise();
    return 0.25 * (std::log(N + std::exp(2.0 * s)) - std::log(N + std::exp(-2.0 * s)));
}

namespace detail {

/// Two-quadrature capacity at measurement squeezing s, with r and the split
/// already optimized out:
///   C(s) = log2( (S + 2 S nbar + N + cosh 2s) / (S + sqrt(1 + N^2 + 2 N cosh 2s)) ).
inline double two_quadrature_bits(double S, double N, double nbar, double s) {
    const double c2s = std::cosh(2.0 * s);
    return std::log2((S + 2.0 * S * nbar + N + c2s)
                     / (S + std::sqrt(1.0 + N * N + 2.0 * N * c2s)));
}

/// Feasibility margin of the optimal split at r = r_opt(s); positive inside
/// the two-quadrature regime, strictly decreasing past its boundary.
inline double feasibility_gap(const ChannelParams& ch, double nbar, double s) {
    const double r = optimal_input_squeezing(ch, s);
    const double sh = std::sinh(r);
    return (nbar - sh * sh) - std::fabs(split_asymmetry(ch.strength, r, s));
}

} // namespace detail

/// Maximum of the two-quadrature capacity over the measurement squeezing s,
/// with r and the budget split optimized analytically at each s.  Evaluates
/// the three extremal candidates: s = 0, the interior stationary point when
/// it exists inside the feasible range, and the feasibility boundary (found
/// by bisection).  The winner's s, r and split are reported in params.
inline CapacityResult two_quadrature_optimum_over_s(const ChannelParams& ch,
                                                    double nbar) {
    detail::require_nbar(nbar);
    const double S = ch.strength, N = ch.added_noise();
    CapacityResult res;
    res.protocol = Protocol::GeneralGaussian;
    if (nbar == 0.0 || S == 0.0) {
        res.params = {{"s_opt", 0.0}, {"r_opt", 0.0}, {"sigma_x2", 0.0}, {"sigma_p2", 0.0}};
        return res;
    }

    // Boundary of the feasible range: gap(0) = nbar > 0 and any feasible s
    // satisfies sinh(2s) <= 2 S nbar, so the cap lies beyond the boundary.
    const double s_cap = std::asinh(2.0 * S * nbar) + 5.0;
    double lo = 0.0, s_b = 0.0;
    if (detail::feasibility_gap(ch, nbar, s_cap) > 0.0) {
        s_b = s_cap; // entire range feasible (does not occur for N >= 0, kept for safety)
    } else {
        double hi = s_cap;
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            (detail::feasibility_gap(ch, nbar, mid) > 0.0 ? lo : hi) = mid;
        }
        s_b = lo;
    }

    double best_s = 0.0;
    double best_bits = detail::two_quadrature_bits(S, N, nbar, 0.0);

    // Interior stationary point; a local minimum in theory, evaluated anyway.
    if (N > 1e-12) {
        const double rad = -1.0 + S * S + N * (2.0 * S + 4.0 * S * nbar + N);
        if (rad >= 0.0) {
            const double c2s = (-1.0 + S * (S + N + 2.0 * N * nbar - std::sqrt(rad))) / N;
            if (c2s >= 1.0) {
                const double s_i = 0.5 * std::acosh(c2s);
                if (s_i > 0.0 && s_i < s_b) {
                    const double bits = detail::two_quadrature_bits(S, N, nbar, s_i);
                    if (bits > best_bits) { best_bits = bits; best_s = s_i; }
                }
            }
        }
    }

    const double bits_b = detail::two_quadrature_bits(S, N, nbar, s_b);
    if (bits_b > best_bits) { best_bits = bits_b; best_s = s_b; }

    const double r = optimal_input_squeezing(ch, best_s);
    const double sh = std::sinh(r);
    const double avail = nbar - sh * sh;
    const double asym = detail::split_asymmetry(S, r, best_s);
    const double sp2 = avail - asym; // ~0 at the boundary, clamp bisection residue
    res.bits = best_bits;
    res.params = {{"s_opt", best_s},
                  {"r_opt", r},
                  {"sigma_x2", avail + asym},
                  {"sigma_p2", sp2 < 0.0 ? 0.0 : sp2}};
    return res;
}

/// Capacity over all Gaussian protocols: the maximum lands on either the
/// coherent-heterodyne or the squeezed-homodyne scheme.  Ties within 1e-12
/// bits report the coherent protocol.
inline CapacityResult optimal_gaussian_capacity(const ChannelParams& ch, double nbar) {
    CapacityResult coh = coherent_capacity(ch, nbar);
    CapacityResult sq = squeezed_capacity(ch, nbar);
    if (std::fabs(coh.bits - sq.bits) < 1e-12 || coh.bits > sq.bits) return coh;
    return sq;
}

/// Exhaustive-search grid over (r, s, budget split).  The r and s axes are
/// sampled uniformly in e^{2r} and e^{2s}, where the capacity surface is
/// gently curved; negative bounds request the defaults r_max = asinh(sqrt(nbar))
/// (squeezing alone exhausts the budget) and s_max = asinh(2 S nbar)/2 + 1
/// (strictly past the two-quadrature feasibility boundary).
struct GridSpec {
    int n_r = 64;
    int n_s = 64;
    int n_split = 64;
    double r_max = -1.0;
    double s_max = -1.0;
    bool include_homodyne_x = true;
};

/// Brute-force reference for the staged optimum: evaluates general_capacity
/// on every grid cell (plus the x-homodyne row for each r) and returns the
/// best cell.  Ties keep the first cell in fixed (r, homodyne, s, split) order.
inline CapacityResult brute_force_capacity(const ChannelParams& ch, double nbar,
                                           const GridSpec& grid = {}) {
    detail::require_nbar(nbar);
    if (grid.n_r < 16 || grid.n_s < 16 || grid.n_split < 16)
        throw std::invalid_argument("brute_force_capacity: need >= 16 points per axis");
    CapacityResult res;
    res.protocol = Protocol::GeneralGaussian;
    if (nbar == 0.0) {
        res.params = {{"r_opt", 0.0}, {"sigma_x2", 0.0}, {"sigma_p2", 0.0}};
        return res;
    }
    const double r_max = grid.r_max < 0.0 ? std::asinh(std::sqrt(nbar)) : grid.r_max;
    const double s_max = grid.s_max < 0.0
        ? 0.5 * std::asinh(2.0 * ch.strength * nbar) + 1.0 : grid.s_max;
    if (!(r_max > 0.0) || !(s_max > 0.0))
        throw std::invalid_argument("brute_force_capacity: degenerate grid bounds");

    const double er_hi = std::exp(2.0 * r_max), es_hi = std::exp(2.0 * s_max);
    double best = -1.0, best_r = 0.0, best_s = 0.0, best_sx = 0.0, best_sp = 0.0;
    bool best_homodyne = false;
    for (int i = 0; i < grid.n_r; ++i) {
        const double er = 1.0 + (er_hi - 1.0) * i / (grid.n_r - 1);
        const double r = 0.5 * std::log(er);
        const double sh = std::sinh(r);
        double avail = nbar - sh * sh;
        if (avail < 0.0) avail = 0.0; // top grid point, rounding only
        if (grid.include_homodyne_x) {
            const EncodingSpec enc{r, 2.0 * avail, 0.0};
            const double bits = general_capacity(ch, enc, MeasurementSpec::homodyne_x());
            if (bits > best) {
                best = bits; best_r = r; best_sx = enc.sigma_x2; best_sp = 0.0;
                best_homodyne = true;
            }
        }
        for (int j = 0; j < grid.n_s; ++j) {
            const double es = 1.0 + (es_hi - 1.0) * j / (grid.n_s - 1);
            const double s = 0.5 * std::log(es);
            const MeasurementSpec meas = MeasurementSpec::projective(s);
            for (int k = 0; k < grid.n_split; ++k) {
                const double f = static_cast<double>(k) / (grid.n_split - 1);
                const EncodingSpec enc{r, f * 2.0 * avail, (1.0 - f) * 2.0 * avail};
                const double bits = general_capacity(ch, enc, meas);
                if (bits > best) {
                    best = bits; best_r = r; best_s = s;
                    best_sx = enc.sigma_x2; best_sp = enc.sigma_p2;
                    best_homodyne = false;
                }
            }
        }
    }
    res.bits = best;
    res.params = {{"r_opt", best_r}, {"sigma_x2", best_sx}, {"sigma_p2", best_sp}};
    if (!best_homodyne) res.params["s_opt"] = best_s;
    return res;
}

} // namespace gausscap
