#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "gausscap/capacity.hpp"
#include "gausscap/errors.hpp"

namespace gausscap {

/// Discrete memoryless channel on the truncated photon-number alphabet
/// {0..n_cut}.  prob[m, n] = P(m | n), columns (fixed n) sum to 1.
struct DiscreteChannel {
    int n_cut = 0;
    std::vector<double> prob; // row-major, (n_cut+1) x (n_cut+1)

    double operator()(int m, int n) const { return prob[m * (n_cut + 1) + n]; }
    int alphabet() const { return n_cut + 1; }
};

/// Pure-loss transition matrix: each of n photons survives independently
/// with probability eta, so P(m|n) = C(n,m) eta^m (1-eta)^{n-m}.
/// Binomials are evaluated in log space to stay finite for large n_cut.
inline DiscreteChannel pure_loss_transition(double eta, int n_cut) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("pure_loss_transition: eta must lie in [0, 1]");
    if (n_cut < 1)
        throw std::invalid_argument("pure_loss_transition: n_cut must be >= 1");
    const int M = n_cut + 1;
    DiscreteChannel ch{n_cut, std::vector<double>(static_cast<size_t>(M) * M, 0.0)};
    if (eta == 0.0) {
        for (int n = 0; n < M; ++n) ch.prob[0 * M + n] = 1.0;
        return ch;
    }
    if (eta == 1.0) {
        for (int n = 0; n < M; ++n) ch.prob[n * M + n] = 1.0;
        return ch;
    }
    const double log_eta = std::log(eta), log_1m = std::log1p(-eta);
    for (int n = 0; n < M; ++n)
        for (int m = 0; m <= n; ++m) {
            const double log_binom = std::lgamma(n + 1.0) - std::lgamma(m + 1.0)
                                   - std::lgamma(n - m + 1.0);
            ch.prob[m * M + n] = std::exp(log_binom + m * log_eta + (n - m) * log_1m);
        }
    return ch;
}

/// One fixed-multiplier Blahut-Arimoto run.  The prior is a genuine input
/// distribution whatever `converged` says -- bits and mean_energy are its
/// exact mutual information and energy -- and `gap_bits` bounds how far the
/// priced objective I - lambda*E at this prior sits below its optimum.
struct BaRun {
    std::vector<double> prior;
    double bits = 0.0;
    double mean_energy = 0.0;
    int iterations = 0;
    bool converged = false;
    double gap_bits = 0.0;          // duality-gap bound on priced suboptimality
    std::vector<double> trace_bits; // mutual information after every iteration
};

/// Blahut-Arimoto for the energy-priced objective I(p) - lambda * E(p).
/// Seeded with the max-entropy prior for the price, p0(n) proportional to
/// e^{-lambda n} (at lambda = 0 this is the classic uniform-seeded
/// algorithm); a caller holding a nearby fixed point -- e.g. from a
/// neighbouring price during bisection -- can pass it as `seed` to skip most
/// of the climb.  The iteration converges to the same optimum from any
/// full-support seed.  Convergence requires two things at once: the
/// information changed by less than tol_step between iterations AND the
/// duality gap of the priced objective -- max_n (d_n - lambda n) minus the
/// achieved I - lambda*E, an upper bound on the iterate's suboptimality --
/// certifies the iterate within tol_gap bits.  Either test alone misfires:
/// the step test goes quiet mid-crawl on the nearly flat face near a binding
/// constraint (and instantly when a seed sits at a neighbouring price's
/// fixed point), and the gap test can dip transiently while the iterate
/// reshapes through a saddle.  An exhausted iteration budget is not an
/// error: the final iterate comes back with converged = false and its gap,
/// and the caller decides whether that is good enough.
/// The bound tightens far more slowly than the iterate moves (the values
/// are typically frozen to 8 digits well before the certificate closes), so
/// the default asks for a figure-grade 1e-5 bits, not machine precision.
inline BaRun ba_fixed_lambda(const DiscreteChannel& ch, double lambda,
                             double tol_gap = 1e-5, double tol_step = 1e-10,
                             int max_iter = 200000,
                             const std::vector<double>* seed = nullptr) {
    if (max_iter < 1)
        throw std::invalid_argument("ba_fixed_lambda: max_iter must be >= 1");
    constexpr double ln2 = 0.6931471805599453;
    const int M = ch.alphabet();
    std::vector<double> p(M), d(M), r_out(M), w(M);
    if (seed && static_cast<int>(seed->size()) == M) {
        p = *seed;
    } else {
        double norm = 0.0;
        for (int n = 0; n < M; ++n) norm += p[n] = std::exp(-lambda * n);
        for (double& v : p) v /= norm;
    }
    BaRun run;
    double prev_bits = -1.0;
    const auto finish = [&](bool converged, double bits, double energy,
                            double gap) {
        run.prior = p;
        run.bits = bits;
        run.mean_energy = energy;
        run.converged = converged;
        run.gap_bits = std::max(0.0, gap);
        return run;
    };
    for (int t = 1; t <= max_iter; ++t) {
        std::fill(r_out.begin(), r_out.end(), 0.0);
        for (int n = 0; n < M; ++n) {
            if (p[n] == 0.0) continue;
            for (int m = 0; m < M; ++m) r_out[m] += p[n] * ch(m, n);
        }
        // Letters whose seed weight underflowed to zero stay excluded.  The
        // logs are taken separately because r_out can be denormal (log stays
        // finite where the quotient t/r would overflow), and outputs whose
        // accumulated probability underflowed to exact zero are skipped --
        // their true contribution is below the representable range.
        for (int n = 0; n < M; ++n) {
            if (p[n] == 0.0) { d[n] = 0.0; continue; }
            double kl = 0.0;
            for (int m = 0; m < M; ++m) {
                const double t_mn = ch(m, n);
                if (t_mn > 0.0 && r_out[m] > 0.0)
                    kl += t_mn * (std::log(t_mn) - std::log(r_out[m]));
            }
            d[n] = kl;
        }
        double bound = -HUGE_VAL, info = 0.0, energy = 0.0;
        for (int n = 0; n < M; ++n) {
            bound = std::max(bound, d[n] - lambda * n);
            info += p[n] * d[n];
            energy += p[n] * n;
        }
        const double bits = info / ln2;
        const double gap = (bound - (info - lambda * energy)) / ln2;
        run.trace_bits.push_back(bits);
        run.iterations = t;
        if (t >= 2 && std::fabs(bits - prev_bits) <= tol_step &&
            gap <= tol_gap)
            return finish(true, bits, energy, gap);
        prev_bits = bits;
        if (t == max_iter) return finish(false, bits, energy, gap);
        double w_max = -HUGE_VAL;
        for (int n = 0; n < M; ++n) {
            w[n] = p[n] == 0.0 ? -HUGE_VAL : std::log(p[n]) + d[n] - lambda * n;
            w_max = std::max(w_max, w[n]);
        }
        double norm = 0.0;
        for (int n = 0; n < M; ++n)
            norm += p[n] = w[n] == -HUGE_VAL ? 0.0 : std::exp(w[n] - w_max);
        for (double& v : p) v /= norm;
    }
    return run; // unreachable: max_iter >= 1 returns inside the loop
}

/// Exact mutual information, in bits, between a prior on the input alphabet
/// and the channel output it induces.
inline double prior_information_bits(const DiscreteChannel& ch,
                                     const std::vector<double>& p) {
    constexpr double ln2 = 0.6931471805599453;
    const int M = ch.alphabet();
    std::vector<double> r_out(M, 0.0);
    for (int n = 0; n < M; ++n) {
        if (p[n] == 0.0) continue;
        for (int m = 0; m < M; ++m) r_out[m] += p[n] * ch(m, n);
    }
    double info = 0.0;
    for (int n = 0; n < M; ++n) {
        if (p[n] == 0.0) continue;
        double kl = 0.0;
        for (int m = 0; m < M; ++m) {
            const double t_mn = ch(m, n);
            if (t_mn > 0.0 && r_out[m] > 0.0)
                kl += t_mn * (std::log(t_mn) - std::log(r_out[m]));
        }
        info += p[n] * kl;
    }
    return info / ln2;
}

/// Upper bound, in bits, on how far a prior meeting the mean-photon budget
/// can sit below the budget-constrained capacity.  For any reference output
/// distribution r and any price l >= 0,
///     C(nbar) <= max_n [ D(P_n || r) - l n ] + l nbar,
/// so evaluating the right side at the prior's own induced output and
/// minimizing the convex piecewise-linear function of l gives a certificate
/// for the prior's suboptimality.  Minimizing over the price matters: the
/// fixed-price iteration's own bound uses its solve price, under which a
/// letter far above the budget holds the bound open with a microscopic score
/// advantage the budget would never let it cash in -- re-pricing charges
/// such a letter its energy and removes exactly that looseness.
inline double constrained_gap_bits(const DiscreteChannel& ch,
                                   const std::vector<double>& p,
                                   double nbar) {
    constexpr double ln2 = 0.6931471805599453;
    const int M = ch.alphabet();
    std::vector<double> r_out(M, 0.0);
    for (int n = 0; n < M; ++n) {
        if (p[n] == 0.0) continue;
        for (int m = 0; m < M; ++m) r_out[m] += p[n] * ch(m, n);
    }
    // Letter scores against the induced output.  Outputs with zero induced
    // probability are skipped; any full-support prior induces full-support
    // outputs here, so at the solver's exits nothing is dropped.
    std::vector<double> d(M, 0.0);
    double info = 0.0;
    for (int n = 0; n < M; ++n) {
        double kl = 0.0;
        for (int m = 0; m < M; ++m) {
            const double t_mn = ch(m, n);
            if (t_mn > 0.0 && r_out[m] > 0.0)
                kl += t_mn * (std::log(t_mn) - std::log(r_out[m]));
        }
        d[n] = kl;
        info += p[n] * kl;
    }
    const auto bound_at = [&](double l) {
        double b = -HUGE_VAL;
        for (int n = 0; n < M; ++n) b = std::max(b, d[n] - l * n);
        return b + l * nbar;
    };
    double lo = 0.0, hi = 100.0; // letter scores are a few nats, so the
                                 // minimizing price sits well inside
    for (int i = 0; i < 160; ++i) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (bound_at(m1) <= bound_at(m2)) hi = m2;
        else lo = m1;
    }
    return std::max(0.0, (bound_at(0.5 * (lo + hi)) - info) / ln2);
}

/// Default truncation for a photon budget, sized so that at moderate-to-high
/// transmissivity the optimal prior's mass near the cutoff is negligible and
/// the capacity is stable against further enlargement.  At extreme loss the
/// optimal code is genuinely sparse and rides the top letters of any finite
/// alphabet, so the cutoff is part of the model there, not just headroom.
inline int default_cutoff(double nbar) {
    return static_cast<int>(std::lround(8.0 * std::max(nbar, 1.0))) + 40;
}

/// Capacity of the discrete channel under the mean-energy constraint
/// sum_n n p(n) = nbar, solved by root-finding the energy price lambda in
/// [0, 50] until the constraint holds within tol.  A price probe is accepted
/// as the solution once its energy meets the budget and its re-priced
/// certificate (constrained_gap_bits) is at most 1e-3 bits; the achieved
/// certificate is disclosed in params as "gap_bits".  Should the bracket
/// without meeting the budget -- the inner iteration's tolerance leaves
/// energy noise on the nearly flat face near the binding price -- the solver
/// time-shares the two bracketing priors, which meets the budget exactly
/// (params then carry "time_shared").  The result is exact for the truncated
/// alphabet as given; whether that alphabet adequately models an untruncated
/// channel is the caller's choice of n_cut.  Returns the achieving prior;
/// throws convergence_error when the budget cannot be met.
inline CapacityResult ba_capacity(const DiscreteChannel& ch, double nbar,
                                  double tol = 1e-6, int max_iter = 200000) {
    if (!(nbar > 0.0))
        throw std::domain_error("ba_capacity: nbar must be > 0");
    if (nbar >= 0.5 * ch.n_cut)
        throw std::invalid_argument("ba_capacity: cutoff too small for nbar");
    // Probe quality: ask each fixed-price solve for a 1e-4-bit certificate,
    // and cap the per-probe budget well below max_iter -- near a binding
    // price the certificate closes far more slowly than the iterate settles
    // (the energy is stable to several more digits than the gap bound
    // certifies), and the warm-start chain carries progress from probe to
    // probe, so letting one probe crawl to a tight certificate buys nothing
    // the next probes don't get cheaper.  A probe result is acceptable
    // wherever its own gap is small, certified or not.
    constexpr double probe_gap = 1e-4, probe_step = 1e-10, accept_gap = 1e-3;
    // Any exit must hold a duality gap at most gap_cap; converged runs still
    // carry a residual gap of order 1e-3 bits (the stopping rule bounds
    // per-step progress, not distance), so the cap sits an order above that,
    // and the achieved gap is always disclosed in params.
    constexpr double gap_cap = 1e-2;
    // A probe only has to aim the next secant step, and the mean energy of
    // the iterate freezes within a few thousand steps even when the gap
    // certificate takes tens of thousands more to close; the full budget is
    // reserved for the single polish run at the collapsed price.
    const int probe_iter = std::min(max_iter, 6000);
    const BaRun hot = ba_fixed_lambda(ch, 50.0, probe_gap, probe_step, probe_iter);
    if (hot.mean_energy > nbar)
        throw std::invalid_argument("ba_capacity: nbar below solvable range");
    // Root-find E(lambda) = nbar on interior prices first (the constraint
    // binds at an interior lambda on every standard path): an Illinois-damped
    // bracketed secant with a midpoint fallback, each solve warm-started from
    // the previous iterate.  The warm seed is blended with a sliver of the
    // target price's own Gibbs weights before reuse: a previous price can
    // starve a letter toward underflow, and the multiplicative update regrows
    // mass only exponentially in a letter's score advantage, so near
    // sparse-support optima a pure warm seed holds the duality bound open
    // for millions of iterations while the starved letter refills.  The
    // blend keeps the carried shape (fast when the support barely moves)
    // while guaranteeing every letter the target price could want sits at a
    // floor it can regrow from in a few thousand steps.  The unpriced
    // lambda = 0 solve, the one slow mode of the iteration, is only needed
    // when the bracket collapses toward 0, i.e. exactly when the
    // unconstrained optimum decides between a slack constraint and an
    // unreachable budget.
    const auto blend_seed = [&ch](const std::vector<double>& base,
                                  double lam) {
        const int M = ch.alphabet();
        std::vector<double> s(M);
        double z = 0.0;
        for (int n = 0; n < M; ++n) z += std::exp(-lam * n);
        constexpr double mu = 1e-6;
        for (int n = 0; n < M; ++n)
            s[n] = (1.0 - mu) * base[n] + mu * std::exp(-lam * n) / z;
        return s;
    };
    double lam_lo = 0.0, lam_hi = 50.0, lambda = 0.0;
    double f_lo = HUGE_VAL, f_hi = hot.mean_energy - nbar;
    int last_side = 0; // +1: lo replaced, -1: hi replaced (for Illinois damping)
    std::vector<double> warm = hot.prior;
    BaRun run, run_lo, run_hi = hot;
    bool solved = false, has_lo = false;
    long total_iters = hot.iterations; // inner iterations across all solves
    for (int it = 0; it < 200; ++it) {
        double cand = 0.5 * (lam_lo + lam_hi);
        if (std::isfinite(f_lo) && f_lo != f_hi) {
            const double secant = lam_lo + f_lo * (lam_hi - lam_lo) / (f_lo - f_hi);
            if (secant > lam_lo && secant < lam_hi) cand = secant;
        }
        lambda = cand;
        const std::vector<double> seed = blend_seed(warm, lambda);
        run = ba_fixed_lambda(ch, lambda, probe_gap, probe_step, probe_iter,
                              &seed);
        total_iters += run.iterations;
        warm = run.prior; // best iterate near this price, converged or not
        const double f = run.mean_energy - nbar;
        if (std::fabs(f) <= tol &&
            constrained_gap_bits(ch, run.prior, nbar) <= accept_gap) {
            solved = true;
            break;
        }
        if (f > 0.0) {
            lam_lo = lambda;
            f_lo = f;
            run_lo = run;
            has_lo = true;
            if (last_side == 1 && std::isfinite(f_hi)) f_hi *= 0.5;
            last_side = 1;
        } else {
            lam_hi = lambda;
            f_hi = f;
            run_hi = run;
            if (last_side == -1 && std::isfinite(f_lo)) f_lo *= 0.5;
            last_side = -1;
        }
        if (lam_hi - lam_lo <= 1e-14 * (1.0 + lam_hi)) break;
    }
    if (!solved) {
        if (lam_lo == 0.0) { // every probe undershot: resolve at lambda = 0
            lambda = 0.0;
            const std::vector<double> seed = blend_seed(warm, 0.0);
            run = ba_fixed_lambda(ch, 0.0, probe_gap, probe_step, max_iter,
                                  &seed);
            total_iters += run.iterations;
            if (run.converged && run.mean_energy < nbar - tol)
                throw std::invalid_argument(
                    "ba_capacity: alphabet cannot reach mean nbar");
        } else {
            // Bracket probes run on a short budget, so a collapsed bracket
            // can sit on the right price holding a budget-exact iterate
            // whose certificate has not closed yet (the iterate freezes long
            // before the gap bound does).  Spend the full budget once at the
            // collapsed price before choosing an exit.
            const std::vector<double> seed = blend_seed(warm, lambda);
            run = ba_fixed_lambda(ch, lambda, probe_gap, probe_step, max_iter,
                                  &seed);
            total_iters += run.iterations;
            if (run.mean_energy > nbar) {
                lam_lo = lambda;
                run_lo = run;
                has_lo = true;
            } else {
                lam_hi = lambda;
                run_hi = run;
            }
        }
        if (!(std::fabs(run.mean_energy - nbar) <= tol &&
              constrained_gap_bits(ch, run.prior, nbar) <= gap_cap)) {
            if (has_lo && run_lo.mean_energy > nbar &&
                nbar > run_hi.mean_energy &&
                lam_hi - lam_lo <= 1e-9 * (1.0 + lam_hi)) {
                // The bracket has collapsed to one price without meeting the
                // budget: near the binding price the priced objective has a
                // nearly flat face along which the mean energy moves while
                // the objective barely does, so the inner iteration either
                // stops with energy noise the root finder cannot resolve or
                // exhausts its budget mid-crawl.  The endpoint iterates are
                // genuine input distributions, and mean energy is linear in
                // the prior, so one mixing weight time-shares them into a
                // prior meeting the budget exactly; the mixture's exact
                // information is an achievable rate, and it is accepted on
                // its own re-priced certificate.
                const double span = run_lo.mean_energy - run_hi.mean_energy;
                const double alpha = (nbar - run_hi.mean_energy) / span;
                const int M = ch.alphabet();
                std::vector<double> p_mix(M);
                for (int n = 0; n < M; ++n)
                    p_mix[n] = alpha * run_lo.prior[n] +
                               (1.0 - alpha) * run_hi.prior[n];
                double energy = 0.0;
                for (int n = 0; n < M; ++n) energy += p_mix[n] * n;
                const double mix_gap = constrained_gap_bits(ch, p_mix, nbar);
                if (mix_gap <= gap_cap) {
                    CapacityResult res;
                    res.bits = prior_information_bits(ch, p_mix);
                    res.protocol = Protocol::NumberState;
                    res.params = {{"lambda", 0.5 * (lam_lo + lam_hi)},
                                  {"energy", energy},
                                  {"iterations",
                                   static_cast<double>(total_iters)},
                                  {"time_shared", 1.0},
                                  {"gap_bits", mix_gap}};
                    res.prior = std::move(p_mix);
                    return res;
                }
            }
            throw convergence_error("ba_capacity: energy bisection stalled",
                                    run.bits, std::fabs(run.mean_energy - nbar),
                                    run.iterations);
        }
    }
    CapacityResult res;
    res.bits = run.bits;
    res.protocol = Protocol::NumberState;
    res.params = {{"lambda", lambda},
                  {"energy", run.mean_energy},
                  {"iterations", static_cast<double>(total_iters)},
                  {"gap_bits", constrained_gap_bits(ch, run.prior, nbar)}};
    res.prior = std::move(run.prior);
    return res;
}

} // namespace gausscap
