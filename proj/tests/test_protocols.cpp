#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gausscap/protocols.hpp"

using namespace gausscap;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ChannelParams kHalfLoss = ChannelParams::loss(0.5, 0.0);

double channel_noise(const ChannelParams& ch) { return ch.added_noise(); }

double signal_transmission(const ChannelParams& ch) { return ch.strength; }

// Reference crossing law for heterodyne-vs-homodyne coherent capacity:
// they are equal exactly when  S*nbar = 1 + 1/(S + N).
double crossing_residual(double eta, double n_th, double nbar) {
    const ChannelParams ch = ChannelParams::loss(eta, n_th);
    const double s = signal_transmission(ch), n = channel_noise(ch);
    return s * nbar - (1.0 + 1.0 / (s + n));
}

} // namespace

TEST_CASE("coherent capacity: pinned values") {
    for (double nbar : {0.1, 1.0, 3.0, 10.0}) {
        CHECK_THAT(coherent_capacity(ChannelParams::loss(1.0, 0.0), nbar).bits,
                   WithinRel(std::log2(1.0 + nbar), 1e-12));
    }
    CHECK_THAT(coherent_capacity(kHalfLoss, 3.0).bits,
               WithinRel(1.3219280948873623, 1e-12));
    CHECK(coherent_capacity(kHalfLoss, 0.0).bits == 0.0);
    CHECK_THROWS_AS(coherent_capacity(kHalfLoss, -1.0), std::domain_error);
}

TEST_CASE("coherent capacity under noiseless amplification is gain-independent") {
    for (double nbar : {0.3, 2.0, 7.0}) {
        const double base = std::log2(1.0 + nbar);
        for (double gain : {1.0, 1.5, 2.0, 3.0, 10.0}) {
            CHECK_THAT(coherent_capacity(ChannelParams::amplification(gain, 0.0), nbar).bits,
                       WithinRel(base, 1e-12));
        }
    }
}

TEST_CASE("single-quadrature coherent capacity: pinned values") {
    CHECK_THAT(coherent_single_quadrature_capacity(ChannelParams::loss(1.0, 0.0), 2.0).bits,
               WithinRel(1.5849625007211562, 1e-12));
    // eta=0.5, nbar=0.5: (1/2)log2(1 + 4*0.5*0.5/(0.5+0.5)) = (1/2)log2 2 = 0.5
    CHECK_THAT(coherent_single_quadrature_capacity(kHalfLoss, 0.5).bits,
               WithinAbs(0.5, 1e-14));
    // eta=0.5, nbar=0.25: (1/2)log2(1.5)
    CHECK_THAT(coherent_single_quadrature_capacity(kHalfLoss, 0.25).bits,
               WithinRel(0.2924812503605781, 1e-12));
}

TEST_CASE("optimal squeezing: closed positions") {
    // Noiseless channel: e^{2r} = 1 + 2 nbar exactly.
    for (double nbar : {0.0, 0.5, 3.0, 20.0}) {
        const double r = optimal_squeezing(ChannelParams::loss(1.0, 0.0), nbar);
        CHECK_THAT(std::exp(2.0 * r), WithinRel(1.0 + 2.0 * nbar, 1e-12));
    }
    // eta=0.5, nbar=3: e^{2r} = 3, r = ln(3)/2
    CHECK_THAT(optimal_squeezing(kHalfLoss, 3.0), WithinRel(0.5493061443340549, 1e-12));
}

TEST_CASE("optimal squeezing matches direct quadratic root when noise is present") {
    // Direct textbook root of the stationarity condition, valid for N > 0:
    // e^{2r} = (-S + sqrt((N+S)^2 + 4 S N nbar)) / N
    struct Case { double eta, n_th, nbar; };
    for (const Case& c : {Case{0.5, 0.5, 3.0}, Case{0.7, 1e-8, 1.0}, Case{0.2, 2.0, 10.0}}) {
        const ChannelParams ch = ChannelParams::loss(c.eta, c.n_th);
        const double s = signal_transmission(ch), n = channel_noise(ch);
        const double direct =
            (-s + std::sqrt((n + s) * (n + s) + 4.0 * s * n * c.nbar)) / n;
        CHECK_THAT(std::exp(2.0 * optimal_squeezing(ch, c.nbar)),
                   WithinRel(direct, 1e-9));
    }
}

TEST_CASE("optimal squeezing respects the photon budget") {
    for (double eta : {0.1, 0.5, 0.9, 1.0}) {
        for (double n_th : {0.0, 1.0}) {
            for (double nbar : {0.1, 1.0, 5.0, 15.0}) {
                const double r = optimal_squeezing(ChannelParams::loss(eta, n_th), nbar);
                const double sh = std::sinh(r);
                CHECK(sh * sh <= nbar * (1.0 + 1e-12) + 1e-15);
            }
        }
    }
}

TEST_CASE("squeezed-state capacity: pinned values") {
    for (double nbar : {0.1, 1.0, 3.0, 10.0}) {
        CHECK_THAT(squeezed_capacity(ChannelParams::loss(1.0, 0.0), nbar).bits,
                   WithinRel(std::log2(1.0 + 2.0 * nbar), 1e-12));
    }
    const CapacityResult res = squeezed_capacity(kHalfLoss, 3.0);
    CHECK_THAT(res.bits, WithinRel(1.5849625007211562, 1e-12));
    CHECK(res.protocol == Protocol::SqueezedHomodyne);
    const double r = res.params.at("r_opt");
    CHECK_THAT(r, WithinRel(0.5493061443340549, 1e-12));
    const double sh2 = std::sinh(r) * std::sinh(r);
    CHECK_THAT(res.params.at("sigma_x2"), WithinRel(2.0 * (3.0 - sh2), 1e-12));
    CHECK(res.params.at("sigma_p2") == 0.0);
}

TEST_CASE("squeezing never hurts a homodyne receiver") {
    for (double eta : {0.2, 0.6, 1.0}) {
        for (double n_th : {0.0, 0.7, 2.0}) {
            const ChannelParams ch = ChannelParams::loss(eta, n_th);
            for (double nbar : {0.1, 1.0, 4.0, 12.0}) {
                CHECK(squeezed_capacity(ch, nbar).bits
                          >= coherent_single_quadrature_capacity(ch, nbar).bits - 1e-12);
            }
        }
    }
}

TEST_CASE("capacities grow with photons and shrink with thermal noise") {
    const double etas[] = {0.3, 0.8};
    for (double eta : etas) {
        double prev_coh = -1.0, prev_sq = -1.0;
        for (double nbar = 0.2; nbar < 8.0; nbar += 0.4) {
            const ChannelParams ch = ChannelParams::loss(eta, 0.5);
            const double c = coherent_capacity(ch, nbar).bits;
            const double q = squeezed_capacity(ch, nbar).bits;
            REQUIRE(c > prev_coh);
            REQUIRE(q > prev_sq);
            prev_coh = c;
            prev_sq = q;
        }
        double prev = 1e9;
        for (double n_th = 0.0; n_th < 3.0; n_th += 0.25) {
            const double c = coherent_capacity(ChannelParams::loss(eta, n_th), 2.0).bits;
            REQUIRE(c < prev + 1e-15);
            prev = c;
        }
    }
}

TEST_CASE("critical photon number: pinned values and monotonicity") {
    CHECK(critical_photon_number(0.0) == 8.0);
    CHECK_THAT(critical_photon_number(1.0), WithinRel(3.8856180831641267, 1e-12));
    CHECK_THAT(critical_photon_number(2.0), WithinRel(2.9856406460551018, 1e-12));
    double prev = 9.0;
    for (double n_th = 0.0; n_th <= 5.0; n_th += 0.1) {
        const double nc = critical_photon_number(n_th);
        REQUIRE(nc < prev);
        prev = nc;
    }
    CHECK_THROWS_AS(critical_photon_number(-0.5), std::domain_error);
}

TEST_CASE("critical photon number separates the squeezed-vs-coherent winner") {
    for (double n_th : {0.0, 0.5, 1.0, 2.0}) {
        const double nc = critical_photon_number(n_th);
        // below critical photons, squeezing wins at every transmissivity
        for (double eta : {0.05, 0.2, 0.5, 0.8, 0.99}) {
            const ChannelParams ch = ChannelParams::loss(eta, n_th);
            CHECK(squeezed_capacity(ch, 0.9 * nc).bits
                      > coherent_capacity(ch, 0.9 * nc).bits - 1e-12);
        }
        // above, coherent pulls ahead first at the least favourable
        // transmissivity sqrt(1+n_th)/(1+sqrt(1+n_th)) ...
        const double q = std::sqrt(1.0 + n_th);
        const ChannelParams worst = ChannelParams::loss(q / (1.0 + q), n_th);
        for (double factor : {1.1, 4.0}) {
            CHECK(coherent_capacity(worst, factor * nc).bits
                      > squeezed_capacity(worst, factor * nc).bits);
        }
        // ... while extreme transmissivities still favour squeezing there
        for (double eta : {0.02, 0.995}) {
            const ChannelParams ch = ChannelParams::loss(eta, n_th);
            CHECK(squeezed_capacity(ch, 1.1 * nc).bits
                      > coherent_capacity(ch, 1.1 * nc).bits);
        }
    }
}

TEST_CASE("heterodyne-homodyne crossing follows the transmission-noise law") {
    // The two coherent-state strategies swap rank where S*nbar = 1 + 1/(S+N).
    const double nbar = 5.0;
    for (double n_th : {0.0, 0.5, 1.0, 2.0}) {
        double lo = 0.05, hi = 0.99;
        auto delta = [&](double eta) {
            const ChannelParams ch = ChannelParams::loss(eta, n_th);
            return coherent_capacity(ch, nbar).bits
                 - coherent_single_quadrature_capacity(ch, nbar).bits;
        };
        REQUIRE(delta(lo) < 0.0);
        REQUIRE(delta(hi) > 0.0);
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (delta(mid) < 0.0 ? lo : hi) = mid;
        }
        const double eta_star = 0.5 * (lo + hi);
        CHECK_THAT(crossing_residual(eta_star, n_th, nbar), WithinAbs(0.0, 1e-9));
    }
}

TEST_CASE("coarse-grained amplifier capacity") {
    const ChannelParams amp = ChannelParams::amplification(2.0, 0.0);

    SECTION("matches plain coherent capacity at unit resolution") {
        for (double nbar : {0.5, 2.0, 6.0}) {
            CHECK_THAT(coarse_grained_coherent_capacity(amp, nbar, 1.0).bits,
                       WithinRel(coherent_capacity(amp, nbar).bits, 1e-12));
        }
    }

    SECTION("gain helps if and only if the window beats intrinsic noise") {
        for (double n_th : {0.0, 1.0}) {
            const double threshold = 1.0 + 2.0 * n_th;
            for (double w : {1.5, 2.0, 4.0}) {
                const double lo = coarse_grained_coherent_capacity(
                    ChannelParams::amplification(2.0, n_th), 3.0, w).bits;
                const double hi = coarse_grained_coherent_capacity(
                    ChannelParams::amplification(4.0, n_th), 3.0, w).bits;
                if (w > threshold + 1e-12) {
                    CHECK(hi > lo);
                } else if (w < threshold - 1e-12) {
                    CHECK(hi < lo);
                } else {
                    CHECK_THAT(hi, WithinRel(lo, 1e-12));
                }
            }
        }
    }

    SECTION("rejects loss channels and windows below the quantum limit") {
        CHECK_THROWS_AS(coarse_grained_coherent_capacity(kHalfLoss, 1.0, 2.0),
                        unsupported_protocol);
        CHECK_THROWS_AS(coarse_grained_coherent_capacity(amp, 1.0, 0.5),
                        std::domain_error);
    }
}
