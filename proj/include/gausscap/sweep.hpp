#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>
#include <string>
#include <vector>

#include "gausscap/general.hpp"
#include "gausscap/holevo.hpp"
#include "gausscap/number_state.hpp"
#include "gausscap/protocols.hpp"
#include "gausscap/version.hpp"

namespace gausscap::sweep {

/// Shortest round-trip decimal truncated to 9 significant digits; locale-free,
/// so CSV bytes are stable across platforms and runs.
inline std::string fmt9(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v,
                                   std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

inline std::string iso_utc_now() {
    const std::time_t t =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

enum class CliProtocol {
    Coherent,
    CoherentHomodyne,
    Squeezed,
    GaussianOpt,
    NumberState,
    HolevoQuantityCoherent,
    HolevoQuantitySqueezed,
    HolevoBound,
};

inline const char* protocol_label(CliProtocol p) {
    switch (p) {
        case CliProtocol::Coherent:               return "coherent";
        case CliProtocol::CoherentHomodyne:       return "coherent-homodyne";
        case CliProtocol::Squeezed:               return "squeezed";
        case CliProtocol::GaussianOpt:            return "gaussian-opt";
        case CliProtocol::NumberState:            return "number-state";
        case CliProtocol::HolevoQuantityCoherent: return "holevo-quantity-coherent";
        case CliProtocol::HolevoQuantitySqueezed: return "holevo-quantity-squeezed";
        case CliProtocol::HolevoBound:            return "holevo-bound";
    }
    throw std::invalid_argument("unknown protocol enum");
}

inline CliProtocol parse_protocol(const std::string& name) {
    for (CliProtocol p : {CliProtocol::Coherent, CliProtocol::CoherentHomodyne,
                          CliProtocol::Squeezed, CliProtocol::GaussianOpt,
                          CliProtocol::NumberState, CliProtocol::HolevoQuantityCoherent,
                          CliProtocol::HolevoQuantitySqueezed, CliProtocol::HolevoBound})
        if (name == protocol_label(p)) return p;
    throw std::invalid_argument(
        "unknown protocol '" + name + "' (expected coherent, coherent-homodyne, "
        "squeezed, gaussian-opt, number-state, holevo-quantity-coherent, "
        "holevo-quantity-squeezed or holevo-bound)");
}

/// Photon counting needs a pure-loss channel; everything else is defined for
/// both channel kinds at any thermal occupation.
inline bool protocol_supported(CliProtocol p, ChannelKind kind, double n_th) {
    if (p == CliProtocol::NumberState)
        return kind == ChannelKind::Loss && n_th == 0.0;
    return true;
}

inline std::string unsupported_reason(CliProtocol p, ChannelKind kind) {
    return std::string(protocol_label(p)) + " is not defined for "
         + (kind == ChannelKind::Loss ? "a loss channel with n_th > 0"
                                      : "an amplification channel");
}

/// Single capacity value in bits.  Degenerate rows (eta = 0 or nbar = 0)
/// short-circuit to exactly 0 instead of exercising the formulas.
inline double eval_protocol(CliProtocol p, const ChannelParams& ch, double nbar) {
    if (nbar == 0.0) return 0.0;
    if (ch.kind == ChannelKind::Loss && ch.strength == 0.0) return 0.0;
    switch (p) {
        case CliProtocol::Coherent:         return coherent_capacity(ch, nbar).bits;
        case CliProtocol::CoherentHomodyne:
            return coherent_single_quadrature_capacity(ch, nbar).bits;
        case CliProtocol::Squeezed:         return squeezed_capacity(ch, nbar).bits;
        case CliProtocol::GaussianOpt:      return optimal_gaussian_capacity(ch, nbar).bits;
        case CliProtocol::NumberState:
            return ba_capacity(pure_loss_transition(ch.strength, default_cutoff(nbar)),
                               nbar).bits;
        case CliProtocol::HolevoQuantityCoherent:
            return holevo_quantity(ch, coherent_ensemble(nbar));
        case CliProtocol::HolevoQuantitySqueezed:
            return holevo_quantity(ch, squeezed_ensemble(ch, nbar));
        case CliProtocol::HolevoBound:      return holevo_bound(ch, nbar);
    }
    throw std::invalid_argument("unknown protocol enum");
}

struct CsvMeta {
    std::string command_line;
    bool reproducible = false;
};

inline void write_metadata(std::ostream& out, const CsvMeta& meta) {
    out << "# gausscap " << version_string << "\n";
    out << "# command: " << meta.command_line << "\n";
    if (!meta.reproducible) out << "# generated: " << iso_utc_now() << "\n";
}

inline std::vector<double> axis_values(double from, double to, int steps, bool log) {
    std::vector<double> v(steps);
    if (log) {
        const double lf = std::log(from), lt = std::log(to);
        for (int i = 0; i < steps; ++i)
            v[i] = std::exp(lf + (lt - lf) * i / (steps - 1));
    } else {
        for (int i = 0; i < steps; ++i)
            v[i] = from + (to - from) * i / (steps - 1);
    }
    v.front() = from;
    v.back() = to;
    return v;
}

struct SweepSpec {
    ChannelKind kind = ChannelKind::Loss;
    double n_th = 0.0;
    enum class Axis { Strength, Nbar } axis = Axis::Strength;
    double fixed_strength = 1.0; // used when axis == Nbar
    double fixed_nbar = 1.0;     // used when axis == Strength
    double from = 0.0, to = 1.0;
    int steps = 2;
    bool log = false;

    const char* axis_name() const {
        if (axis == Axis::Nbar) return "nbar";
        return kind == ChannelKind::Loss ? "eta" : "gain";
    }

    void validate() const {
        if (n_th < 0.0) throw std::domain_error("sweep: n_th must be >= 0");
        if (steps < 2) throw std::invalid_argument("sweep: need at least 2 steps");
        if (!(from < to)) throw std::invalid_argument("sweep: need from < to");
        if (log && !(from > 0.0))
            throw std::invalid_argument("sweep: log axis requires from > 0");
        const auto check_strength = [&](double s) {
            if (kind == ChannelKind::Loss) {
                if (!(s >= 0.0 && s <= 1.0))
                    throw std::domain_error("sweep: eta must lie in [0, 1]");
            } else if (!(s >= 1.0)) {
                throw std::domain_error("sweep: gain must be >= 1");
            }
        };
        if (axis == Axis::Strength) {
            check_strength(from);
            check_strength(to);
            if (fixed_nbar < 0.0) throw std::domain_error("sweep: nbar must be >= 0");
        } else {
            if (from < 0.0) throw std::domain_error("sweep: nbar must be >= 0");
            check_strength(fixed_strength);
        }
    }

    ChannelParams channel_at(double strength) const {
        return kind == ChannelKind::Loss ? ChannelParams::loss(strength, n_th)
                                         : ChannelParams::amplification(strength, n_th);
    }
};

/// Emits the sweep as CSV.  Protocols the channel does not support are
/// dropped from the column list with a note on the diagnostic stream.
inline void run_sweep(const SweepSpec& spec, const std::vector<CliProtocol>& protocols,
                      const CsvMeta& meta, std::ostream& out, std::ostream& diag) {
    spec.validate();
    if (protocols.empty()) throw std::invalid_argument("sweep: no protocols requested");
    std::vector<CliProtocol> cols;
    for (CliProtocol p : protocols) {
        if (protocol_supported(p, spec.kind, spec.n_th)) cols.push_back(p);
        else diag << "warning: omitting column: " << unsupported_reason(p, spec.kind) << "\n";
    }
    if (cols.empty()) throw std::invalid_argument("sweep: no supported protocols left");

    write_metadata(out, meta);
    out << spec.axis_name();
    for (CliProtocol p : cols) out << "," << protocol_label(p);
    out << "\n";
    for (double x : axis_values(spec.from, spec.to, spec.steps, spec.log)) {
        const double strength = spec.axis == SweepSpec::Axis::Strength
                              ? x : spec.fixed_strength;
        const double nbar = spec.axis == SweepSpec::Axis::Nbar ? x : spec.fixed_nbar;
        const ChannelParams ch = spec.channel_at(strength);
        out << fmt9(x);
        for (CliProtocol p : cols) out << "," << fmt9(eval_protocol(p, ch, nbar));
        out << "\n";
    }
}

struct RegionSpec {
    ChannelKind kind = ChannelKind::Loss;
    double n_th = 0.0;
    double strength_from = 0.0, strength_to = 1.0;
    int strength_steps = 2;
    double nbar_from = 0.0, nbar_to = 8.0;
    int nbar_steps = 2;
};

/// Coherent-minus-squeezed capacity difference over a (strength, nbar) grid.
/// For loss channels the critical photon budget is recorded as metadata.
inline void run_region(const RegionSpec& spec, const CsvMeta& meta, std::ostream& out) {
    SweepSpec strength_axis{spec.kind, spec.n_th, SweepSpec::Axis::Strength,
                            1.0, 0.0, spec.strength_from, spec.strength_to,
                            spec.strength_steps, false};
    strength_axis.validate();
    SweepSpec nbar_axis{spec.kind, spec.n_th, SweepSpec::Axis::Nbar,
                        spec.kind == ChannelKind::Loss ? 1.0 : spec.strength_to,
                        0.0, spec.nbar_from, spec.nbar_to, spec.nbar_steps, false};
    nbar_axis.validate();

    write_metadata(out, meta);
    if (spec.kind == ChannelKind::Loss)
        out << "# critical_nbar: " << fmt9(critical_photon_number(spec.n_th)) << "\n";
    out << "strength,nbar,delta\n";
    const auto strengths = axis_values(spec.strength_from, spec.strength_to,
                                       spec.strength_steps, false);
    const auto nbars = axis_values(spec.nbar_from, spec.nbar_to, spec.nbar_steps, false);
    for (double s : strengths) {
        const ChannelParams ch = strength_axis.channel_at(s);
        for (double nbar : nbars) {
            double delta = 0.0;
            if (nbar > 0.0 && !(spec.kind == ChannelKind::Loss && s == 0.0))
                delta = coherent_capacity(ch, nbar).bits - squeezed_capacity(ch, nbar).bits;
            out << fmt9(s) << "," << fmt9(nbar) << "," << fmt9(delta) << "\n";
        }
    }
}

struct EfficiencySpec {
    ChannelKind kind = ChannelKind::Loss;
    double strength = 1.0;
    double n_th = 0.0;
    double nbar_from = 0.01, nbar_to = 10.0;
    int steps = 2;
    bool log = true;
};

/// Photon information efficiency C/nbar per protocol over an nbar range.
inline void run_efficiency(const EfficiencySpec& spec,
                           const std::vector<CliProtocol>& protocols,
                           const CsvMeta& meta, std::ostream& out, std::ostream& diag) {
    if (!(spec.nbar_from > 0.0))
        throw std::invalid_argument("efficiency: nbar range must start above 0");
    SweepSpec axis{spec.kind, spec.n_th, SweepSpec::Axis::Nbar, spec.strength, 0.0,
                   spec.nbar_from, spec.nbar_to, spec.steps, spec.log};
    axis.validate();
    if (protocols.empty())
        throw std::invalid_argument("efficiency: no protocols requested");
    std::vector<CliProtocol> cols;
    for (CliProtocol p : protocols) {
        if (protocol_supported(p, spec.kind, spec.n_th)) cols.push_back(p);
        else diag << "warning: omitting column: " << unsupported_reason(p, spec.kind) << "\n";
    }
    if (cols.empty()) throw std::invalid_argument("efficiency: no supported protocols left");

    write_metadata(out, meta);
    out << "nbar";
    for (CliProtocol p : cols) out << "," << protocol_label(p);
    out << "\n";
    const ChannelParams ch = axis.channel_at(spec.strength);
    for (double nbar : axis_values(spec.nbar_from, spec.nbar_to, spec.steps, spec.log)) {
        out << fmt9(nbar);
        for (CliProtocol p : cols)
            out << "," << fmt9(eval_protocol(p, ch, nbar) / nbar);
        out << "\n";
    }
}

} // namespace gausscap::sweep
