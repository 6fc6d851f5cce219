#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gausscap/sweep.hpp"

namespace gausscap::cli {

namespace detail {

inline std::string join_args(const std::vector<std::string>& args) {
    std::string s = "gausscap";
    for (const auto& a : args) {
        s += ' ';
        s += a;
    }
    return s;
}

inline ChannelKind parse_kind(const std::string& name) {
    return name == "loss" ? ChannelKind::Loss : ChannelKind::Amplification;
}

/// Capacity plus reportable parameters for the single-point command.
inline CapacityResult point_result(sweep::CliProtocol p, const ChannelParams& ch,
                                   double nbar) {
    using sweep::CliProtocol;
    if (nbar == 0.0 || (ch.kind == ChannelKind::Loss && ch.strength == 0.0)) {
        CapacityResult res;
        res.bits = 0.0;
        return res;
    }
    switch (p) {
        case CliProtocol::Coherent:         return coherent_capacity(ch, nbar);
        case CliProtocol::CoherentHomodyne:
            return coherent_single_quadrature_capacity(ch, nbar);
        case CliProtocol::Squeezed:         return squeezed_capacity(ch, nbar);
        case CliProtocol::GaussianOpt:      return optimal_gaussian_capacity(ch, nbar);
        case CliProtocol::NumberState:
            return ba_capacity(pure_loss_transition(ch.strength, default_cutoff(nbar)),
                               nbar);
        default: break;
    }
    CapacityResult res;
    res.bits = sweep::eval_protocol(p, ch, nbar);
    res.protocol = p == CliProtocol::HolevoBound ? Protocol::HolevoBound
                                                 : Protocol::HolevoQuantity;
    return res;
}

struct OutputTarget {
    std::ofstream file;
    std::ostream* stream;

    OutputTarget(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            stream = &fallback;
            return;
        }
        file.open(path, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot open output file: " + path);
        stream = &file;
    }
    std::ostream& get() { return *stream; }
};

} // namespace detail

/// Runs the command line given as plain arguments (program name excluded).
/// Returns 0 on success, 2 on usage errors, 3 on solver convergence failure.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
    CLI::App app{"Classical communication capacities of single-mode "
                 "phase-insensitive Gaussian channels"};
    app.name("gausscap");
    app.require_subcommand(1);

    std::string channel = "loss", protocol_name, out_path;
    std::vector<std::string> protocol_names;
    double strength = 0.0, n_th = 0.0, nbar = 0.0;
    bool reproducible = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "write output to a file instead of stdout");
        sub->add_flag("--reproducible", reproducible,
                      "omit the timestamp so repeated runs are byte-identical");
    };

    CLI::App* cap = app.add_subcommand("capacity", "capacity at a single design point");
    cap->add_option("--channel", channel, "channel kind")
        ->check(CLI::IsMember({"loss", "amp"}))->required();
    cap->add_option("--strength", strength, "eta (loss) or gain (amp)")->required();
    cap->add_option("--nth", n_th, "thermal occupation of the environment");
    cap->add_option("--nbar", nbar, "mean photon budget per use")->required();
    cap->add_option("--protocol", protocol_name, "protocol to evaluate")->required();
    add_common(cap);

    std::string axis_name = "strength";
    double axis_from = 0.0, axis_to = 0.0;
    int steps = 0;
    bool log_axis = false;
    CLI::App* swp = app.add_subcommand("sweep", "capacity columns along one axis");
    swp->add_option("--channel", channel, "channel kind")
        ->check(CLI::IsMember({"loss", "amp"}))->required();
    swp->add_option("--nth", n_th, "thermal occupation of the environment");
    swp->add_option("--axis", axis_name, "swept axis")
        ->check(CLI::IsMember({"strength", "nbar"}))->required();
    swp->add_option("--from", axis_from, "axis start")->required();
    swp->add_option("--to", axis_to, "axis end")->required();
    swp->add_option("--steps", steps, "number of samples")->required();
    swp->add_flag("--log", log_axis, "log-spaced axis");
    CLI::Option* swp_strength =
        swp->add_option("--strength", strength, "fixed eta/gain (nbar axis)");
    CLI::Option* swp_nbar =
        swp->add_option("--nbar", nbar, "fixed photon budget (strength axis)");
    swp->add_option("--protocols", protocol_names, "comma-separated protocol list")
        ->delimiter(',')->required();
    add_common(swp);

    double strength_from = 0.0, strength_to = 0.0, nbar_from = 0.0, nbar_to = 0.0;
    int strength_steps = 0, nbar_steps = 0;
    CLI::App* reg = app.add_subcommand(
        "region", "coherent-minus-squeezed capacity over a (strength, nbar) grid");
    reg->add_option("--channel", channel, "channel kind")
        ->check(CLI::IsMember({"loss", "amp"}))->required();
    reg->add_option("--nth", n_th, "thermal occupation of the environment");
    reg->add_option("--strength-from", strength_from, "strength axis start")->required();
    reg->add_option("--strength-to", strength_to, "strength axis end")->required();
    reg->add_option("--strength-steps", strength_steps, "strength samples")->required();
    reg->add_option("--nbar-from", nbar_from, "nbar axis start")->required();
    reg->add_option("--nbar-to", nbar_to, "nbar axis end")->required();
    reg->add_option("--nbar-steps", nbar_steps, "nbar samples")->required();
    add_common(reg);

    bool linear = false;
    CLI::App* eff = app.add_subcommand("efficiency",
                                       "photon information efficiency C/nbar");
    eff->add_option("--channel", channel, "channel kind")
        ->check(CLI::IsMember({"loss", "amp"}))->required();
    eff->add_option("--strength", strength, "eta (loss) or gain (amp)")->required();
    eff->add_option("--nth", n_th, "thermal occupation of the environment");
    eff->add_option("--nbar-from", nbar_from, "nbar start (must be > 0)")->required();
    eff->add_option("--nbar-to", nbar_to, "nbar end")->required();
    eff->add_option("--steps", steps, "number of samples")->required();
    eff->add_flag("--linear", linear, "linear nbar spacing (default log)");
    eff->add_option("--protocols", protocol_names, "comma-separated protocol list")
        ->delimiter(',')->required();
    add_common(eff);

    CLI::App* crit = app.add_subcommand(
        "critical-n", "photon budget where coherent signalling overtakes squeezed");
    crit->add_option("--nth", n_th, "thermal occupation of the environment");
    add_common(crit);

    int cutoff = 0, max_iter = 200000;
    double ba_tol = 1e-6;
    CLI::App* num = app.add_subcommand("number-state",
                                       "photon-counting capacity of a pure-loss channel");
    num->add_option("--strength", strength, "transmissivity eta")->required();
    num->add_option("--nth", n_th, "must be 0 (pure loss only)");
    num->add_option("--nbar", nbar, "mean photon budget per use")->required();
    num->add_option("--cutoff", cutoff, "photon-number truncation (0 = automatic)");
    num->add_option("--tol", ba_tol, "energy-constraint tolerance");
    num->add_option("--max-iter", max_iter, "iteration budget per inner solve");
    add_common(num);

    try {
        std::vector<const char*> argv;
        argv.reserve(args.size() + 1);
        argv.push_back("gausscap");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const sweep::CsvMeta meta{detail::join_args(args), reproducible};
    try {
        if (cap->parsed()) {
            const ChannelKind kind = detail::parse_kind(channel);
            const sweep::CliProtocol proto = sweep::parse_protocol(protocol_name);
            if (!sweep::protocol_supported(proto, kind, n_th))
                throw unsupported_protocol(sweep::unsupported_reason(proto, kind));
            const ChannelParams ch = kind == ChannelKind::Loss
                ? ChannelParams::loss(strength, n_th)
                : ChannelParams::amplification(strength, n_th);
            const CapacityResult res = detail::point_result(proto, ch, nbar);
            detail::OutputTarget target(out_path, out);
            std::ostream& o = target.get();
            o << "protocol: " << protocol_name << "\n";
            o << "channel: " << channel << " strength=" << sweep::fmt9(strength)
              << " nth=" << sweep::fmt9(n_th) << "\n";
            o << "nbar: " << sweep::fmt9(nbar) << "\n";
            o << "capacity_bits: " << sweep::fmt9(res.bits) << "\n";
            for (const auto& [key, value] : res.params)
                o << key << ": " << sweep::fmt9(value) << "\n";
            return 0;
        }
        if (swp->parsed()) {
            sweep::SweepSpec spec;
            spec.kind = detail::parse_kind(channel);
            spec.n_th = n_th;
            spec.axis = axis_name == "strength" ? sweep::SweepSpec::Axis::Strength
                                                : sweep::SweepSpec::Axis::Nbar;
            spec.from = axis_from;
            spec.to = axis_to;
            spec.steps = steps;
            spec.log = log_axis;
            if (spec.axis == sweep::SweepSpec::Axis::Strength) {
                if (swp_strength->count() > 0)
                    throw std::invalid_argument(
                        "sweep: --strength conflicts with --axis strength");
                if (swp_nbar->count() == 0)
                    throw std::invalid_argument("sweep: --axis strength needs --nbar");
                spec.fixed_nbar = nbar;
            } else {
                if (swp_nbar->count() > 0)
                    throw std::invalid_argument("sweep: --nbar conflicts with --axis nbar");
                if (swp_strength->count() == 0)
                    throw std::invalid_argument("sweep: --axis nbar needs --strength");
                spec.fixed_strength = strength;
            }
            std::vector<sweep::CliProtocol> protocols;
            for (const auto& name : protocol_names)
                protocols.push_back(sweep::parse_protocol(name));
            detail::OutputTarget target(out_path, out);
            sweep::run_sweep(spec, protocols, meta, target.get(), err);
            return 0;
        }
        if (reg->parsed()) {
            sweep::RegionSpec spec;
            spec.kind = detail::parse_kind(channel);
            spec.n_th = n_th;
            spec.strength_from = strength_from;
            spec.strength_to = strength_to;
            spec.strength_steps = strength_steps;
            spec.nbar_from = nbar_from;
            spec.nbar_to = nbar_to;
            spec.nbar_steps = nbar_steps;
            detail::OutputTarget target(out_path, out);
            sweep::run_region(spec, meta, target.get());
            return 0;
        }
        if (eff->parsed()) {
            sweep::EfficiencySpec spec;
            spec.kind = detail::parse_kind(channel);
            spec.strength = strength;
            spec.n_th = n_th;
            spec.nbar_from = nbar_from;
            spec.nbar_to = nbar_to;
            spec.steps = steps;
            spec.log = !linear;
            std::vector<sweep::CliProtocol> protocols;
            for (const auto& name : protocol_names)
                protocols.push_back(sweep::parse_protocol(name));
            detail::OutputTarget target(out_path, out);
            sweep::run_efficiency(spec, protocols, meta, target.get(), err);
            return 0;
        }
        if (crit->parsed()) {
            detail::OutputTarget target(out_path, out);
            target.get() << "critical_nbar: "
                         << sweep::fmt9(critical_photon_number(n_th)) << "\n";
            return 0;
        }
        if (num->parsed()) {
            if (n_th != 0.0)
                throw unsupported_protocol(
                    "number-state is not defined for a loss channel with n_th > 0");
            const ChannelParams ch = ChannelParams::loss(strength, 0.0);
            const int n_cut = cutoff > 0 ? cutoff : default_cutoff(nbar);
            detail::OutputTarget target(out_path, out);
            std::ostream& o = target.get();
            if (nbar == 0.0 || strength == 0.0) {
                o << "capacity_bits: 0\n";
                return 0;
            }
            const CapacityResult res =
                ba_capacity(pure_loss_transition(ch.strength, n_cut), nbar, ba_tol,
                            max_iter);
            o << "capacity_bits: " << sweep::fmt9(res.bits) << "\n";
            o << "cutoff: " << n_cut << "\n";
            for (const auto& [key, value] : res.params)
                o << key << ": " << sweep::fmt9(value) << "\n";
            return 0;
        }
    } catch (const convergence_error& e) {
        err << "error: " << e.what() << " (last=" << sweep::fmt9(e.last_bits)
            << " bits, gap estimate=" << sweep::fmt9(e.gap)
            << ", iterations=" << e.iterations << ")\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace gausscap::cli
