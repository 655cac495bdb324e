#pragma once

// Builders for the canonical readout circuits seen from a transmon's
// junction terminals: a lumped single resonator mode, a truncated Foster
// stack of modes, and a full transmission-line resonator with a tapped
// readout port. The qubit capacitance is never part of the tree; it enters
// only through T1 = Cq / Re[Y].

#include <optional>
#include <string>
#include <vector>

#include "purcellsim/network.hpp"

namespace purcellsim {

struct SingleModeParams {
    double cq;                 // qubit shunt capacitance, F
    double cg;                 // qubit-resonator coupling, F
    double lr;                 // resonator inductance, H
    double cr;                 // resonator capacitance, F
    double ckappa;             // resonator-load coupling, F
    double rload = 50.0;       // ohm

    double resonator_hz() const;
    // Nonempty when the resonator sits outside [1, 30] GHz.
    std::optional<std::string> validity_warning() const;
};

struct MultiModeParams {
    SingleModeParams base;
    int n_modes = 3;
    // Empty means harmonics n * f1 of the base resonator.
    std::vector<double> mode_frequencies_hz;
    // Optional shunt resistance per mode; empty means lossless modes.
    std::vector<std::optional<double>> per_mode_loss;

    std::vector<double> resolved_mode_frequencies() const;
};

struct TLineModelParams {
    double cq;
    double cg;
    TLine line;
    double port_position;      // meters from the qubit-coupled end
    double ckappa;
    double rload = 50.0;
};

void validate(const SingleModeParams& p);
void validate(const MultiModeParams& p);
void validate(const TLineModelParams& p);

// series(Cg, shunt(parallel LC, series(Ckappa, load)))
NetworkTree build_single_mode(const SingleModeParams& p);

// series(Cg, shunt(mode stack, series(Ckappa, load))) where the mode stack is
// parallel-LC sections in series down to ground. Every mode carries the base
// capacitance Cr with L_n = 1 / (w_n^2 Cr). With one mode this is exactly the
// single-mode tree.
NetworkTree build_multi_mode(const MultiModeParams& p);

// series(Cg, line(x, shunt(series(Ckappa, load), line(l - x, open))))
NetworkTree build_tline_model(const TLineModelParams& p);

// Foster form of an open-open line seen from one end: a series capacitor
// C_line followed by n parallel-LC sections (C_n = C_line / 2) to ground.
NetworkTree build_mode_stack(const TLine& line, int n_modes);

// Resonator half of the single-mode circuit with the qubit port held at
// ground (Cg to ground), for ring-down and eigenfrequency calculations.
struct ResonatorMode {
    double omega;              // rad/s, damped oscillation frequency
    double kappa;              // rad/s, energy decay rate (2 |Im s|)
};
ResonatorMode ring_down(const SingleModeParams& p);

// Qubit-resonator coupling g (rad/s) from the minimum splitting of the two
// normal modes of the lossless capacitance/inductance matrix problem, with
// the load replaced by ground and the qubit inductance swept.
double coupling_strength(const SingleModeParams& p);

// Reference parameter set: 7 GHz lambda/2 resonator on a 50 ohm line, 50 ohm
// load, Cq = 70 fF, Ckappa solved for kappa/2pi = 5 MHz and Cg for
// g/2pi = 100 MHz. Cq and Cg are calibration choices, not measured values.
struct DefaultDesign {
    double f1_hz = 7e9;
    double z0 = 50.0;
    double vp = kSpeedOfLight;
    double rload = 50.0;
    double cq = 70e-15;
    double kappa_hz = 5e6;
    double g_hz = 100e6;
};

SingleModeParams default_single_mode(const DefaultDesign& d = {});
MultiModeParams default_multi_mode(int n_modes = 3, const DefaultDesign& d = {});
TLineModelParams default_tline_model(double port_fraction, const DefaultDesign& d = {});
TLine default_line(const DefaultDesign& d = {});

}  // namespace purcellsim
