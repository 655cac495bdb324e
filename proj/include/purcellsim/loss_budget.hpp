#pragma once

// Loss-budget extraction from pi-pulse drive records taken with the readout
// port in two placements: one that maximizes the qubit's emission into the
// readout line (antiWispe) and one at the qubit's standing-wave null (wispe).
//
// The power needed for a pi pulse from a port scales inversely with the
// qubit's decay rate into that port, so Gamma_d / Gamma_r = P_r / P_d.
// In the antiWispe placement internal loss is neglected, which fixes Gamma_d;
// the wispe placement then yields Gamma_r and, by subtraction, Gamma_int.

#include <string>

namespace purcellsim {

inline constexpr double kHbar = 1.054571817e-34;  // J s

struct PulseRecord {
    double amplitude;        // V, envelope peak
    double duration;         // s, Gaussian envelope length
    double line_attenuation; // dB, total in the drive chain
    std::string port_id;
};

enum class PortConfig { wispe, anti_wispe };
const char* to_string(PortConfig c);

struct ConfigMeasurement {
    PortConfig config;
    double t1_measured;      // s
    PulseRecord qubit_port_pulse;
    PulseRecord readout_port_pulse;
};

struct LossBudget {
    double gamma_int;        // 1/s
    double gamma_d;
    double gamma_r_wispe;
    double gamma_r_anti_wispe;
    double purcell_limit_wispe;  // s, 1 / gamma_r_wispe
};

struct RabiCalib {
    double omega_rabi;  // rad/s
    double q_loaded;
    double omega_q;     // rad/s
    double n_bar;
    double q_coupling;
    double p_in;        // W

    // n = (Omega Q_l / w_q)^2 and Q_c = 4 P_in / (hbar Omega^2) within rel_tol.
    bool consistent(double rel_tol = 1e-12) const;
};

void validate(const PulseRecord& p);
void validate(const ConfigMeasurement& m);

// (amplitude * duration)^2 * 10^(-attenuation / 10), relative units.
double effective_power(const PulseRecord& p);

// Q_c = 4 P_in / (hbar Omega^2).
double coupling_q_from_power(double p_in, double omega_rabi);

// n = (Omega Q_l / w_q)^2.
double photon_number(double omega_rabi, double q_loaded, double omega_q);

// n = (4 / (hbar w_q^2)) (Q_l^2 / Q_c) P_in, the input-output form.
double photon_number_from_power(double p_in, double q_loaded, double q_coupling, double omega_q);

// Fills n_bar, q_coupling from omega_rabi, q_loaded, omega_q, p_in.
RabiCalib calibrate(double omega_rabi, double q_loaded, double omega_q, double p_in);

// Relative slack allowed on Gamma_int before the measurement is rejected.
inline constexpr double kBudgetTolerance = 0.05;

// Throws InconsistentMeasurementError when Gamma_int < -5% of 1/t1(wispe) or
// any intermediate rate is negative.
LossBudget extract_budget(const ConfigMeasurement& anti_wispe, const ConfigMeasurement& wispe);

}  // namespace purcellsim
