#include "purcellsim/loss_budget.hpp"

#include <cmath>

#include "purcellsim/errors.hpp"

namespace purcellsim {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string(what) + " must be positive and finite");
    }
}

bool close(double a, double b, double rel_tol) {
    return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

const char* to_string(PortConfig c) { return c == PortConfig::wispe ? "wispe" : "antiWispe"; }

void validate(const PulseRecord& p) {
    require_positive(p.amplitude, "pulse amplitude");
    require_positive(p.duration, "pulse duration");
    if (!(p.line_attenuation >= 0.0) || !std::isfinite(p.line_attenuation)) {
        throw ValidationError("line attenuation must be >= 0 dB");
    }
}

void validate(const ConfigMeasurement& m) {
    require_positive(m.t1_measured, "measured T1");
    validate(m.qubit_port_pulse);
    validate(m.readout_port_pulse);
}

double effective_power(const PulseRecord& p) {
    validate(p);
    const double area = p.amplitude * p.duration;
    return area * area * std::pow(10.0, -p.line_attenuation / 10.0);
}

double coupling_q_from_power(double p_in, double omega_rabi) {
    require_positive(p_in, "input power");
    require_positive(omega_rabi, "Rabi frequency");
    return 4.0 * p_in / (kHbar * omega_rabi * omega_rabi);
}

double photon_number(double omega_rabi, double q_loaded, double omega_q) {
    if (!(omega_rabi >= 0.0) || !(q_loaded >= 0.0)) {
        throw ValidationError("Rabi frequency and loaded Q must be nonnegative");
    }
    require_positive(omega_q, "qubit frequency");
    const double r = omega_rabi * q_loaded / omega_q;
    return r * r;
}

double photon_number_from_power(double p_in, double q_loaded, double q_coupling, double omega_q) {
    require_positive(q_coupling, "coupling Q");
    require_positive(omega_q, "qubit frequency");
    return 4.0 / (kHbar * omega_q * omega_q) * (q_loaded * q_loaded / q_coupling) * p_in;
}

RabiCalib calibrate(double omega_rabi, double q_loaded, double omega_q, double p_in) {
    return {omega_rabi, q_loaded, omega_q, photon_number(omega_rabi, q_loaded, omega_q),
            coupling_q_from_power(p_in, omega_rabi), p_in};
}

bool RabiCalib::consistent(double rel_tol) const {
    return close(n_bar, photon_number(omega_rabi, q_loaded, omega_q), rel_tol) &&
           close(q_coupling, coupling_q_from_power(p_in, omega_rabi), rel_tol);
}

LossBudget extract_budget(const ConfigMeasurement& aw, const ConfigMeasurement& w) {
    if (aw.config != PortConfig::anti_wispe) {
        throw ValidationError("first measurement must be the antiWispe configuration");
    }
    if (w.config != PortConfig::wispe) {
        throw ValidationError("second measurement must be the wispe configuration");
    }
    validate(aw);
    validate(w);

    const double total_aw = 1.0 / aw.t1_measured;
    const double ratio_aw =
        effective_power(aw.readout_port_pulse) / effective_power(aw.qubit_port_pulse);
    const double gamma_d = total_aw * ratio_aw / (1.0 + ratio_aw);
    const double gamma_r_aw = total_aw / (1.0 + ratio_aw);

    const double total_w = 1.0 / w.t1_measured;
    const double gamma_r_w =
        gamma_d * effective_power(w.qubit_port_pulse) / effective_power(w.readout_port_pulse);
    double gamma_int = total_w - gamma_d - gamma_r_w;

    if (!(gamma_d >= 0.0) || !(gamma_r_aw >= 0.0) || !(gamma_r_w >= 0.0)) {
        throw InconsistentMeasurementError("negative port decay rate from pulse records");
    }
    if (gamma_int < -kBudgetTolerance * total_w) {
        throw InconsistentMeasurementError(
            "internal loss rate " + std::to_string(gamma_int) +
            " 1/s is negative: the assumption that internal loss is negligible against the "
            "antiWispe decay rate (and that both ports drive the same transition) does not "
            "hold for these measurements");
    }
    gamma_int = std::max(gamma_int, 0.0);
    return {gamma_int, gamma_d, gamma_r_w, gamma_r_aw, 1.0 / gamma_r_w};
}

}  // namespace purcellsim
