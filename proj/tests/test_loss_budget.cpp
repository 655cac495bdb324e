#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "purcellsim/errors.hpp"
#include "purcellsim/loss_budget.hpp"
#include "purcellsim/network.hpp"

using namespace purcellsim;

namespace {

struct Truth {
    double gamma_d, gamma_r_aw, gamma_r_w, gamma_int;
};

// A pi pulse from a port needs power inversely proportional to the decay
// rate into that port; solve the envelope amplitude that delivers it.
PulseRecord pulse_for_rate(double rate, double duration, double att_db, const char* id) {
    const double power = 1.0 / rate;
    return {std::sqrt(power * std::pow(10.0, att_db / 10.0)) / duration, duration, att_db, id};
}

ConfigMeasurement synth(PortConfig c, const Truth& t, double dur_q, double dur_r) {
    const bool aw = c == PortConfig::anti_wispe;
    const double gamma_r = aw ? t.gamma_r_aw : t.gamma_r_w;
    const double total = t.gamma_d + gamma_r + (aw ? 0.0 : t.gamma_int);
    return {c, 1.0 / total, pulse_for_rate(t.gamma_d, dur_q, 60.0, "q"),
            pulse_for_rate(gamma_r, dur_r, 73.0, "r")};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(EffectivePower, AreaSquaredTimesAttenuation) {
    const PulseRecord p{0.3, 40e-9, 20.0, "x"};
    EXPECT_NEAR(effective_power(p), std::pow(0.3 * 40e-9, 2) / 100.0, 1e-30);
    EXPECT_EQ(effective_power({0.3, 40e-9, 0.0, ""}), std::pow(0.3 * 40e-9, 2));
}

TEST(ExtractBudget, RoundTripsRandomTruths) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> logu(2.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Truth t{std::pow(10.0, logu(rng)), std::pow(10.0, logu(rng) + 1.0),
                      std::pow(10.0, logu(rng) - 1.0), std::pow(10.0, logu(rng))};
        const LossBudget b = extract_budget(synth(PortConfig::anti_wispe, t, 40e-9, 40e-9),
                                            synth(PortConfig::wispe, t, 32e-9, 48e-9));
        EXPECT_LT(rel(b.gamma_d, t.gamma_d), 1e-9);
        EXPECT_LT(rel(b.gamma_r_anti_wispe, t.gamma_r_aw), 1e-9);
        EXPECT_LT(rel(b.gamma_r_wispe, t.gamma_r_w), 1e-9);
        EXPECT_LT(rel(b.gamma_int, t.gamma_int), 1e-9);
        EXPECT_DOUBLE_EQ(b.purcell_limit_wispe, 1.0 / b.gamma_r_wispe);
    }
}

TEST(ExtractBudget, EqualPowersSplitAntiWispeRateInHalf) {
    const PulseRecord same{0.5, 40e-9, 60.0, "p"};
    const ConfigMeasurement aw{PortConfig::anti_wispe, 10e-6, same, same};
    // Ten times the readout amplitude: a hundredth of the rate.
    const ConfigMeasurement w{PortConfig::wispe, 1.0 / 6e4, same, {5.0, 40e-9, 60.0, "p"}};
    const LossBudget b = extract_budget(aw, w);
    EXPECT_NEAR(b.gamma_d, 0.5e5, 1e-6);
    EXPECT_NEAR(b.gamma_r_anti_wispe, 0.5e5, 1e-6);
    EXPECT_NEAR(b.gamma_r_wispe, 0.5e3, 1e-8);
    EXPECT_NEAR(b.gamma_int, 6e4 - 0.5e5 - 0.5e3, 1e-6);
}

TEST(ExtractBudget, RejectsInconsistentRecords) {
    const Truth t{1e3, 1e5, 1e2, 0.0};
    ConfigMeasurement aw = synth(PortConfig::anti_wispe, t, 40e-9, 40e-9);
    ConfigMeasurement w = synth(PortConfig::wispe, t, 40e-9, 40e-9);
    EXPECT_NO_THROW(extract_budget(aw, w));
    w.t1_measured *= 1.02;  // Gamma_int about -2% of 1/t1: inside the slack
    EXPECT_NO_THROW(extract_budget(aw, w));
    w.t1_measured *= 1.2;
    EXPECT_THROW(extract_budget(aw, w), InconsistentMeasurementError);
}

TEST(ExtractBudget, ValidatesInputs) {
    const Truth t{1e3, 1e5, 1e2, 1e3};
    const ConfigMeasurement aw = synth(PortConfig::anti_wispe, t, 40e-9, 40e-9);
    const ConfigMeasurement w = synth(PortConfig::wispe, t, 40e-9, 40e-9);
    EXPECT_THROW(extract_budget(w, aw), ValidationError);
    EXPECT_THROW(extract_budget(aw, aw), ValidationError);
    ConfigMeasurement bad = w;
    bad.t1_measured = 0.0;
    EXPECT_THROW(extract_budget(aw, bad), ValidationError);
    bad = w;
    bad.readout_port_pulse.duration = -1e-9;
    EXPECT_THROW(extract_budget(aw, bad), ValidationError);
    bad = w;
    bad.qubit_port_pulse.amplitude = 0.0;
    EXPECT_THROW(extract_budget(aw, bad), ValidationError);
    EXPECT_THROW(validate(PulseRecord{1.0, 1e-9, std::nan(""), ""}), ValidationError);
    EXPECT_STREQ(to_string(PortConfig::anti_wispe), "antiWispe");
    EXPECT_STREQ(to_string(PortConfig::wispe), "wispe");
}

TEST(RabiCalibration, PhotonNumberFormsAgree) {
    const double omega = 2 * kPi * 8e6, ql = 3.2e4, wq = 2 * kPi * 5.1e9, pin = 2.5e-17;
    const RabiCalib c = calibrate(omega, ql, wq, pin);
    EXPECT_TRUE(c.consistent());
    EXPECT_NEAR(c.n_bar, std::pow(omega * ql / wq, 2), 1e-12 * c.n_bar);
    EXPECT_NEAR(c.q_coupling, 4.0 * pin / (kHbar * omega * omega), 1e-12 * c.q_coupling);
    EXPECT_LT(rel(photon_number_from_power(pin, ql, c.q_coupling, wq), c.n_bar), 1e-12);
    RabiCalib broken = c;
    broken.n_bar *= 1.01;
    EXPECT_FALSE(broken.consistent());
}
