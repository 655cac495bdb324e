#include <gtest/gtest.h>

#include <cmath>

#include "purcellsim/analysis.hpp"
#include "purcellsim/errors.hpp"
#include "purcellsim/models.hpp"

using namespace purcellsim;

namespace {

complex jw(double w) { return complex(0.0, w); }

// Admittance seen by the qubit in the single-mode circuit, written out by hand.
complex single_mode_by_hand(const SingleModeParams& p, double w) {
    const complex y_tank = jw(w) * p.cr + 1.0 / (jw(w) * p.lr);
    const complex z_load = 1.0 / (jw(w) * p.ckappa) + p.rload;
    const complex z_node = 1.0 / (y_tank + 1.0 / z_load);
    return 1.0 / (1.0 / (jw(w) * p.cg) + z_node);
}

complex tline_by_hand(const TLineModelParams& p, double w) {
    const double beta = w / p.line.vp;
    const double z0 = p.line.z0;
    const complex z_stub = complex(0.0, -z0 / std::tan(beta * (p.line.length - p.port_position)));
    const complex z_load = 1.0 / (jw(w) * p.ckappa) + p.rload;
    const complex zl = 1.0 / (1.0 / z_stub + 1.0 / z_load);
    const complex t = complex(0.0, std::tan(beta * p.port_position));
    const complex z_line = z0 * (zl + z0 * t) / (z0 + zl * t);
    return 1.0 / (1.0 / (jw(w) * p.cg) + z_line);
}

}  // namespace

TEST(SingleMode, ResonatorFrequency) {
    SingleModeParams p{70e-15, 5e-15, 2e-9, 3e-13, 10e-15};
    EXPECT_NEAR(p.resonator_hz(), 1.0 / (2 * kPi * std::sqrt(2e-9 * 3e-13)), 1.0);
    EXPECT_FALSE(p.validity_warning().has_value());
    p.lr = 1e-6;
    EXPECT_TRUE(p.validity_warning().has_value());
}

TEST(SingleMode, TreeMatchesHandFormula) {
    const SingleModeParams p = default_single_mode();
    const NetworkTree net = build_single_mode(p);
    for (double f : {1e9, 4.5e9, 6.9e9, 7.3e9, 13e9}) {
        const double w = angular(f);
        const complex got = input_admittance(net, w).value();
        const complex want = single_mode_by_hand(p, w);
        EXPECT_LT(std::abs(got - want) / std::abs(want), 1e-12) << f;
    }
}

TEST(SingleMode, RejectsNonpositiveParameters) {
    SingleModeParams p = default_single_mode();
    p.cg = 0.0;
    EXPECT_THROW(build_single_mode(p), ValidationError);
    p = default_single_mode();
    p.rload = -50.0;
    EXPECT_THROW(validate(p), ValidationError);
}

TEST(MultiMode, OneModeEqualsSingleMode) {
    MultiModeParams m = default_multi_mode(1);
    const NetworkTree a = build_multi_mode(m);
    const NetworkTree b = build_single_mode(m.base);
    for (double f : {2e9, 6.99e9, 11e9}) {
        EXPECT_EQ(input_admittance(a, angular(f)).value(), input_admittance(b, angular(f)).value());
    }
}

TEST(MultiMode, HarmonicDefaultsAndValidation) {
    MultiModeParams m = default_multi_mode(3);
    const auto f = m.resolved_mode_frequencies();
    ASSERT_EQ(f.size(), 3u);
    EXPECT_NEAR(f[1] / f[0], 2.0, 1e-12);
    EXPECT_NEAR(f[2] / f[0], 3.0, 1e-12);
    m.mode_frequencies_hz = {7e9, 6e9, 21e9};
    EXPECT_THROW(validate(m), ValidationError);
    m.mode_frequencies_hz = {7e9, 14e9};
    EXPECT_THROW(validate(m), ValidationError);
    m.mode_frequencies_hz.clear();
    m.per_mode_loss = {std::nullopt, -1.0, std::nullopt};
    EXPECT_THROW(validate(m), ValidationError);
}

TEST(MultiMode, NullSitsAtZeroOfStackImpedance) {
    // Independent oracle: bisect the stack reactance sum between modes 1 and 2.
    const MultiModeParams m = default_multi_mode(3);
    const auto f = m.resolved_mode_frequencies();
    auto reactance = [&](double hz) {
        const double w = angular(hz);
        double x = 0.0;
        for (int n = 0; n < 3; ++n) {
            const double l = n == 0 ? m.base.lr : 1.0 / (angular(f[n]) * angular(f[n]) * m.base.cr);
            x += 1.0 / (1.0 / (w * l) - w * m.base.cr);
        }
        return x;
    };
    double lo = f[0] * 1.001, hi = f[1] * 0.999;
    ASSERT_LT(reactance(lo) * reactance(hi), 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (reactance(lo) * reactance(mid) <= 0.0 ? hi : lo) = mid;
    }
    const double f_null = 0.5 * (lo + hi);
    const NetworkTree net = build_multi_mode(m);
    const double re_at = input_admittance(net, angular(f_null)).value().real();
    const double re_off = input_admittance(net, angular(f_null * 1.01)).value().real();
    EXPECT_LT(re_at, 1e-6 * re_off);
}

TEST(ModeStack, PolesAtHarmonicsAndConvergence) {
    const TLine l = default_line();
    auto exact = [&](double f) { return complex(0.0, -l.z0 / std::tan(angular(f) / l.vp * l.length)); };
    double prev = INFINITY;
    for (int n : {5, 20, 80}) {
        const NetworkTree s = build_mode_stack(l, n);
        double worst = 0.0;
        for (double f : {1.3e9, 2.9e9, 5.1e9, 8.6e9, 12.2e9}) {
            const complex z = input_impedance(s, angular(f)).value();
            worst = std::max(worst, std::abs(z - exact(f)) / std::abs(exact(f)));
        }
        EXPECT_LT(worst, prev);
        prev = worst;
    }
    EXPECT_LT(prev, 0.02);
}

TEST(TLineModel, TreeMatchesHandFormula) {
    for (double frac : {0.0, 0.125, 0.5, 0.8, 1.0}) {
        const TLineModelParams p = default_tline_model(frac);
        const NetworkTree net = build_tline_model(p);
        for (double f : {1.7e9, 3.3e9, 5.9e9, 9.1e9}) {
            const complex got = input_admittance(net, angular(f)).value();
            const complex want = tline_by_hand(p, angular(f));
            EXPECT_LT(std::abs(got - want) / std::abs(want), 1e-9) << frac << " " << f;
        }
    }
}

TEST(TLineModel, PortOutsideLineIsRejected) {
    TLineModelParams p = default_tline_model(0.5);
    p.port_position = 1.01 * p.line.length;
    EXPECT_THROW(build_tline_model(p), ValidationError);
    EXPECT_THROW(default_tline_model(-0.1), ValidationError);
}

TEST(RingDown, MatchesParallelEquivalentEstimate) {
    const SingleModeParams p = default_single_mode();
    const ResonatorMode rd = ring_down(p);
    // Series Ck + R seen as a parallel R || C at the resonance (high-Q estimate).
    const double w = rd.omega;
    const double q = w * p.rload * p.ckappa;
    const double r_par = (1.0 + q * q) / (w * w * p.ckappa * p.ckappa * p.rload);
    const double c_par = p.ckappa / (1.0 + q * q);
    const double ct = p.cr + p.cg + c_par;
    EXPECT_NEAR(w, 1.0 / std::sqrt(p.lr * ct), 1e-4 * w);
    EXPECT_NEAR(rd.kappa, 1.0 / (r_par * ct), 0.01 * rd.kappa);
}

TEST(Coupling, WeakCouplingFormula) {
    const SingleModeParams p = default_single_mode();
    const double c1 = p.cq + p.cg, c2 = p.cr + p.cg + p.ckappa;
    const double wr = 1.0 / std::sqrt(p.lr * c2);
    const double g_est = 0.5 * p.cg / std::sqrt(c1 * c2) * wr;
    EXPECT_NEAR(coupling_strength(p), g_est, 0.05 * g_est);
}

TEST(DefaultDesign, HitsCalibrationTargets) {
    const DefaultDesign d;
    const SingleModeParams p = default_single_mode(d);
    EXPECT_NEAR(ring_down(p).kappa, angular(d.kappa_hz), 1e-6 * angular(d.kappa_hz));
    EXPECT_NEAR(coupling_strength(p), angular(d.g_hz), 1e-3 * angular(d.g_hz));
    EXPECT_NEAR(p.resonator_hz(), d.f1_hz, 1.0);
    EXPECT_NEAR(p.cr, 1.0 / (4.0 * d.z0 * d.f1_hz), 1e-27);
    EXPECT_GT(p.ckappa, 0.0);
    EXPECT_GT(p.cg, 0.0);
}

TEST(DefaultDesign, SplittingFromNetworkAgreesWithNormalModes) {
    const SingleModeParams p = default_single_mode();
    const double g_net = coupling_from_splitting(lossless_single_mode(p), p.cq, hertz(ring_down(p).omega));
    const double g_modes = coupling_strength(p);
    EXPECT_NEAR(g_net, g_modes, 0.01 * g_modes);
}
