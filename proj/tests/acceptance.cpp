// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// quantity, its tolerance and the wall time. Exit status is nonzero if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "purcellsim/analysis.hpp"
#include "purcellsim/field_overlap.hpp"
#include "purcellsim/fixtures.hpp"
#include "purcellsim/loss_budget.hpp"
#include "purcellsim/models.hpp"
#include "purcellsim/network.hpp"

using namespace purcellsim;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
    char b[128];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

double t1_at(const NetworkTree& net, double cq, double f_hz) {
    return lifetime_from_admittance(input_admittance(net, angular(f_hz)), cq).value_or_infinity();
}

// Closed-form open-ended line seen from its input: -j Z0 cot(beta l).
complex open_line_impedance(const TLine& l, double f) {
    const double bl = angular(f) / l.vp * l.length;
    return complex(0.0, -l.z0 / std::tan(bl));
}

Outcome c1_single_mode_oracle() {
    const SingleModeParams p = default_single_mode();
    const NetworkTree net = build_single_mode(p);
    const ResonatorMode rd = ring_down(p);
    const double g = coupling_strength(p);
    double worst = 0.0, worst_delta = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double delta_hz = -3e9 + 2e9 * i / 20.0;
        const double fq = hertz(rd.omega) + delta_hz;
        const double network = t1_at(net, p.cq, fq);
        const double analytic =
            analytic_purcell({g, angular(delta_hz), rd.kappa}).value_or_infinity();
        const double err = std::abs(network / analytic - 1.0);
        if (err > worst) {
            worst = err;
            worst_delta = delta_hz;
        }
    }
    return {worst <= 0.10, "max |T1net/T1analytic - 1| = " + fmt("%.3g", worst) + " at Delta/2pi = " +
                               fmt("%.2f", worst_delta / 1e9) + " GHz (tol 0.10)"};
}

Outcome c2_dispersive_slope() {
    DefaultDesign d;
    d.g_hz = 1e6;
    const SingleModeParams p = default_single_mode(d);
    const NetworkTree net = build_single_mode(p);
    const double g = coupling_strength(p);
    const double fr = loaded_resonance_hz(net, 0.9 * p.resonator_hz(), 1.1 * p.resonator_hz());
    std::vector<double> x, y;
    double max_ratio = 0.0;
    for (int i = 0; i <= 10; ++i) {
        const double delta_hz = 25e6 * std::pow(2.0, i / 10.0);
        max_ratio = std::max(max_ratio, g / angular(delta_hz));
        x.push_back(std::log(delta_hz));
        y.push_back(std::log(t1_at(net, p.cq, fr - delta_hz)));
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {std::abs(slope - 2.0) <= 0.05 && max_ratio < 0.05,
            "slope = " + fmt("%.4f", slope) + " over |Delta|/2pi in [25, 50] MHz, g/|Delta| <= " +
                fmt("%.3f", max_ratio) + " (tol 2.00 +/- 0.05)"};
}

Outcome c3_multimode_null() {
    const MultiModeParams p = default_multi_mode(3);
    const auto s = frequency_sweep(build_multi_mode(p), p.base.cq,
                                   SweepSpec::default_density(1e9, 14e9), "multiMode");
    const auto spots = find_sweet_spots(s, p.resolved_mode_frequencies().front());
    std::vector<double> inter;
    for (const auto& sp : spots) {
        if (sp.kind == SweetSpot::Kind::inter_mode && sp.frequency_hz > 7e9 && sp.frequency_hz < 14e9) {
            inter.push_back(sp.frequency_hz);
        }
    }
    const bool one = inter.size() == 1;
    const bool band = one && std::abs(inter[0] - 9e9) <= 1.5e9;
    std::string d = std::to_string(inter.size()) + " interMode spot(s) in (7, 14) GHz";
    if (one) d += " at " + fmt("%.3f", inter[0] / 1e9) + " GHz (band 9 +/- 1.5 GHz: " +
                  (band ? "inside" : "outside") + ")";
    return {one && band, d};
}

Outcome c4_wispe() {
    const SingleModeParams sm = default_single_mode();
    const NetworkTree single = build_single_mode(sm);

    // Near-side port: detected spot versus single mode at the same frequency.
    const TLineModelParams near = default_tline_model(0.125);
    const auto s = frequency_sweep(build_tline_model(near), near.cq,
                                   SweepSpec::default_density(1e9, 14e9), "tline");
    const auto spots = find_sweet_spots(s, near.line.fundamental_hz());
    double spot_gain = 0.0, spot_f = 0.0;
    for (const auto& sp : spots) {
        if (sp.kind != SweetSpot::Kind::below_fundamental) continue;
        const double gain = sp.t1_peak.value_or_infinity() / t1_at(single, sm.cq, sp.frequency_hz);
        if (gain > spot_gain) {
            spot_gain = gain;
            spot_f = sp.frequency_hz;
        }
    }

    // Port exactly at the standing-wave null of a 4 GHz qubit.
    const double fq = 4e9;
    const TLine l = default_line();
    const double x_null = l.length - l.vp / (4.0 * fq);
    TLineModelParams at_null = default_tline_model(x_null / l.length);
    at_null.port_position = x_null;
    const double null_gain = t1_at(build_tline_model(at_null), at_null.cq, fq) / t1_at(single, sm.cq, fq);

    // 41 positions x 4001 frequencies, timed.
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> positions;
    for (int i = 0; i <= 40; ++i) positions.push_back(l.length * i / 40.0);
    const auto family = port_position_sweep(default_tline_model(0.0), positions,
                                            SweepSpec{1e9, 14e9, 4001, SweepSpec::Spacing::log});
    const double family_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const bool pass = spot_gain >= 100.0 && null_gain >= 1e3 && family.size() == 41 && family_s < 30.0;
    return {pass, "near-port spot at " + fmt("%.3f", spot_f / 1e9) + " GHz gains " +
                      fmt("%.3g", spot_gain) + "x (>= 100), null-placed port gains " +
                      fmt("%.3g", null_gain) + "x (>= 1e3), 41x4001 sweep " + fmt("%.2f", family_s) +
                      " s (< 30)"};
}

Outcome c5_anti_wispe() {
    const SingleModeParams sm = default_single_mode();
    const NetworkTree single = build_single_mode(sm);
    const TLineModelParams far = default_tline_model(1.0);
    const NetworkTree tl = build_tline_model(far);
    const double f1 = far.line.fundamental_hz();
    double worst = 0.0;
    for (int i = 0; i <= 60; ++i) {
        const double f = f1 * (0.3 + 0.6 * i / 60.0);
        worst = std::max(worst, t1_at(tl, far.cq, f) / t1_at(single, sm.cq, f));
    }
    return {worst < 1.0, "max T1(far port) / T1(single mode) over [0.3, 0.9] f1 = " +
                             fmt("%.3g", worst) + " (< 1)"};
}

Outcome c6_monotone_positions() {
    const TLineModelParams base = default_tline_model(0.0);
    std::vector<double> positions;
    for (int i = 1; i <= 10; ++i) positions.push_back(base.line.length * 0.5 * i / 11.0);
    const auto family = port_position_sweep(base, positions, SweepSpec::default_density(1e9, 14e9));
    std::vector<double> freqs;
    for (const auto& s : family) {
        const auto spots = find_sweet_spots(s, base.line.fundamental_hz());
        const SweetSpot* best = nullptr;
        for (const auto& sp : spots) {
            if (sp.kind == SweetSpot::Kind::below_fundamental &&
                (!best || sp.t1_peak.value_or_infinity() > best->t1_peak.value_or_infinity())) {
                best = &sp;
            }
        }
        freqs.push_back(best ? best->frequency_hz : std::nan(""));
    }
    bool increasing = true;
    for (std::size_t i = 1; i < freqs.size(); ++i) increasing &= freqs[i] > freqs[i - 1];
    std::string list;
    for (double f : freqs) list += fmt("%.3f ", f / 1e9);
    return {increasing, "spot GHz by position: " + list + (increasing ? "(strictly increasing)" : "(not monotone)")};
}

Outcome c7_loss_budget() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double gd = log_uniform(1e1, 1e5);
        const double graw = log_uniform(1e3, 1e7);
        const double grw = log_uniform(1e0, 1e5);
        const double gint = u(rng) * 1e-2 * (gd + graw);
        // Forward model: pi-pulse power into a port scales as 1 / (its decay rate).
        const double att_q = log_uniform(1.0, 80.0), att_r = log_uniform(1.0, 80.0);
        const double dur = log_uniform(10e-9, 200e-9);
        auto pulse = [&](double rate, double att) {
            const double power = 1.0 / rate;
            return PulseRecord{std::sqrt(power * std::pow(10.0, att / 10.0)) / dur, dur, att, ""};
        };
        const ConfigMeasurement aw{PortConfig::anti_wispe, 1.0 / (gd + graw), pulse(gd, att_q),
                                   pulse(graw, att_r)};
        const ConfigMeasurement w{PortConfig::wispe, 1.0 / (gint + gd + grw), pulse(gd, att_q),
                                  pulse(grw, att_r)};
        const LossBudget b = extract_budget(aw, w);
        for (auto [got, want] : {std::pair{b.gamma_d, gd}, {b.gamma_r_anti_wispe, graw},
                                 {b.gamma_r_wispe, grw}}) {
            worst = std::max(worst, std::abs(got / want - 1.0));
        }
        // Internal loss is a difference of totals; judge it against the wispe total.
        worst = std::max(worst, std::abs(b.gamma_int - gint) * w.t1_measured);
    }

    // Qubit-A: same drive and readout lines in both placements, readout chain
    // 13 dB more attenuated; wispe qubit/readout pulse-area ratio 63.6 and an
    // antiWispe ratio of 2500.
    const double dur = 40e-9;
    const PulseRecord q{1.0, dur, 60.0, "drive"};
    const ConfigMeasurement aw{PortConfig::anti_wispe, 1e-6, q, {1.0 / 2500.0, dur, 73.0, "readout"}};
    const ConfigMeasurement w{PortConfig::wispe, 80e-6, q, {1.0 / 63.6, dur, 73.0, "readout"}};
    const double limit = extract_budget(aw, w).purcell_limit_wispe;

    return {worst <= 1e-9 && limit >= 0.5e-3 && limit <= 5e-3,
            "10^4 round trips, worst relative error " + fmt("%.2g", worst) +
                " (<= 1e-9); Qubit-A purcellLimitWispe = " + fmt("%.3f", limit * 1e3) +
                " ms (in [0.5, 5] ms)"};
}

Outcome c8_foster() {
    const TLine l = default_line();
    std::vector<double> errs;
    for (int n : {3, 10, 30}) {
        const NetworkTree stack = build_mode_stack(l, n);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double f = (k + 0.5) * 10e6;
            const complex exact = open_line_impedance(l, f);
            const complex got = input_impedance(stack, angular(f)).value();
            worst = std::max(worst, std::abs(got - exact) / std::abs(exact));
        }
        errs.push_back(worst);
    }
    const bool pass = errs[1] < errs[0] && errs[2] < errs[1];
    return {pass, "max relative error N=3: " + fmt("%.3g", errs[0]) + ", N=10: " +
                      fmt("%.3g", errs[1]) + ", N=30: " + fmt("%.3g", errs[2]) +
                      " (strictly decreasing)"};
}

// Peak T1 near the multi-mode null and its frequency.
std::pair<double, double> null_peak(const MultiModeParams& p, const SweepSpec& spec) {
    const auto s = frequency_sweep(build_multi_mode(p), p.base.cq, spec);
    std::size_t best = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.t1[i].value_or_infinity() > s.t1[best].value_or_infinity()) best = i;
    }
    return {s.freq_hz[best], s.t1[best].value_or_infinity()};
}

Outcome c9_eccosorb() {
    // Part a: mode 2 of the multi-mode model gets a parallel resistor that
    // lowers its loaded Q tenfold.
    MultiModeParams p = default_multi_mode(3);
    const auto modes = p.resolved_mode_frequencies();
    const NetworkTree lossless = build_multi_mode(p);
    const double fw0 = lorentzian_fwhm_hz(lossless, 0.97 * modes[1], 1.03 * modes[1]);
    const double q2 = modes[1] / fw0;
    const double r2 = q2 / (9.0 * angular(modes[1]) * p.base.cr);
    MultiModeParams lossy = p;
    lossy.per_mode_loss = {std::nullopt, r2, std::nullopt};
    const double fw1 = lorentzian_fwhm_hz(build_multi_mode(lossy), 0.9 * modes[1], 1.1 * modes[1]);

    const SweepSpec window{8e9, 13e9, 2001, SweepSpec::Spacing::linear};
    const double bin = (window.f_stop - window.f_start) / (window.n_points - 1);
    const auto [f_before, t_before] = null_peak(p, window);
    const auto [f_after, t_after] = null_peak(lossy, window);
    const bool moved = std::abs(f_after - f_before) > bin;
    const bool suppressed = t_before >= 2.0 * t_after;
    const bool part_a = moved || suppressed;

    // Part b: the same tenfold internal-Q loss on the open stub beyond a
    // wispe-placed tap (position 0.125, spot near 4 GHz).
    const TLineModelParams t = default_tline_model(0.125);
    const NetworkTree t_lossless = build_tline_model(t);
    const double f2 = 2.0 * t.line.fundamental_hz();
    const double q2t = f2 / lorentzian_fwhm_hz(t_lossless, 0.97 * f2, 1.03 * f2);
    const double alpha = (angular(f2) / t.line.vp) / (2.0 * q2t / 9.0);
    TLine head = t.line, stub = t.line;
    head.length = t.port_position;
    stub.length = t.line.length - t.port_position;
    stub.alpha = alpha;
    const NetworkTree t_lossy =
        series(Capacitor{t.cg},
               line(head, shunt(series(Capacitor{t.ckappa}, resistor_end(t.rload)), line(stub, open_end()))));
    // Spot of the lossless model, then T1 of both models at that frequency.
    const auto s0 = frequency_sweep(t_lossless, t.cq, SweepSpec::default_density(1e9, 14e9));
    double f_spot = 0.0, tb0 = 0.0;
    for (const auto& sp : find_sweet_spots(s0, t.line.fundamental_hz())) {
        if (sp.kind == SweetSpot::Kind::below_fundamental && sp.t1_peak.value_or_infinity() > tb0) {
            tb0 = sp.t1_peak.value_or_infinity();
            f_spot = sp.frequency_hz;
        }
    }
    const double tb1 = t1_at(t_lossy, t.cq, f_spot);
    const double change = std::abs(tb1 / tb0 - 1.0);
    const bool part_b = change < 0.05;

    return {part_a && part_b,
            "(a) mode-2 linewidth x" + fmt("%.2f", fw1 / fw0) + ", null " +
                fmt("%.4f", f_before / 1e9) + " -> " + fmt("%.4f", f_after / 1e9) + " GHz, peak T1 " +
                fmt("%.3g", t_before) + " -> " + fmt("%.3g", t_after) + " s: " +
                (part_a ? "shifted/suppressed" : "unchanged") + "; (b) stub alpha " +
                fmt("%.3g", alpha) + " Np/m changes T1 at the " + fmt("%.3f", f_spot / 1e9) +
                " GHz wispe spot " + fmt("%.3g", tb0) + " -> " +
                fmt("%.3g", tb1) + " s, relative change " + fmt("%.3g", change) + " (< 0.05)"};
}

FieldGrid uniform_grid(const Vec3c& eq, const Vec3c& ec) {
    FieldGrid g;
    g.dims = {4, 3, 2};
    g.spacing = {1e-3, 1e-3, 1e-3};
    const std::size_t n = g.voxel_count();
    g.e_qubit.assign(n, eq);
    g.e_cavity.assign(n, ec);
    g.mask.assign(n, 1);
    return g;
}

Outcome c10_field_overlap() {
    const Vec3c ec{complex(1.3, -0.4), complex(0.2, 0.7), complex(-0.5, 0.1)};
    bool identities = true;
    for (const auto& [eq, want] : {std::pair{Vec3c{}, 0.0}, std::pair{ec, 1.0}}) {
        const auto m = overlap_metric(uniform_grid(eq, ec));
        for (double v : m.metric) identities &= v == want;
    }
    {
        const auto m = overlap_metric(uniform_grid({complex(2.0, 1.0), 0.0, 0.0}, {0.0, complex(1.0, -3.0), 0.0}));
        for (double v : m.metric) identities &= v == 0.0;
    }

    const auto spec = default_planted_shadow(64, 11);
    const FieldGrid g = planted_shadow_grid(spec);
    const auto m = rank_port_regions(overlap_metric(g), g, 0.0);
    double err = INFINITY;
    if (!m.candidate_regions.empty()) {
        const auto c = spec.blocks.front().centroid_index();
        const auto& r = m.candidate_regions.front().centroid;
        double s = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double d = (r[a] - g.origin[a]) / g.spacing[a] - c[a];
            s += d * d;
        }
        err = std::sqrt(s);
    }
    return {identities && err <= 1.0,
            std::string("metric identities ") + (identities ? "exact" : "violated") +
                "; rank-1 centroid error " + fmt("%.3g", err) + " voxel (<= 1) on 64^3"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "single-mode oracle agreement", 5, c1_single_mode_oracle},
        {2, "dispersive scaling", 5, c2_dispersive_slope},
        {3, "multi-mode null", 10, c3_multimode_null},
        {4, "WISPE existence and magnitude", 30, c4_wispe},
        {5, "anti-WISPE", 10, c5_anti_wispe},
        {6, "sweet-spot/position monotonicity", 30, c6_monotone_positions},
        {7, "loss-budget round trip", 5, c7_loss_budget},
        {8, "Foster convergence", 10, c8_foster},
        {9, "Eccosorb analog", 10, c9_eccosorb},
        {10, "field-overlap fixtures", 10, c10_field_overlap},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && secs < c.budget_s;
        failed += !pass;
        std::printf("[%s] criterion %2d %s: %s; %.2f s (budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id,
                    c.title, o.detail.c_str(), secs, c.budget_s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
