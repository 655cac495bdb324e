#include "purcellsim/models.hpp"

#include <cmath>
#include <functional>

#include "purcellsim/errors.hpp"

namespace purcellsim {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string(what) + " must be positive and finite");
    }
}

NetworkTree load_branch(double ckappa, double rload) {
    return series(Capacitor{ckappa}, resistor_end(rload));
}

// Root of an increasing function on [lo, hi], bisected in log space.
double solve_increasing(const std::function<double(double)>& f, double target, double lo,
                        double hi) {
    if (f(lo) > target || f(hi) < target) {
        throw ValidationError("calibration target outside the solvable bracket");
    }
    for (int i = 0; i < 200 && hi / lo > 1.0 + 1e-14; ++i) {
        const double mid = std::sqrt(lo * hi);
        (f(mid) < target ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

// Normal-mode frequencies (rad/s) of two capacitively coupled LC nodes.
std::pair<double, double> normal_modes(double c11, double c22, double c12, double l1, double l2) {
    const double a = c11 * c22 - c12 * c12;
    const double b = c11 / l2 + c22 / l1;
    const double c = 1.0 / (l1 * l2);
    const double disc = std::sqrt(std::max(0.0, b * b - 4.0 * a * c));
    // Stable quadratic roots for lambda = omega^2.
    const double q = 0.5 * (b + disc);
    const double hi = q / a;
    const double lo = c / q;
    return {std::sqrt(lo), std::sqrt(hi)};
}

}  // namespace

double SingleModeParams::resonator_hz() const { return hertz(1.0 / std::sqrt(lr * cr)); }

std::optional<std::string> SingleModeParams::validity_warning() const {
    const double f = resonator_hz();
    if (f < 1e9 || f > 30e9) {
        return "resonator frequency " + std::to_string(f / 1e9) + " GHz is outside [1, 30] GHz";
    }
    return std::nullopt;
}

std::vector<double> MultiModeParams::resolved_mode_frequencies() const {
    if (!mode_frequencies_hz.empty()) return mode_frequencies_hz;
    std::vector<double> out;
    const double f1 = base.resonator_hz();
    for (int n = 1; n <= n_modes; ++n) out.push_back(n * f1);
    return out;
}

void validate(const SingleModeParams& p) {
    require_positive(p.cq, "Cq");
    require_positive(p.cg, "Cg");
    require_positive(p.lr, "Lr");
    require_positive(p.cr, "Cr");
    require_positive(p.ckappa, "Ckappa");
    require_positive(p.rload, "Rload");
}

void validate(const MultiModeParams& p) {
    validate(p.base);
    if (p.n_modes < 1) throw ValidationError("nModes must be at least 1");
    if (!p.mode_frequencies_hz.empty() &&
        static_cast<int>(p.mode_frequencies_hz.size()) != p.n_modes) {
        throw ValidationError("modeFrequencies length does not match nModes");
    }
    if (!p.per_mode_loss.empty() && static_cast<int>(p.per_mode_loss.size()) != p.n_modes) {
        throw ValidationError("perModeLoss length does not match nModes");
    }
    const auto freqs = p.resolved_mode_frequencies();
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        require_positive(freqs[i], "mode frequency");
        if (i > 0 && !(freqs[i] > freqs[i - 1])) {
            throw ValidationError("mode frequencies must be strictly increasing");
        }
    }
    for (const auto& r : p.per_mode_loss) {
        if (r) require_positive(*r, "per-mode loss resistance");
    }
}

void validate(const TLineModelParams& p) {
    require_positive(p.cq, "Cq");
    require_positive(p.cg, "Cg");
    require_positive(p.ckappa, "Ckappa");
    require_positive(p.rload, "Rload");
    validate(Element{p.line});
    require_positive(p.line.length, "line length");
    if (!(p.port_position >= 0.0 && p.port_position <= p.line.length)) {
        throw ValidationError("port position must lie within [0, length]");
    }
}

NetworkTree build_single_mode(const SingleModeParams& p) {
    validate(p);
    auto resonator = series(ParallelRlc{std::nullopt, p.lr, p.cr}, short_end());
    return series(Capacitor{p.cg}, shunt(resonator, load_branch(p.ckappa, p.rload)));
}

NetworkTree build_multi_mode(const MultiModeParams& p) {
    validate(p);
    const auto freqs = p.resolved_mode_frequencies();
    NetworkTree stack = short_end();
    for (int n = p.n_modes - 1; n >= 0; --n) {
        const double w = angular(freqs[n]);
        // Mode 1 reuses Lr verbatim so a one-mode stack matches the single-mode tree exactly.
        const double l = (n == 0 && p.mode_frequencies_hz.empty()) ? p.base.lr
                                                                    : 1.0 / (w * w * p.base.cr);
        const std::optional<double> r =
            p.per_mode_loss.empty() ? std::nullopt : p.per_mode_loss[n];
        stack = series(ParallelRlc{r, l, p.base.cr}, stack);
    }
    return series(Capacitor{p.base.cg}, shunt(stack, load_branch(p.base.ckappa, p.base.rload)));
}

NetworkTree build_tline_model(const TLineModelParams& p) {
    validate(p);
    TLine near = p.line;
    near.length = p.port_position;
    TLine far = p.line;
    far.length = p.line.length - p.port_position;
    auto tap = shunt(load_branch(p.ckappa, p.rload), line(far, open_end()));
    return series(Capacitor{p.cg}, line(near, tap));
}

NetworkTree build_mode_stack(const TLine& l, int n_modes) {
    validate(Element{l});
    require_positive(l.length, "line length");
    if (n_modes < 0) throw ValidationError("mode count must be nonnegative");
    const double c_line = l.length / (l.z0 * l.vp);
    const double c_n = 0.5 * c_line;
    const double w1 = angular(l.fundamental_hz());
    NetworkTree stack = short_end();
    for (int n = n_modes; n >= 1; --n) {
        const double w = n * w1;
        stack = series(ParallelRlc{std::nullopt, 1.0 / (w * w * c_n), c_n}, stack);
    }
    return series(Capacitor{c_line}, stack);
}

ResonatorMode ring_down(const SingleModeParams& p) {
    validate(p);
    // Node equation s*Ct + 1/(s*Lr) + s*Ck/(1 + s*Ck*R) = 0 cleared to a cubic in s.
    const double ct = p.cr + p.cg;
    const double a3 = p.lr * ct * p.ckappa * p.rload;
    const double a2 = p.lr * (ct + p.ckappa);
    const double a1 = p.ckappa * p.rload;
    const double a0 = 1.0;
    complex s{0.0, 1.0 / std::sqrt(p.lr * (ct + p.ckappa))};
    for (int i = 0; i < 200; ++i) {
        const complex f = ((a3 * s + a2) * s + a1) * s + a0;
        const complex df = (3.0 * a3 * s + 2.0 * a2) * s + a1;
        const complex step = f / df;
        s -= step;
        if (std::abs(step) < 1e-15 * std::abs(s)) break;
    }
    return {std::abs(s.imag()), -2.0 * s.real()};
}

double coupling_strength(const SingleModeParams& p) {
    validate(p);
    const double c11 = p.cq + p.cg;
    const double c22 = p.cr + p.cg + p.ckappa;
    const double wr = 1.0 / std::sqrt(p.lr * c22);
    auto splitting = [&](double wq) {
        const double lq = 1.0 / (wq * wq * c11);
        const auto [lo, hi] = normal_modes(c11, c22, p.cg, lq, p.lr);
        return hi - lo;
    };
    // Golden-section search for the minimum splitting over the bare qubit frequency.
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.5 * wr, b = 1.5 * wr;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = splitting(x1), f2 = splitting(x2);
    for (int i = 0; i < 200 && (b - a) > 1e-13 * wr; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = splitting(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = splitting(x2);
        }
    }
    return 0.5 * splitting(0.5 * (a + b));
}

TLine default_line(const DefaultDesign& d) { return TLine{d.z0, d.vp / (2.0 * d.f1_hz), d.vp, 0.0}; }

SingleModeParams default_single_mode(const DefaultDesign& d) {
    const double cr = 1.0 / (4.0 * d.z0 * d.f1_hz);
    const double wr = angular(d.f1_hz);
    SingleModeParams p{d.cq, 1e-15, 1.0 / (wr * wr * cr), cr, 1e-15, d.rload};
    // Alternate the two calibrations; each depends only weakly on the other.
    for (int pass = 0; pass < 4; ++pass) {
        p.cg = solve_increasing(
            [&](double cg) {
                auto q = p;
                q.cg = cg;
                return coupling_strength(q);
            },
            angular(d.g_hz), 1e-18, 1e-12);
        p.ckappa = solve_increasing(
            [&](double ck) {
                auto q = p;
                q.ckappa = ck;
                return ring_down(q).kappa;
            },
            angular(d.kappa_hz), 1e-18, 1e-13);
    }
    return p;
}

MultiModeParams default_multi_mode(int n_modes, const DefaultDesign& d) {
    MultiModeParams p;
    p.base = default_single_mode(d);
    p.n_modes = n_modes;
    return p;
}

TLineModelParams default_tline_model(double port_fraction, const DefaultDesign& d) {
    if (!(port_fraction >= 0.0 && port_fraction <= 1.0)) {
        throw ValidationError("port fraction must lie within [0, 1]");
    }
    const auto sm = default_single_mode(d);
    const TLine l = default_line(d);
    return TLineModelParams{sm.cq, sm.cg, l, port_fraction * l.length, sm.ckappa, sm.rload};
}

}  // namespace purcellsim
