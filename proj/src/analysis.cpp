#include "purcellsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "purcellsim/errors.hpp"

namespace purcellsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double real_admittance(const NetworkTree& net, double f_hz) {
    try {
        return input_admittance(net, angular(f_hz)).value().real();
    } catch (const SingularityError&) {
        return kNaN;
    } catch (const NumericOverflowError&) {
        return kNaN;
    }
}

template <class F>
double golden_max(F&& f, double a, double b, int iterations = 120) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iterations; ++i) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

template <class F>
double bisect(F&& f, double lo, double hi, int iterations = 200) {
    const bool lo_negative = f(lo) < 0.0;
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        ((f(mid) < 0.0) == lo_negative ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// T1 as a plain number for peak analysis: +inf for the marker, NaN when singular.
std::vector<double> lifetime_values(const SweepResult& s) {
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        v[i] = s.marker[i] == SampleMarker::singular || s.marker[i] == SampleMarker::overflow
                   ? kNaN
                   : s.t1[i].value_or_infinity();
    }
    return v;
}

// log T1 at an arbitrary frequency by linear interpolation in (log f, log T1).
double log_lifetime_at(const SweepResult& s, const std::vector<double>& v, double f) {
    const auto& x = s.freq_hz;
    f = std::clamp(f, x.front(), x.back());
    auto it = std::lower_bound(x.begin(), x.end(), f);
    std::size_t hi = static_cast<std::size_t>(it - x.begin());
    if (hi == 0) return std::log(v[0]);
    if (hi >= x.size()) return std::log(v.back());
    const std::size_t lo = hi - 1;
    const double t = std::log(f / x[lo]) / std::log(x[hi] / x[lo]);
    return (1.0 - t) * std::log(v[lo]) + t * std::log(v[hi]);
}

}  // namespace

double Lifetime::seconds() const {
    if (open_) throw std::logic_error("open-circuit lifetime has no finite value");
    return seconds_;
}

Lifetime lifetime_from_admittance(const Immittance& y, double cq) {
    if (y.kind() != Immittance::Kind::admittance) {
        throw ValidationError("lifetime needs an admittance, not an impedance");
    }
    if (!(cq > 0.0)) throw ValidationError("Cq must be positive");
    const double g = y.value().real();
    if (g < -kPassivityTolerance) {
        throw PassivityViolationError("negative conductance " + std::to_string(g) +
                                      " S seen by the qubit");
    }
    if (g <= kRealFloor) return Lifetime::open_circuit();
    return Lifetime::finite(cq / g);
}

bool AnalyticPurcellParams::dispersive_valid() const { return std::abs(g / delta) <= 0.3; }

Lifetime analytic_purcell(const AnalyticPurcellParams& p) {
    if (p.delta == 0.0) throw ResonanceError("zero qubit-resonator detuning");
    const double ratio = p.g / p.delta;
    const double gamma = p.kappa * ratio * ratio;
    if (!(gamma > 0.0) || 1.0 / gamma > kLifetimeGuard) return Lifetime::open_circuit();
    return Lifetime::finite(1.0 / gamma);
}

SweepSpec SweepSpec::default_density(double f_start, double f_stop) {
    const int n = static_cast<int>(std::ceil(2001.0 * std::log10(f_stop / f_start))) + 1;
    return {f_start, f_stop, std::max(n, 2), Spacing::log};
}

std::vector<double> SweepSpec::frequencies() const {
    if (!(f_start > 0.0) || !(f_stop > f_start)) {
        throw ValidationError("sweep needs 0 < fStart < fStop");
    }
    if (n_points < 2) throw ValidationError("sweep needs at least 2 points");
    std::vector<double> f(static_cast<std::size_t>(n_points));
    const double last = n_points - 1;
    for (int i = 0; i < n_points; ++i) {
        const double t = i / last;
        f[i] = spacing == Spacing::linear ? f_start + (f_stop - f_start) * t
                                          : f_start * std::pow(f_stop / f_start, t);
    }
    f.back() = f_stop;
    return f;
}

const char* to_string(SampleMarker m) {
    switch (m) {
        case SampleMarker::none:
            return "";
        case SampleMarker::open:
            return "open";
        case SampleMarker::singular:
            return "singular";
        case SampleMarker::overflow:
            return "overflow";
    }
    return "";
}

const char* to_string(SweetSpot::Kind k) {
    return k == SweetSpot::Kind::below_fundamental ? "belowFundamental" : "interMode";
}

SweepResult frequency_sweep(const NetworkTree& net, double cq, const SweepSpec& spec,
                            std::string model_tag, unsigned threads) {
    validate(net);
    if (!(cq > 0.0)) throw ValidationError("Cq must be positive");
    SweepResult out;
    out.freq_hz = spec.frequencies();
    out.model_tag = std::move(model_tag);
    const std::size_t n = out.freq_hz.size();
    out.y_re.assign(n, kNaN);
    out.y_im.assign(n, kNaN);
    out.t1.assign(n, Lifetime::open_circuit());
    out.marker.assign(n, SampleMarker::none);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                const Immittance y = input_admittance(net, angular(out.freq_hz[i]));
                out.y_re[i] = y.value().real();
                out.y_im[i] = y.value().imag();
                out.t1[i] = lifetime_from_admittance(y, cq);
                if (out.t1[i].is_open()) out.marker[i] = SampleMarker::open;
            } catch (const SingularityError&) {
                out.marker[i] = SampleMarker::singular;
            } catch (const NumericOverflowError&) {
                out.marker[i] = SampleMarker::overflow;
            }
        }
    };

    unsigned nt = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, std::max<std::size_t>(1, n / 256)));
    if (nt <= 1) {
        work(0, n);
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + nt - 1) / nt;
    for (unsigned t = 0; t < nt; ++t) {
        const std::size_t b = t * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
    return out;
}

std::vector<SweepResult> port_position_sweep(const TLineModelParams& p,
                                             const std::vector<double>& positions_m,
                                             const SweepSpec& spec, unsigned threads) {
    std::vector<SweepResult> out;
    out.reserve(positions_m.size());
    for (double x : positions_m) {
        TLineModelParams q = p;
        q.port_position = x;
        auto r = frequency_sweep(build_tline_model(q), q.cq, spec, "tline", threads);
        r.port_position_m = x;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<SweetSpot> find_sweet_spots(const SweepResult& s, double f1_hz,
                                        const SweetSpotOptions& opt) {
    const auto& f = s.freq_hz;
    if (f.size() < 3) throw ResolutionError("sweep has fewer than 3 points");
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        if (!(f[i + 1] > f[i])) throw ValidationError("sweep axis must be strictly increasing");
        const double per_octave = std::log(2.0) / std::log(f[i + 1] / f[i]);
        if (per_octave < opt.min_points_per_octave) {
            throw ResolutionError("sweep resolution " + std::to_string(per_octave) +
                                  " points/octave near " + std::to_string(f[i] / 1e9) +
                                  " GHz is below " + std::to_string(opt.min_points_per_octave));
        }
    }
    if (f.front() > 0.2 * f1_hz * (1.0 + 1e-12) || f.back() < f1_hz * (1.0 - 1e-12)) {
        throw ValidationError("sweep must cover [0.2 f1, f1)");
    }

    const std::vector<double> v = lifetime_values(s);
    const double step = std::pow(2.0, opt.baseline_octaves);
    std::vector<SweetSpot> spots;
    std::size_t i = 1;
    while (i + 1 < v.size()) {
        if (std::isnan(v[i]) || std::isnan(v[i - 1]) || !(v[i] > v[i - 1])) {
            ++i;
            continue;
        }
        // Extend over a plateau (runs of the open-circuit marker).
        std::size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
        if (j + 1 >= v.size() || std::isnan(v[j + 1]) || !(v[j + 1] < v[i])) {
            i = j + 1;
            continue;
        }
        const std::size_t peak = (i + j) / 2;
        const double fp = f[peak];
        const double log_base = 0.5 * (log_lifetime_at(s, v, fp / step) +
                                       log_lifetime_at(s, v, fp * step));
        const bool open_peak = std::isinf(v[i]);
        // Finite stand-in for an open peak: its larger finite shoulder.
        const double peak_value = open_peak ? std::max(v[i - 1], v[j + 1]) : v[i];
        const double log_peak = std::log(peak_value);
        const double prominence = open_peak ? kInf : std::exp(log_peak - log_base);
        if (!std::isfinite(log_base) || prominence < opt.min_prominence) {
            i = j + 1;
            continue;
        }

        // Half-prominence neighborhood in log T1.
        const double level = 0.5 * (std::max(log_peak, log_base) + log_base);
        auto crossing = [&](std::size_t k, std::size_t k_out) {
            const double a = std::log(v[k]);
            const double b = std::log(v[k_out]);
            if (!std::isfinite(a)) return f[k_out];
            const double t = (a - level) / (a - b);
            return f[k] + t * (f[k_out] - f[k]);
        };
        std::size_t l = i;
        while (l > 0 && !std::isnan(v[l - 1]) && std::log(v[l - 1]) >= level) --l;
        std::size_t r = j;
        while (r + 1 < v.size() && !std::isnan(v[r + 1]) && std::log(v[r + 1]) >= level) ++r;
        const double f_left = l > 0 && !std::isnan(v[l - 1]) ? crossing(l, l - 1) : f[l];
        const double f_right =
            r + 1 < v.size() && !std::isnan(v[r + 1]) ? crossing(r, r + 1) : f[r];

        // Keep the highest sample of the neighborhood as the spot.
        std::size_t best = peak;
        for (std::size_t k = l; k <= r; ++k) {
            if (v[k] > v[best]) best = k;
        }
        spots.push_back({f[best],
                         open_peak || std::isinf(v[best]) ? Lifetime::open_circuit()
                                                          : Lifetime::finite(v[best]),
                         f[best] < f1_hz ? SweetSpot::Kind::below_fundamental
                                         : SweetSpot::Kind::inter_mode,
                         f_right - f_left, prominence});
        i = r + 1;
    }
    return spots;
}

double loaded_resonance_hz(const NetworkTree& net, double f_lo, double f_hi) {
    if (!(f_lo > 0.0 && f_hi > f_lo)) throw ValidationError("need 0 < f_lo < f_hi");
    constexpr int kScan = 2001;
    double best_f = f_lo, best_g = -kInf;
    std::size_t best_i = 0;
    const double df = (f_hi - f_lo) / (kScan - 1);
    for (int i = 0; i < kScan; ++i) {
        const double g = real_admittance(net, f_lo + i * df);
        if (g > best_g) {
            best_g = g;
            best_f = f_lo + i * df;
            best_i = static_cast<std::size_t>(i);
        }
    }
    if (!(best_g > 0.0)) throw ValidationError("no conductance peak in the search window");
    const double a = best_i == 0 ? f_lo : best_f - df;
    const double b = best_i + 1 == kScan ? f_hi : best_f + df;
    return golden_max(
        [&](double x) {
            const double g = real_admittance(net, x);
            return std::isnan(g) ? -kInf : g;
        },
        a, b);
}

double lorentzian_fwhm_hz(const NetworkTree& net, double f_lo, double f_hi) {
    const double f0 = loaded_resonance_hz(net, f_lo, f_hi);
    const double half = 0.5 * real_admittance(net, f0);
    auto below_half = [&](double x) { return real_admittance(net, x) - half; };
    auto edge = [&](double dir) {
        double delta = (f_hi - f_lo) * 1e-7;
        double x = f0 + dir * delta;
        while (below_half(x) > 0.0) {
            delta *= 2.0;
            x = f0 + dir * delta;
            if (x <= f_lo || x >= f_hi) throw ValidationError("half-maximum outside window");
        }
        return bisect(below_half, f0 + dir * 0.5 * delta, x);
    };
    return edge(1.0) - edge(-1.0);
}

std::vector<double> coupled_mode_frequencies(const NetworkTree& lossless_net, double cq, double lq,
                                             double f_lo, double f_hi, int scan_points) {
    auto susceptance = [&](double fz) {
        const double w = angular(fz);
        try {
            return input_admittance(lossless_net, w).value().imag() + w * cq - 1.0 / (w * lq);
        } catch (const SingularityError&) {
            return kNaN;
        }
    };
    std::vector<double> zeros;
    const double df = (f_hi - f_lo) / (scan_points - 1);
    double prev = susceptance(f_lo);
    for (int i = 1; i < scan_points; ++i) {
        const double x = f_lo + i * df;
        const double cur = susceptance(x);
        // Lossless susceptance rises through its zeros and falls across its poles.
        if (prev < 0.0 && cur >= 0.0) zeros.push_back(bisect(susceptance, x - df, x));
        prev = cur;
    }
    return zeros;
}

double coupling_from_splitting(const NetworkTree& lossless_net, double cq, double f_center) {
    auto splitting = [&](double fq) {
        const double wq = angular(fq);
        const double lq = 1.0 / (wq * wq * cq);
        auto z = coupled_mode_frequencies(lossless_net, cq, lq, 0.5 * f_center, 1.5 * f_center);
        if (z.size() < 2) return kInf;
        std::sort(z.begin(), z.end(), [&](double a, double b) {
            return std::abs(a - f_center) < std::abs(b - f_center);
        });
        return std::abs(z[1] - z[0]);
    };
    const double fq = golden_max([&](double x) { return -splitting(x); }, 0.85 * f_center,
                                 1.15 * f_center, 80);
    return 0.5 * angular(splitting(fq));
}

NetworkTree lossless_single_mode(const SingleModeParams& p) {
    validate(p);
    auto resonator = series(ParallelRlc{std::nullopt, p.lr, p.cr}, short_end());
    return series(Capacitor{p.cg}, shunt(resonator, series(Capacitor{p.ckappa}, short_end())));
}

}  // namespace purcellsim
