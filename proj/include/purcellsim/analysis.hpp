#pragma once

// Qubit lifetime from the admittance seen by the junction, frequency and
// port-position sweeps, and sweet-spot detection.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "purcellsim/models.hpp"
#include "purcellsim/network.hpp"

namespace purcellsim {

// Re[Y] at or below this is numerical zero in a lossless network.
inline constexpr double kRealFloor = 1e-20;
// Re[Y] more negative than this is a passivity violation.
inline constexpr double kPassivityTolerance = 1e-15;
// Analytic lifetimes beyond this are reported as the open-circuit marker.
inline constexpr double kLifetimeGuard = 1e10;

// T1 in seconds, or the open-circuit marker (no decay channel at all).
class Lifetime {
public:
    static Lifetime finite(double seconds) { return Lifetime(seconds, false); }
    static Lifetime open_circuit() { return Lifetime(0.0, true); }

    bool is_open() const { return open_; }
    // Throws std::logic_error for the open-circuit marker.
    double seconds() const;
    // +inf for the marker; handy for comparisons.
    double value_or_infinity() const {
        return open_ ? std::numeric_limits<double>::infinity() : seconds_;
    }

private:
    Lifetime(double s, bool open) : seconds_(s), open_(open) {}
    double seconds_;
    bool open_;
};

Lifetime lifetime_from_admittance(const Immittance& y, double cq);

struct AnalyticPurcellParams {
    double g;       // rad/s
    double delta;   // rad/s, omega_q - omega_r
    double kappa;   // rad/s

    bool dispersive_valid() const;  // g / |delta| <= 0.3
};

// 1 / (kappa (g / delta)^2); throws ResonanceError for delta == 0.
Lifetime analytic_purcell(const AnalyticPurcellParams& p);

struct SweepSpec {
    enum class Spacing { linear, log };
    double f_start;
    double f_stop;
    int n_points;
    Spacing spacing = Spacing::linear;

    // Log grid at 2001 points per decade.
    static SweepSpec default_density(double f_start, double f_stop);
    std::vector<double> frequencies() const;
};

enum class SampleMarker { none, open, singular, overflow };
const char* to_string(SampleMarker m);

struct SweepResult {
    std::vector<double> freq_hz;
    std::optional<double> port_position_m;
    std::vector<double> y_re;  // NaN where the sample is singular
    std::vector<double> y_im;
    std::vector<Lifetime> t1;
    std::vector<SampleMarker> marker;
    std::string model_tag;

    std::size_t size() const { return freq_hz.size(); }
};

// Evaluates every grid point independently; per-point singularities become
// markers. Output is identical for any thread count (0 = hardware default).
SweepResult frequency_sweep(const NetworkTree& net, double cq, const SweepSpec& spec,
                            std::string model_tag = {}, unsigned threads = 0);

std::vector<SweepResult> port_position_sweep(const TLineModelParams& p,
                                             const std::vector<double>& positions_m,
                                             const SweepSpec& spec, unsigned threads = 0);

struct SweetSpot {
    enum class Kind { below_fundamental, inter_mode };
    double frequency_hz;
    Lifetime t1_peak;
    Kind kind;
    double neighborhood_width_hz;
    double prominence;  // peak / baseline, +inf for an open-circuit peak
};
const char* to_string(SweetSpot::Kind k);

struct SweetSpotOptions {
    double min_prominence = 10.0;
    double baseline_octaves = 0.5;
    double min_points_per_octave = 50.0;
};

// Local T1 maxima standing at least min_prominence above the geometric mean
// of the sweep sampled baseline_octaves below and above. Throws
// ResolutionError if the grid is coarser than min_points_per_octave anywhere
// and ValidationError if the sweep does not cover [0.2 f1, f1).
std::vector<SweetSpot> find_sweet_spots(const SweepResult& s, double f1_hz,
                                        const SweetSpotOptions& opt = {});

// Frequency (Hz) of the largest Re[Y] in [f_lo, f_hi]: coarse scan, then
// golden-section refinement.
double loaded_resonance_hz(const NetworkTree& net, double f_lo, double f_hi);

// Full width at half maximum (Hz) of the Re[Y] peak nearest f_guess.
double lorentzian_fwhm_hz(const NetworkTree& net, double f_lo, double f_hi);

// Normal-mode frequencies (Hz) of the lossless network closed by a qubit of
// capacitance cq and inductance lq, found as zeros of the total susceptance.
std::vector<double> coupled_mode_frequencies(const NetworkTree& lossless_net, double cq, double lq,
                                             double f_lo, double f_hi, int scan_points = 4001);

// g (rad/s) as half the minimum splitting of the two normal modes nearest
// f_center as the qubit inductance is swept.
double coupling_from_splitting(const NetworkTree& lossless_net, double cq, double f_center);

// Single-mode circuit with the load shorted, as used for coupling_from_splitting.
NetworkTree lossless_single_mode(const SingleModeParams& p);

}  // namespace purcellsim
