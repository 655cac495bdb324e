#include "purcellsim/cli/emit.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>

namespace purcellsim::cli {

namespace {

// JSON has no inf/nan; those become null.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string t1_text(const Lifetime& t, SampleMarker m) {
    if (m == SampleMarker::singular || m == SampleMarker::overflow) return "nan";
    if (t.is_open()) return "inf";
    return format_number(t.seconds());
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepResult>& results) {
    bool with_position = false;
    for (const auto& r : results) with_position |= r.port_position_m.has_value();
    out << (with_position ? "freq_hz,port_pos_m,re_y_s,im_y_s,t1_s,marker\n"
                          : "freq_hz,re_y_s,im_y_s,t1_s,marker\n");
    for (const auto& r : results) {
        const std::string pos = with_position && r.port_position_m
                                    ? format_number(*r.port_position_m) + ","
                                    : (with_position ? std::string("nan,") : std::string());
        for (std::size_t i = 0; i < r.size(); ++i) {
            out << format_number(r.freq_hz[i]) << ',' << pos << format_number(r.y_re[i]) << ','
                << format_number(r.y_im[i]) << ',' << t1_text(r.t1[i], r.marker[i]) << ','
                << to_string(r.marker[i]) << '\n';
        }
    }
}

Json sweep_json(const std::vector<SweepResult>& results) {
    Json arr = Json::array();
    for (const auto& r : results) {
        Json j;
        j["model"] = r.model_tag;
        j["port_pos_m"] = r.port_position_m ? num(*r.port_position_m) : Json(nullptr);
        Json f = Json::array(), re = Json::array(), im = Json::array(), t1 = Json::array(),
             mk = Json::array();
        for (std::size_t i = 0; i < r.size(); ++i) {
            f.push_back(num(r.freq_hz[i]));
            re.push_back(num(r.y_re[i]));
            im.push_back(num(r.y_im[i]));
            t1.push_back(r.t1[i].is_open() ? Json(nullptr) : num(r.t1[i].seconds()));
            mk.push_back(to_string(r.marker[i]));
        }
        j["freq_hz"] = std::move(f);
        j["re_y_s"] = std::move(re);
        j["im_y_s"] = std::move(im);
        j["t1_s"] = std::move(t1);
        j["marker"] = std::move(mk);
        arr.push_back(std::move(j));
    }
    return arr;
}

Json sweet_spot_json(const SweetSpot& s) {
    Json j;
    j["kind"] = to_string(s.kind);
    j["frequency_hz"] = s.frequency_hz;
    j["t1_s"] = s.t1_peak.is_open() ? Json(nullptr) : num(s.t1_peak.seconds());
    j["open_circuit"] = s.t1_peak.is_open();
    j["neighborhood_width_hz"] = num(s.neighborhood_width_hz);
    j["prominence"] = num(s.prominence);
    return j;
}

Json sweet_spots_json(const std::vector<SweetSpot>& spots) {
    Json arr = Json::array();
    for (const auto& s : spots) arr.push_back(sweet_spot_json(s));
    return arr;
}

Json loss_budget_json(const LossBudget& b, const ConfigMeasurement& aw,
                      const ConfigMeasurement& w) {
    Json j;
    j["gamma_int_per_s"] = b.gamma_int;
    j["gamma_d_per_s"] = b.gamma_d;
    j["gamma_r_wispe_per_s"] = b.gamma_r_wispe;
    j["gamma_r_anti_wispe_per_s"] = b.gamma_r_anti_wispe;
    j["purcell_limit_wispe_s"] = num(b.purcell_limit_wispe);
    j["t1_wispe_s"] = w.t1_measured;
    j["t1_anti_wispe_s"] = aw.t1_measured;
    j["pulse_power_ratio_wispe"] = effective_power(w.qubit_port_pulse) == 0.0
                                       ? Json(nullptr)
                                       : num(effective_power(w.readout_port_pulse) /
                                             effective_power(w.qubit_port_pulse));
    j["pulse_power_ratio_anti_wispe"] = num(effective_power(aw.readout_port_pulse) /
                                            effective_power(aw.qubit_port_pulse));
    return j;
}

void print_loss_budget_table(std::ostream& out, const LossBudget& b, double t1_w, double t1_aw) {
    struct Row {
        const char* name;
        double rate;
    };
    const Row rows[] = {
        {"internal", b.gamma_int},
        {"drive port", b.gamma_d},
        {"readout port (wispe)", b.gamma_r_wispe},
        {"readout port (antiWispe)", b.gamma_r_anti_wispe},
    };
    auto us = [](double rate) { return rate > 0.0 ? 1e6 / rate : INFINITY; };
    out << std::left << std::setw(28) << "channel" << std::right << std::setw(16) << "rate (1/s)"
        << std::setw(18) << "limit (us)" << '\n';
    for (const auto& r : rows) {
        out << std::left << std::setw(28) << r.name << std::right << std::setw(16)
            << std::setprecision(6) << r.rate << std::setw(18) << us(r.rate) << '\n';
    }
    const double cum_w = b.gamma_int + b.gamma_d + b.gamma_r_wispe;
    const double cum_aw = b.gamma_d + b.gamma_r_anti_wispe;
    out << std::left << std::setw(28) << "cumulative (wispe)" << std::right << std::setw(16)
        << cum_w << std::setw(18) << us(cum_w) << "   measured T1 " << t1_w * 1e6 << " us\n";
    out << std::left << std::setw(28) << "cumulative (antiWispe)" << std::right << std::setw(16)
        << cum_aw << std::setw(18) << us(cum_aw) << "   measured T1 " << t1_aw * 1e6 << " us\n";
}

void write_metric_csv(std::ostream& out, const FieldGrid& g, const OverlapMap& m) {
    out << "x_m,y_m,z_m,metric,ec_energy,defined\n";
    for (std::size_t i = 0; i < g.voxel_count(); ++i) {
        const auto p = g.position(i);
        out << format_number(p[0]) << ',' << format_number(p[1]) << ',' << format_number(p[2])
            << ',' << format_number(m.metric[i]) << ',' << format_number(m.cavity_energy[i]) << ','
            << (m.defined[i] ? 1 : 0) << '\n';
    }
}

Json metric_json(const FieldGrid& g, const OverlapMap& m) {
    Json j;
    j["dims"] = {g.dims[0], g.dims[1], g.dims[2]};
    j["origin_m"] = {g.origin[0], g.origin[1], g.origin[2]};
    j["spacing_m"] = {g.spacing[0], g.spacing[1], g.spacing[2]};
    Json metric = Json::array(), energy = Json::array();
    for (std::size_t i = 0; i < g.voxel_count(); ++i) {
        metric.push_back(m.defined[i] ? num(m.metric[i]) : Json(nullptr));
        energy.push_back(num(m.cavity_energy[i]));
    }
    j["metric"] = std::move(metric);
    j["ec_energy"] = std::move(energy);
    return j;
}

Json regions_json(const FieldGrid& g, const OverlapMap& m, const RankOptions& opt,
                  double min_volume) {
    Json j;
    j["mode"] = opt.mode == RankOptions::Mode::min ? "min" : "max";
    j["metric_quantile"] = opt.metric_quantile;
    j["energy_quantile"] = opt.energy_quantile;
    j["min_volume_m3"] = min_volume;
    j["voxel_volume_m3"] = g.voxel_volume();
    Json regions = Json::array();
    int rank = 1;
    for (const auto& r : m.candidate_regions) {
        Json e;
        e["rank"] = rank++;
        e["score"] = num(r.score);
        e["centroid_m"] = {r.centroid[0], r.centroid[1], r.centroid[2]};
        e["volume_m3"] = r.volume;
        e["voxels"] = r.voxels.size();
        e["mean_ec_energy"] = num(r.mean_cavity_energy);
        regions.push_back(std::move(e));
    }
    j["regions"] = std::move(regions);
    j["diagnostic"] = m.diagnostic.empty() ? Json(nullptr) : Json(m.diagnostic);
    return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace purcellsim::cli
