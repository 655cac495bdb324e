#include "purcellsim/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "purcellsim/analysis.hpp"
#include "purcellsim/cli/emit.hpp"
#include "purcellsim/cli/manifest.hpp"
#include "purcellsim/errors.hpp"
#include "purcellsim/field_io.hpp"
#include "purcellsim/fixtures.hpp"

namespace purcellsim::cli {

namespace {

const char* format_name(GlobalOptions::Format f) {
    return f == GlobalOptions::Format::json ? "json" : "csv";
}

void record_globals(RunManifest& m, const GlobalOptions& g) {
    m.add_option("format", format_name(g.format));
    m.add_option("points", g.points ? std::to_string(*g.points) : "default");
    m.add_option("seed", std::to_string(g.seed));
}

SweepSpec resolve_sweep(const NetlistDocument& doc, const GlobalOptions& g) {
    SweepSpec s = doc.sweep.value_or(default_sweep());
    if (g.points) {
        if (*g.points < 2) throw UsageError("--points must be at least 2");
        s.n_points = *g.points;
    }
    return s;
}

// Positions in first-seen order with exact duplicates removed.
std::vector<double> dedupe_positions(const std::vector<double>& in, std::ostream& log) {
    std::vector<double> out;
    for (double p : in) {
        if (std::find(out.begin(), out.end(), p) != out.end()) {
            log << "warning: duplicate port position " << format_number(p) << " ignored\n";
            continue;
        }
        out.push_back(p);
    }
    return out;
}

struct SpotOutcome {
    std::vector<SweetSpot> spots;
    std::string note;
};

SpotOutcome detect(const SweepResult& r, std::optional<double> f1) {
    SpotOutcome o;
    if (!f1) {
        o.note = "no fundamental frequency known; set param f1 to enable detection";
        return o;
    }
    try {
        o.spots = find_sweet_spots(r, *f1);
    } catch (const ValidationError& e) {
        o.note = e.what();
    } catch (const ResolutionError& e) {
        o.note = e.what();
    }
    return o;
}

// Highest-T1 below-fundamental spot, if any.
const SweetSpot* best_below_fundamental(const std::vector<SweetSpot>& spots) {
    const SweetSpot* best = nullptr;
    for (const auto& s : spots) {
        if (s.kind != SweetSpot::Kind::below_fundamental) continue;
        if (!best || s.t1_peak.value_or_infinity() > best->t1_peak.value_or_infinity()) best = &s;
    }
    return best;
}

std::string sweep_text(const GlobalOptions& g, const std::vector<SweepResult>& r) {
    std::ostringstream ss;
    if (g.format == GlobalOptions::Format::json) {
        ss << dump(sweep_json(r));
    } else {
        write_sweep_csv(ss, r);
    }
    return ss.str();
}

std::vector<SweepResult> run_sweeps(const NetlistDocument& doc, const SweepSpec& spec,
                                    const std::vector<double>& fracs) {
    if (doc.model == ModelKind::tline) {
        std::vector<double> positions;
        for (double f : fracs) positions.push_back(f * doc.tline->line.length);
        return port_position_sweep(*doc.tline, positions, spec);
    }
    return {frequency_sweep(build_network(doc), qubit_capacitance(doc), spec, to_string(doc.model))};
}

Json require_object(const Json& j, const std::string& where) {
    if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
    return j;
}

double require_number(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ValidationError(where + ": missing '" + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw ValidationError(where + ": '" + key + "' must be a number");
    return v.get<double>();
}

void reject_unknown(const Json& j, std::set<std::string> allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ValidationError(where + ": unknown key '" + it.key() + "'");
        }
    }
}

PulseRecord parse_pulse(const Json& j, const std::string& where) {
    require_object(j, where);
    reject_unknown(j, {"amplitude_v", "duration_ns", "attenuation_db", "port_id"}, where);
    PulseRecord p;
    p.amplitude = require_number(j, "amplitude_v", where);
    p.duration = require_number(j, "duration_ns", where) * 1e-9;
    p.line_attenuation = require_number(j, "attenuation_db", where);
    if (j.contains("port_id")) {
        if (!j.at("port_id").is_string()) throw ValidationError(where + ": 'port_id' must be a string");
        p.port_id = j.at("port_id").get<std::string>();
    }
    return p;
}

}  // namespace

ConfigMeasurement parse_measurement(const std::string& text, const std::string& source) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(source + ": " + e.what());
    }
    require_object(j, source);
    reject_unknown(j, {"config", "t1_us", "qubit_port", "readout_port"}, source);
    ConfigMeasurement m;
    if (!j.contains("config") || !j.at("config").is_string()) {
        throw ValidationError(source + ": 'config' must be \"wispe\" or \"antiWispe\"");
    }
    const auto cfg = j.at("config").get<std::string>();
    if (cfg == "wispe") m.config = PortConfig::wispe;
    else if (cfg == "antiWispe") m.config = PortConfig::anti_wispe;
    else throw ValidationError(source + ": unknown config '" + cfg + "'");
    m.t1_measured = require_number(j, "t1_us", source) * 1e-6;
    for (const char* key : {"qubit_port", "readout_port"}) {
        if (!j.contains(key)) throw ValidationError(source + ": missing '" + key + "'");
    }
    m.qubit_port_pulse = parse_pulse(j.at("qubit_port"), source + ": qubit_port");
    m.readout_port_pulse = parse_pulse(j.at("readout_port"), source + ": readout_port");
    validate(m);
    return m;
}

void cmd_simulate(const GlobalOptions& g, const std::string& netlist_path, std::ostream& log) {
    const std::string text = read_file(netlist_path);
    std::istringstream in(text);
    const NetlistDocument doc = parse_netlist(in, netlist_path);
    const SweepSpec spec = resolve_sweep(doc, g);
    if (doc.single) {
        if (auto w = doc.single->validity_warning()) log << "warning: " << *w << '\n';
    }

    RunManifest man("simulate", g.out_dir);
    man.add_input("netlist", text);
    record_globals(man, g);

    const std::vector<double> fracs =
        doc.model == ModelKind::tline ? dedupe_positions(doc.positions_frac, log) : std::vector<double>{};
    const auto results = run_sweeps(doc, spec, fracs);
    const std::string data_name = g.format == GlobalOptions::Format::json ? "sweep.json" : "sweep.csv";
    man.emit(data_name, sweep_text(g, results));

    const auto f1 = fundamental_hz(doc);
    Json j;
    j["model"] = to_string(doc.model);
    j["f1_hz"] = f1 ? Json(*f1) : Json(nullptr);
    Json entries = Json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto outcome = detect(results[i], f1);
        Json e;
        if (doc.model == ModelKind::tline) {
            e["position_frac"] = fracs[i];
            e["port_pos_m"] = *results[i].port_position_m;
        }
        e["spots"] = sweet_spots_json(outcome.spots);
        if (!outcome.note.empty()) {
            e["note"] = outcome.note;
            log << "warning: sweet-spot detection skipped: " << outcome.note << '\n';
        }
        entries.push_back(std::move(e));
        log << results[i].size() << " points, " << outcome.spots.size() << " sweet spot(s)\n";
    }
    j["results"] = std::move(entries);
    man.emit("sweet_spots.json", dump(j));
    man.write();
}

void cmd_sweep_port(const GlobalOptions& g, const std::string& netlist_path, std::ostream& log) {
    const std::string text = read_file(netlist_path);
    std::istringstream in(text);
    const NetlistDocument doc = parse_netlist(in, netlist_path);
    if (doc.model != ModelKind::tline) throw ValidationError("sweep-port needs model tline");
    const SweepSpec spec = resolve_sweep(doc, g);

    RunManifest man("sweep-port", g.out_dir);
    man.add_input("netlist", text);
    record_globals(man, g);

    const auto fracs = dedupe_positions(doc.positions_frac, log);
    const auto results = run_sweeps(doc, spec, fracs);
    const auto f1 = fundamental_hz(doc);
    const char* ext = g.format == GlobalOptions::Format::json ? ".json" : ".csv";

    Json j;
    j["model"] = "tline";
    j["f1_hz"] = *f1;
    j["length_m"] = doc.tline->line.length;
    Json entries = Json::array();
    std::vector<std::pair<double, double>> spot_by_position;
    for (std::size_t i = 0; i < results.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "sweep_pos_%02zu%s", i, ext);
        man.emit(name, sweep_text(g, {results[i]}));
        const auto outcome = detect(results[i], f1);
        const SweetSpot* best = best_below_fundamental(outcome.spots);
        Json e;
        e["position_frac"] = fracs[i];
        e["port_pos_m"] = *results[i].port_position_m;
        e["file"] = name;
        e["anti_wispe"] = best == nullptr;
        e["spot_frequency_hz"] = best ? Json(best->frequency_hz) : Json(nullptr);
        e["spot_t1_s"] = best && !best->t1_peak.is_open() ? Json(best->t1_peak.seconds()) : Json(nullptr);
        e["spots"] = sweet_spots_json(outcome.spots);
        if (!outcome.note.empty()) e["note"] = outcome.note;
        entries.push_back(std::move(e));
        if (best) spot_by_position.emplace_back(fracs[i], best->frequency_hz);
        log << "position " << format_number(fracs[i]) << ": "
            << (best ? format_number(best->frequency_hz / 1e9) + " GHz" : std::string("antiWispe"))
            << '\n';
    }
    std::sort(spot_by_position.begin(), spot_by_position.end());
    bool increasing = true, decreasing = true;
    for (std::size_t i = 1; i < spot_by_position.size(); ++i) {
        increasing &= spot_by_position[i].second > spot_by_position[i - 1].second;
        decreasing &= spot_by_position[i].second < spot_by_position[i - 1].second;
    }
    j["positions"] = std::move(entries);
    j["monotone_in_position"] = increasing || decreasing;
    man.emit(std::string("sweep_long") + ext, sweep_text(g, results));
    man.emit("sweet_spot_summary.json", dump(j));
    man.write();
}

void cmd_loss_budget(const GlobalOptions& g, const std::vector<std::string>& paths,
                     std::ostream& out) {
    std::optional<ConfigMeasurement> aw, w;
    RunManifest man("loss-budget", g.out_dir);
    record_globals(man, g);
    std::vector<std::pair<PortConfig, std::string>> texts;
    for (const auto& p : paths) {
        const std::string text = read_file(p);
        const auto m = parse_measurement(text, p);
        auto& slot = m.config == PortConfig::wispe ? w : aw;
        if (slot) {
            throw UsageError(std::string("more than one ") + to_string(m.config) + " measurement");
        }
        slot = m;
        texts.emplace_back(m.config, text);
    }
    if (!w || !aw) {
        throw UsageError(std::string("loss-budget needs one wispe and one antiWispe measurement; missing ") +
                         (!w ? "wispe" : "antiWispe"));
    }
    // Inputs keyed by role so argument order does not matter.
    std::sort(texts.begin(), texts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [cfg, text] : texts) man.add_input(to_string(cfg), text);

    const LossBudget b = extract_budget(*aw, *w);
    man.emit("loss_budget.json", dump(loss_budget_json(b, *aw, *w)));
    man.write();
    print_loss_budget_table(out, b, w->t1_measured, aw->t1_measured);
}

void cmd_field_overlap(const GlobalOptions& g, const std::string& grid_path,
                       const FieldOverlapOptions& opt, std::ostream& out) {
    if (!(opt.min_volume_mm3 >= 0.0)) throw UsageError("--min-volume must be nonnegative");
    const FieldGrid grid = read_field_grid(grid_path);
    RunManifest man("field-overlap", g.out_dir);
    man.add_input("grid", read_file(grid_path));
    record_globals(man, g);
    man.add_option("mode", opt.rank.mode == RankOptions::Mode::min ? "min" : "max");
    man.add_option("q0", format_number(opt.rank.metric_quantile));
    man.add_option("q1", format_number(opt.rank.energy_quantile));
    man.add_option("min_volume_mm3", format_number(opt.min_volume_mm3));

    const double min_volume = opt.min_volume_mm3 * 1e-9;
    const OverlapMap m = rank_port_regions(overlap_metric(grid), grid, min_volume, opt.rank);
    if (g.format == GlobalOptions::Format::json) {
        man.emit("overlap_metric.json", dump(metric_json(grid, m)));
    } else {
        std::ostringstream ss;
        write_metric_csv(ss, grid, m);
        man.emit("overlap_metric.csv", ss.str());
    }
    man.emit("port_regions.json", dump(regions_json(grid, m, opt.rank, min_volume)));
    man.write();

    out << m.candidate_regions.size() << " candidate region(s)\n";
    if (!m.candidate_regions.empty()) {
        const auto& r = m.candidate_regions.front();
        out << "rank 1: centroid (" << format_number(r.centroid[0]) << ", "
            << format_number(r.centroid[1]) << ", " << format_number(r.centroid[2])
            << ") m, score " << format_number(r.score) << ", " << r.voxels.size() << " voxels\n";
    } else {
        out << m.diagnostic << '\n';
    }
}

void cmd_fixture(const GlobalOptions& g, const std::string& path, std::size_t n, std::ostream& out) {
    const FieldGrid grid = planted_shadow_grid(default_planted_shadow(n, g.seed));
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path);
    if (std::filesystem::path(path).extension() == ".csv") {
        write_field_grid_csv(f, grid);
    } else {
        write_field_grid_binary(f, grid);
    }
    const auto c = default_planted_shadow(n, g.seed).blocks.front().centroid_index();
    out << "planted shadow centroid (voxel index) " << format_number(c[0]) << ' '
        << format_number(c[1]) << ' ' << format_number(c[2]) << '\n';
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const UsageError*>(&e)) return kExitUsage;
    if (dynamic_cast<const InconsistentMeasurementError*>(&e)) return kExitInconsistent;
    if (dynamic_cast<const ValidationError*>(&e)) return kExitValidation;
    if (dynamic_cast<const Error*>(&e)) return kExitNumeric;
    return kExitValidation;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Purcell-loss circuit simulator and port-placement tools", "purcellsim"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    std::string format = "csv";
    int points = 0;
    app.add_option("--out-dir", g.out_dir, "Directory for emitted files")->capture_default_str();
    app.add_option("--seed", g.seed, "Seed for randomized fixtures")->capture_default_str();
    auto* points_opt = app.add_option("--points", points, "Override the sweep point count");
    app.add_option("--format", format, "Data file format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    std::string netlist;
    auto* sim = app.add_subcommand("simulate", "Frequency sweep of a netlist with sweet-spot detection");
    sim->add_option("netlist", netlist, "Netlist file")->required();

    std::string port_netlist;
    auto* port = app.add_subcommand("sweep-port", "Port-position family for a tline netlist");
    port->add_option("netlist", port_netlist, "Netlist file")->required();

    std::vector<std::string> measurements;
    auto* loss = app.add_subcommand("loss-budget", "Loss budget from wispe and antiWispe pi-pulse records");
    loss->add_option("measurements", measurements, "Measurement JSON files")->required();

    std::string grid;
    std::string mode = "min";
    FieldOverlapOptions fo;
    auto* field = app.add_subcommand("field-overlap", "Port-placement metric on a field grid");
    field->add_option("grid", grid, "Grid file (CSV or binary)")->required();
    field->add_option("--mode", mode, "Region ranking mode")
        ->check(CLI::IsMember({"min", "max"}))
        ->capture_default_str();
    field->add_option("--min-volume", fo.min_volume_mm3, "Smallest region kept, mm^3")
        ->capture_default_str();
    field->add_option("--q0", fo.rank.metric_quantile, "Metric quantile gate")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    field->add_option("--q1", fo.rank.energy_quantile, "Cavity-energy quantile gate")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();

    std::string fixture_path;
    std::size_t fixture_n = 64;
    auto* fixture = app.add_subcommand("fixture", "Write a planted-shadow field grid");
    fixture->add_option("path", fixture_path, "Output grid file (.csv for CSV, else binary)")->required();
    fixture->add_option("--size", fixture_n, "Voxels per axis")
        ->check(CLI::Range(std::size_t{8}, std::size_t{512}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    g.format = format == "json" ? GlobalOptions::Format::json : GlobalOptions::Format::csv;
    if (points_opt->count() > 0) g.points = points;
    fo.rank.mode = mode == "max" ? RankOptions::Mode::max : RankOptions::Mode::min;

    try {
        if (*sim) cmd_simulate(g, netlist, err);
        else if (*port) cmd_sweep_port(g, port_netlist, err);
        else if (*loss) cmd_loss_budget(g, measurements, out);
        else if (*field) cmd_field_overlap(g, grid, fo, out);
        else if (*fixture) cmd_fixture(g, fixture_path, fixture_n, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    return kExitOk;
}

}  // namespace purcellsim::cli
