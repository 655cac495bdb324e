#pragma once

// Deterministic text emission. Every number goes through format_number
// (17 significant digits) so repeated runs are byte-identical.

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "purcellsim/analysis.hpp"
#include "purcellsim/field_overlap.hpp"
#include "purcellsim/loss_budget.hpp"

namespace purcellsim::cli {

using Json = nlohmann::ordered_json;

// "%.17g"; "nan", "inf" and "-inf" for non-finite values.
std::string format_number(double v);

// Columns freq_hz,[port_pos_m,]re_y_s,im_y_s,t1_s,marker. The position column
// appears when any result carries a port position. t1_s is "inf" for the
// open-circuit marker and "nan" for singular samples.
void write_sweep_csv(std::ostream& out, const std::vector<SweepResult>& results);
Json sweep_json(const std::vector<SweepResult>& results);

Json sweet_spot_json(const SweetSpot& s);
Json sweet_spots_json(const std::vector<SweetSpot>& spots);

Json loss_budget_json(const LossBudget& b, const ConfigMeasurement& anti_wispe,
                      const ConfigMeasurement& wispe);
void print_loss_budget_table(std::ostream& out, const LossBudget& b, double t1_wispe,
                             double t1_anti_wispe);

// Columns x_m,y_m,z_m,metric,ec_energy,defined.
void write_metric_csv(std::ostream& out, const FieldGrid& g, const OverlapMap& m);
Json metric_json(const FieldGrid& g, const OverlapMap& m);
Json regions_json(const FieldGrid& g, const OverlapMap& m, const RankOptions& opt,
                  double min_volume);

// Serializes with two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace purcellsim::cli
