#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "purcellsim/cli/netlist.hpp"
#include "purcellsim/field_overlap.hpp"
#include "purcellsim/loss_budget.hpp"

namespace purcellsim::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitValidation = 3,
    kExitNumeric = 4,
    kExitInconsistent = 5,
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    enum class Format { csv, json };
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    std::optional<int> points;
    Format format = Format::csv;
};

void cmd_simulate(const GlobalOptions& g, const std::string& netlist_path, std::ostream& log);
void cmd_sweep_port(const GlobalOptions& g, const std::string& netlist_path, std::ostream& log);
void cmd_loss_budget(const GlobalOptions& g, const std::vector<std::string>& measurement_paths,
                     std::ostream& out);

struct FieldOverlapOptions {
    RankOptions rank;
    double min_volume_mm3 = 0.0;
};
void cmd_field_overlap(const GlobalOptions& g, const std::string& grid_path,
                       const FieldOverlapOptions& opt, std::ostream& out);

// Writes a planted-shadow grid (binary or CSV by extension) for trying
// field-overlap; the seed drives the background noise.
void cmd_fixture(const GlobalOptions& g, const std::string& path, std::size_t n, std::ostream& out);

// Measurement document:
//   {"config": "wispe"|"antiWispe", "t1_us": ..., "qubit_port": P, "readout_port": P}
//   P = {"amplitude_v": ..., "duration_ns": ..., "attenuation_db": ..., "port_id": "..."}
// port_id is optional; every other key is required and unknown keys are rejected.
ConfigMeasurement parse_measurement(const std::string& text, const std::string& source);

int exit_code_for(const std::exception& e);

// Full command line front end; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace purcellsim::cli
