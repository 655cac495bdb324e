#pragma once

// Line-oriented netlist format. '#' starts a comment. Statements:
//
//   model singleMode | multiMode | tline | customTree
//   defaults design
//   param <name> <value> <unit>
//   sweep <start> GHz <stop> GHz <points> [linear|log]
//   positions <frac> <frac> ...              (tline, fractions of the length)
//   modes <n>                                (multiMode)
//   mode_freq <index> <value> GHz            (multiMode, 1-based)
//   mode_loss <index> <value> ohm            (multiMode, parallel R of a mode)
//   tree <s-expression>                      (customTree, may span lines)
//
// Units are mandatory and fixed per quantity: GHz, fF, nH, mm, ohm (or Ω),
// m/s, Np/m. Values are converted to SI once, here.
//
// Tree grammar:
//   (open) | (short) | (load <r> ohm)
//   (series <element> <tree>) | (shunt <tree> <tree>)
//   (line <z0> ohm <length> mm [<vp> m/s] [<alpha> Np/m] <tree>)
//   element: (C <v> fF) | (L <v> nH) | (R <v> ohm)
//            | (rlc [<r> ohm] <l> nH <c> fF)
//            | (tl <z0> ohm <length> mm [<vp> m/s] [<alpha> Np/m])

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "purcellsim/analysis.hpp"
#include "purcellsim/errors.hpp"
#include "purcellsim/models.hpp"

namespace purcellsim::cli {

class NetlistError : public ValidationError {
public:
    NetlistError(const std::string& source, int line, int column, const std::string& what)
        : ValidationError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                          ": " + what),
          line_(line),
          column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

enum class ModelKind { single_mode, multi_mode, tline, custom_tree };
const char* to_string(ModelKind m);

struct NetlistDocument {
    ModelKind model = ModelKind::single_mode;
    std::optional<SingleModeParams> single;
    std::optional<MultiModeParams> multi;
    std::optional<TLineModelParams> tline;   // port_position is set per run
    NetworkTree custom_tree;
    double custom_cq = 0.0;
    std::optional<double> custom_f1_hz;
    std::optional<SweepSpec> sweep;
    std::vector<double> positions_frac;
    std::string source;
};

NetlistDocument parse_netlist(std::istream& in, const std::string& source = "<netlist>");
NetlistDocument parse_netlist_file(const std::string& path);

// 1-14 GHz, 2001 linear points.
SweepSpec default_sweep();

double qubit_capacitance(const NetlistDocument& doc);
// Fundamental used for sweet-spot classification, if known.
std::optional<double> fundamental_hz(const NetlistDocument& doc);
// The network for the document; tline needs a port fraction.
NetworkTree build_network(const NetlistDocument& doc, std::optional<double> position_frac = {});
TLineModelParams tline_at(const NetlistDocument& doc, double position_frac);

}  // namespace purcellsim::cli
