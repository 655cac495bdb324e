#pragma once

// One-port network primitives: immittances, ABCD two-port stamps and the
// recursive tree grammar used to describe what a qubit's junction sees.
// Everything here is SI (rad/s, ohm, siemens, farad, henry, meter).

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace purcellsim {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;

inline double angular(double freq_hz) { return 2.0 * kPi * freq_hz; }
inline double hertz(double omega) { return omega / (2.0 * kPi); }

// A complex impedance or admittance tagged with which one it is.
class Immittance {
public:
    enum class Kind { impedance, admittance };

    static Immittance impedance(complex z) { return {z, Kind::impedance}; }
    static Immittance admittance(complex y) { return {y, Kind::admittance}; }

    complex value() const { return value_; }
    Kind kind() const { return kind_; }

    // Throws SingularityError when the conversion would divide by zero.
    Immittance to_admittance() const;
    Immittance to_impedance() const;

private:
    Immittance(complex v, Kind k) : value_(v), kind_(k) {}
    complex value_;
    Kind kind_;
};

// Transfer matrix [[a, b], [c, d]]; b in ohms, c in siemens.
struct Abcd {
    complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static Abcd identity() { return {}; }
    complex determinant() const { return a * d - b * c; }
    // |ad - bc - 1| relative to max(|ad|, |bc|, 1).
    double reciprocity_error() const;
};

Abcd cascade(const Abcd& first, const Abcd& second);
inline Abcd operator*(const Abcd& first, const Abcd& second) { return cascade(first, second); }

struct Resistor {
    double r;
};
struct Capacitor {
    double c;
};
struct Inductor {
    double l;
};
// Parallel R || L || C. An absent R means lossless.
struct ParallelRlc {
    std::optional<double> r;
    double l;
    double c;
};
// Uniform TEM line with frequency-independent attenuation alpha (Np/m).
// A zero length is allowed and stamps to the identity.
struct TLine {
    double z0;
    double length;
    double vp = kSpeedOfLight;
    double alpha = 0.0;

    double fundamental_hz() const { return vp / (2.0 * length); }
};

using Element = std::variant<Resistor, Capacitor, Inductor, ParallelRlc, TLine>;

// Throws InvalidElementError on nonpositive parameters.
void validate(const Element& e);

// Impedance of a lumped element. std::nullopt means an open circuit
// (a lossless parallel RLC exactly at resonance). TLine is rejected.
std::optional<complex> element_impedance(const Element& e, double omega);

// Series stamp [[1, Z], [0, 1]] for lumped elements, the line matrix for TLine.
Abcd element_abcd(const Element& e, double omega);
// Shunt stamp [[1, 0], [Y, 1]]; only lumped elements.
Abcd shunt_abcd(const Element& e, double omega);

struct Node;
using NetworkTree = std::shared_ptr<const Node>;

struct TermOpen {};
struct TermShort {};
struct TermResistor {
    double r;
};
struct Series {
    Element element;
    NetworkTree rest;
};
struct Shunt {
    NetworkTree branch;
    NetworkTree rest;
};
struct Line {
    TLine line;
    NetworkTree rest;
};

struct Node {
    std::variant<TermOpen, TermShort, TermResistor, Series, Shunt, Line> body;
};

NetworkTree open_end();
NetworkTree short_end();
NetworkTree resistor_end(double r);
NetworkTree series(Element e, NetworkTree rest);
NetworkTree shunt(NetworkTree branch, NetworkTree rest);
NetworkTree line(TLine t, NetworkTree rest);

// Checks every element and that every leaf is a termination.
void validate(const NetworkTree& net);

// Tree depth (a bare termination has depth 1).
int depth(const NetworkTree& net);

// Admittance seen looking into the root at angular frequency omega.
// An open network returns Y = 0. An exact short at the root throws
// SingularityError naming the subtree path where the short originated;
// non-finite intermediates throw NumericOverflowError.
Immittance input_admittance(const NetworkTree& net, double omega);

// Same evaluation in impedance form; an open network throws SingularityError.
Immittance input_impedance(const NetworkTree& net, double omega);

// S-expression rendering in SI units, for diagnostics.
std::string to_string(const NetworkTree& net);
std::string to_string(const Element& e);

}  // namespace purcellsim
