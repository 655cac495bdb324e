#include "purcellsim/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "purcellsim/errors.hpp"

namespace purcellsim {

namespace {

const complex kJ{0.0, 1.0};

bool finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidElementError(std::string(what) + " must be positive and finite, got " +
                                  std::to_string(v));
    }
}

Abcd line_abcd(const TLine& t, double omega) {
    const double beta_l = omega / t.vp * t.length;
    if (t.alpha == 0.0) {
        const double c = std::cos(beta_l);
        const double s = std::sin(beta_l);
        return {complex{c, 0.0}, complex{0.0, t.z0 * s}, complex{0.0, s / t.z0}, complex{c, 0.0}};
    }
    const complex gl{t.alpha * t.length, beta_l};
    const complex ch = std::cosh(gl);
    const complex sh = std::sinh(gl);
    return {ch, t.z0 * sh, sh / t.z0, ch};
}

// Result of evaluating a subtree in impedance form. Open and short are kept
// symbolic so open-circuited series branches and shorted shunts compose
// exactly instead of producing infinities.
struct Port {
    enum class State { finite, open, shorted };
    State state = State::finite;
    complex z{};
    std::string origin;  // subtree path of the short, set only when shorted

    static Port open() { return {State::open, {}, {}}; }
    static Port shorted(std::string where) { return {State::shorted, {}, std::move(where)}; }
    static Port value(complex z) {
        if (z == complex{}) return shorted("");
        return {State::finite, z, {}};
    }

    complex admittance() const {
        if (state == State::open) return {};
        return 1.0 / z;
    }
};

std::string join(const char* step, const std::string& tail) {
    return tail.empty() ? std::string(step) : std::string(step) + "/" + tail;
}

Port prefix_short(Port p, const char* step) {
    if (p.state == Port::State::shorted) p.origin = join(step, p.origin);
    return p;
}

Port check(Port p, const char* where) {
    if (p.state == Port::State::finite && !finite(p.z)) {
        throw NumericOverflowError(std::string("non-finite impedance in ") + where);
    }
    return p;
}

Port evaluate(const Node& node, double omega) {
    return std::visit(
        overloaded{
            [](const TermOpen&) { return Port::open(); },
            [](const TermShort&) { return Port::shorted("short"); },
            [](const TermResistor& t) { return Port::value(complex{t.r, 0.0}); },
            [omega](const Series& s) {
                Port rest = prefix_short(evaluate(*s.rest, omega), "series.rest");
                if (rest.state == Port::State::open) return Port::open();
                const auto ze = element_impedance(s.element, omega);
                if (!ze) return Port::open();
                if (rest.state == Port::State::shorted) {
                    if (*ze == complex{}) return rest;
                    return check(Port::value(*ze), "series element");
                }
                Port out = Port::value(*ze + rest.z);
                if (out.state == Port::State::shorted) out.origin = "series";
                return check(out, "series");
            },
            [omega](const Shunt& s) {
                Port branch = prefix_short(evaluate(*s.branch, omega), "shunt.branch");
                if (branch.state == Port::State::shorted) return branch;
                Port rest = prefix_short(evaluate(*s.rest, omega), "shunt.rest");
                if (rest.state == Port::State::shorted) return rest;
                const complex y = branch.admittance() + rest.admittance();
                if (y == complex{}) return Port::open();
                if (!finite(y)) throw NumericOverflowError("non-finite admittance in shunt");
                return check(Port::value(1.0 / y), "shunt");
            },
            [omega](const Line& l) {
                Port rest = prefix_short(evaluate(*l.rest, omega), "line.rest");
                const Abcd m = line_abcd(l.line, omega);
                complex num, den;
                switch (rest.state) {
                    case Port::State::open:
                        num = m.a;
                        den = m.c;
                        break;
                    case Port::State::shorted:
                        num = m.b;
                        den = m.d;
                        break;
                    case Port::State::finite:
                        num = m.a * rest.z + m.b;
                        den = m.c * rest.z + m.d;
                        break;
                }
                if (den == complex{}) return Port::open();
                if (num == complex{}) {
                    // Zero-length line passes the termination through unchanged.
                    return rest.state == Port::State::shorted ? rest : Port::shorted("line");
                }
                return check(Port::value(num / den), "line");
            },
        },
        node.body);
}

int depth_of(const Node& node) {
    return std::visit(overloaded{
                          [](const Series& s) { return 1 + depth_of(*s.rest); },
                          [](const Shunt& s) {
                              return 1 + std::max(depth_of(*s.branch), depth_of(*s.rest));
                          },
                          [](const Line& l) { return 1 + depth_of(*l.rest); },
                          [](const auto&) { return 1; },
                      },
                      node.body);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

Immittance Immittance::to_admittance() const {
    if (kind_ == Kind::admittance) return *this;
    if (value_ == complex{}) throw SingularityError("zero impedance has no admittance", "value");
    return admittance(1.0 / value_);
}

Immittance Immittance::to_impedance() const {
    if (kind_ == Kind::impedance) return *this;
    if (value_ == complex{}) throw SingularityError("zero admittance has no impedance", "value");
    return impedance(1.0 / value_);
}

double Abcd::reciprocity_error() const {
    const complex ad = a * d;
    const complex bc = b * c;
    const double scale = std::max({std::abs(ad), std::abs(bc), 1.0});
    return std::abs(ad - bc - 1.0) / scale;
}

Abcd cascade(const Abcd& m1, const Abcd& m2) {
    return {m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d, m1.c * m2.a + m1.d * m2.c,
            m1.c * m2.b + m1.d * m2.d};
}

void validate(const Element& e) {
    std::visit(overloaded{
                   [](const Resistor& r) { require_positive(r.r, "resistance"); },
                   [](const Capacitor& c) { require_positive(c.c, "capacitance"); },
                   [](const Inductor& l) { require_positive(l.l, "inductance"); },
                   [](const ParallelRlc& p) {
                       if (p.r) require_positive(*p.r, "parallel resistance");
                       require_positive(p.l, "parallel inductance");
                       require_positive(p.c, "parallel capacitance");
                   },
                   [](const TLine& t) {
                       require_positive(t.z0, "line impedance");
                       require_positive(t.vp, "phase velocity");
                       if (!(t.length >= 0.0) || !std::isfinite(t.length)) {
                           throw InvalidElementError("line length must be nonnegative");
                       }
                       if (!(t.alpha >= 0.0) || !std::isfinite(t.alpha)) {
                           throw InvalidElementError("line attenuation must be nonnegative");
                       }
                   },
               },
               e);
}

std::optional<complex> element_impedance(const Element& e, double omega) {
    return std::visit(
        overloaded{
            [](const Resistor& r) -> std::optional<complex> { return complex{r.r, 0.0}; },
            [omega](const Capacitor& c) -> std::optional<complex> {
                return complex{0.0, -1.0 / (omega * c.c)};
            },
            [omega](const Inductor& l) -> std::optional<complex> {
                return complex{0.0, omega * l.l};
            },
            [omega](const ParallelRlc& p) -> std::optional<complex> {
                complex y{0.0, omega * p.c - 1.0 / (omega * p.l)};
                if (p.r) y += 1.0 / *p.r;
                if (y == complex{}) return std::nullopt;
                return 1.0 / y;
            },
            [](const TLine&) -> std::optional<complex> {
                throw InvalidElementError("a transmission line has no lumped impedance");
            },
        },
        e);
}

Abcd element_abcd(const Element& e, double omega) {
    if (!(omega > 0.0)) throw ValidationError("omega must be positive");
    validate(e);
    if (const auto* t = std::get_if<TLine>(&e)) return line_abcd(*t, omega);
    const auto z = element_impedance(e, omega);
    if (!z) throw SingularityError("series element is an open circuit", "element");
    return {1.0, *z, 0.0, 1.0};
}

Abcd shunt_abcd(const Element& e, double omega) {
    if (!(omega > 0.0)) throw ValidationError("omega must be positive");
    validate(e);
    if (std::holds_alternative<TLine>(e)) {
        throw InvalidElementError("a transmission line cannot be stamped as a shunt element");
    }
    const auto z = element_impedance(e, omega);
    if (!z) return Abcd::identity();
    return {1.0, 0.0, 1.0 / *z, 1.0};
}

NetworkTree open_end() { return std::make_shared<const Node>(Node{TermOpen{}}); }
NetworkTree short_end() { return std::make_shared<const Node>(Node{TermShort{}}); }
NetworkTree resistor_end(double r) { return std::make_shared<const Node>(Node{TermResistor{r}}); }
NetworkTree series(Element e, NetworkTree rest) {
    return std::make_shared<const Node>(Node{Series{std::move(e), std::move(rest)}});
}
NetworkTree shunt(NetworkTree branch, NetworkTree rest) {
    return std::make_shared<const Node>(Node{Shunt{std::move(branch), std::move(rest)}});
}
NetworkTree line(TLine t, NetworkTree rest) {
    return std::make_shared<const Node>(Node{Line{t, std::move(rest)}});
}

void validate(const NetworkTree& net) {
    if (!net) throw ValidationError("network tree has a missing subtree");
    std::visit(overloaded{
                   [](const TermResistor& t) { require_positive(t.r, "termination resistance"); },
                   [](const Series& s) {
                       if (std::holds_alternative<TLine>(s.element)) {
                           throw InvalidElementError("use a line node for transmission lines");
                       }
                       validate(s.element);
                       validate(s.rest);
                   },
                   [](const Shunt& s) {
                       validate(s.branch);
                       validate(s.rest);
                   },
                   [](const Line& l) {
                       validate(Element{l.line});
                       validate(l.rest);
                   },
                   [](const auto&) {},
               },
               net->body);
}

int depth(const NetworkTree& net) { return depth_of(*net); }

Immittance input_admittance(const NetworkTree& net, double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("omega must be positive");
    const Port p = evaluate(*net, omega);
    switch (p.state) {
        case Port::State::open:
            return Immittance::admittance({});
        case Port::State::shorted:
            throw SingularityError("exact short seen from the observation node",
                                   p.origin.empty() ? "root" : "root/" + p.origin);
        case Port::State::finite:
            break;
    }
    const complex y = 1.0 / p.z;
    if (!finite(y)) throw NumericOverflowError("non-finite admittance at the root");
    return Immittance::admittance(y);
}

Immittance input_impedance(const NetworkTree& net, double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw ValidationError("omega must be positive");
    const Port p = evaluate(*net, omega);
    switch (p.state) {
        case Port::State::open:
            throw SingularityError("open circuit seen from the observation node", "root");
        case Port::State::shorted:
            return Immittance::impedance({});
        case Port::State::finite:
            break;
    }
    return Immittance::impedance(p.z);
}

std::string to_string(const Element& e) {
    return std::visit(overloaded{
                          [](const Resistor& r) { return "(R " + fmt(r.r) + ")"; },
                          [](const Capacitor& c) { return "(C " + fmt(c.c) + ")"; },
                          [](const Inductor& l) { return "(L " + fmt(l.l) + ")"; },
                          [](const ParallelRlc& p) {
                              return "(PRLC " + (p.r ? fmt(*p.r) : std::string("inf")) + " " +
                                     fmt(p.l) + " " + fmt(p.c) + ")";
                          },
                          [](const TLine& t) {
                              return "(TL " + fmt(t.z0) + " " + fmt(t.length) + " " + fmt(t.vp) +
                                     " " + fmt(t.alpha) + ")";
                          },
                      },
                      e);
}

std::string to_string(const NetworkTree& net) {
    return std::visit(overloaded{
                          [](const TermOpen&) { return std::string("(open)"); },
                          [](const TermShort&) { return std::string("(short)"); },
                          [](const TermResistor& t) { return "(load " + fmt(t.r) + ")"; },
                          [](const Series& s) {
                              return "(series " + to_string(s.element) + " " + to_string(s.rest) +
                                     ")";
                          },
                          [](const Shunt& s) {
                              return "(shunt " + to_string(s.branch) + " " + to_string(s.rest) +
                                     ")";
                          },
                          [](const Line& l) {
                              return "(line " + to_string(Element{l.line}) + " " +
                                     to_string(l.rest) + ")";
                          },
                      },
                      net->body);
}

}  // namespace purcellsim
