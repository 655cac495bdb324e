#include "purcellsim/cli/netlist.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace purcellsim::cli {

namespace {

struct Token {
    std::string text;
    int line;
    int column;
    bool first_on_line;
};

enum class Quantity { frequency, capacitance, inductance, length, resistance, velocity, attenuation };

struct UnitInfo {
    Quantity quantity;
    double scale;
};

const std::map<std::string, UnitInfo>& unit_table() {
    static const std::map<std::string, UnitInfo> t = {
        {"GHz", {Quantity::frequency, 1e9}},     {"fF", {Quantity::capacitance, 1e-15}},
        {"nH", {Quantity::inductance, 1e-9}},    {"mm", {Quantity::length, 1e-3}},
        {"ohm", {Quantity::resistance, 1.0}},    {"\xCE\xA9", {Quantity::resistance, 1.0}},
        {"m/s", {Quantity::velocity, 1.0}},      {"Np/m", {Quantity::attenuation, 1.0}},
    };
    return t;
}

const char* quantity_unit(Quantity q) {
    switch (q) {
        case Quantity::frequency: return "GHz";
        case Quantity::capacitance: return "fF";
        case Quantity::inductance: return "nH";
        case Quantity::length: return "mm";
        case Quantity::resistance: return "ohm";
        case Quantity::velocity: return "m/s";
        case Quantity::attenuation: return "Np/m";
    }
    return "?";
}

// Parameter names accepted by each model.
const std::map<std::string, Quantity>& params_for(ModelKind m) {
    static const std::map<std::string, Quantity> lumped = {
        {"cq", Quantity::capacitance}, {"cg", Quantity::capacitance},
        {"lr", Quantity::inductance},  {"cr", Quantity::capacitance},
        {"ckappa", Quantity::capacitance}, {"rload", Quantity::resistance},
    };
    static const std::map<std::string, Quantity> tl = {
        {"cq", Quantity::capacitance},    {"cg", Quantity::capacitance},
        {"ckappa", Quantity::capacitance}, {"rload", Quantity::resistance},
        {"z0", Quantity::resistance},     {"length", Quantity::length},
        {"vp", Quantity::velocity},       {"alpha", Quantity::attenuation},
    };
    static const std::map<std::string, Quantity> custom = {
        {"cq", Quantity::capacitance}, {"f1", Quantity::frequency},
    };
    switch (m) {
        case ModelKind::single_mode:
        case ModelKind::multi_mode: return lumped;
        case ModelKind::tline: return tl;
        case ModelKind::custom_tree: return custom;
    }
    return custom;
}

std::vector<Token> tokenize(std::istream& in) {
    std::vector<Token> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        bool first = true;
        std::size_t i = 0;
        while (i < line.size()) {
            const char ch = line[i];
            if (ch == '#') break;
            if (ch == ' ' || ch == '\t' || ch == '\r') {
                ++i;
                continue;
            }
            const int col = static_cast<int>(i) + 1;
            if (ch == '(' || ch == ')') {
                out.push_back({std::string(1, ch), line_no, col, first});
                ++i;
            } else {
                std::size_t j = i;
                while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' &&
                       line[j] != '(' && line[j] != ')' && line[j] != '#') {
                    ++j;
                }
                out.push_back({line.substr(i, j - i), line_no, col, first});
                i = j;
            }
            first = false;
        }
    }
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string source)
        : toks_(std::move(tokens)), source_(std::move(source)) {}

    NetlistDocument run();

private:
    [[noreturn]] void fail(const Token& t, const std::string& what) const {
        throw NetlistError(source_, t.line, t.column, what);
    }
    [[noreturn]] void fail_eof(const std::string& what) const {
        const int line = toks_.empty() ? 1 : toks_.back().line;
        throw NetlistError(source_, line, 1, what);
    }

    bool at_end() const { return pos_ >= toks_.size(); }
    const Token& peek() const {
        if (at_end()) fail_eof("unexpected end of input");
        return toks_[pos_];
    }
    const Token& next() {
        const Token& t = peek();
        ++pos_;
        return t;
    }
    // Next token on the same line as the statement keyword.
    const Token& arg(const Token& keyword, const char* what) {
        if (at_end() || toks_[pos_].first_on_line) {
            fail(keyword, std::string("missing ") + what);
        }
        return next();
    }
    void end_of_statement(const Token& keyword) {
        if (!at_end() && !toks_[pos_].first_on_line) {
            fail(toks_[pos_], "unexpected token '" + toks_[pos_].text + "' after " + keyword.text);
        }
    }

    double number(const Token& t) const {
        char* end = nullptr;
        const double v = std::strtod(t.text.c_str(), &end);
        if (t.text.empty() || end != t.text.c_str() + t.text.size() || !std::isfinite(v)) {
            fail(t, "expected a number, found '" + t.text + "'");
        }
        return v;
    }
    long integer(const Token& t) const {
        const double v = number(t);
        if (v != std::floor(v) || std::abs(v) > 1e9) fail(t, "expected an integer");
        return static_cast<long>(v);
    }
    // Value followed by its unit; returns SI and checks the quantity.
    double quantity(const Token& value, const Token& unit, Quantity want) const {
        const double v = number(value);
        const auto it = unit_table().find(unit.text);
        if (it == unit_table().end()) fail(unit, "unknown unit '" + unit.text + "'");
        if (it->second.quantity != want) {
            fail(unit, "unit '" + unit.text + "' does not fit; expected " + quantity_unit(want));
        }
        return v * it->second.scale;
    }

    void expect(const std::string& text) {
        const Token& t = next();
        if (t.text != text) fail(t, "expected '" + text + "', found '" + t.text + "'");
    }

    // Value/unit pairs inside a tree form until the next paren.
    std::map<Quantity, double> unit_pairs(const Token& head) {
        std::map<Quantity, double> out;
        while (!at_end() && peek().text != "(" && peek().text != ")") {
            const Token& v = next();
            const Token& u = next();
            if (u.text == "(" || u.text == ")") fail(u, "value '" + v.text + "' has no unit");
            const auto it = unit_table().find(u.text);
            if (it == unit_table().end()) fail(u, "unknown unit '" + u.text + "'");
            if (out.count(it->second.quantity)) fail(u, "repeated " + u.text + " in " + head.text);
            out[it->second.quantity] = number(v) * it->second.scale;
        }
        return out;
    }
    void only(const Token& head, const std::map<Quantity, double>& got, std::set<Quantity> allowed) {
        for (const auto& [q, v] : got) {
            (void)v;
            if (!allowed.count(q)) {
                fail(head, std::string("unit ") + quantity_unit(q) + " not allowed in " + head.text);
            }
        }
    }
    double need(const Token& head, const std::map<Quantity, double>& got, Quantity q) {
        const auto it = got.find(q);
        if (it == got.end()) fail(head, std::string(head.text) + " needs a value in " + quantity_unit(q));
        return it->second;
    }
    TLine tline_from(const Token& head, const std::map<Quantity, double>& got) {
        only(head, got, {Quantity::resistance, Quantity::length, Quantity::velocity,
                         Quantity::attenuation});
        TLine l{need(head, got, Quantity::resistance), need(head, got, Quantity::length)};
        if (got.count(Quantity::velocity)) l.vp = got.at(Quantity::velocity);
        if (got.count(Quantity::attenuation)) l.alpha = got.at(Quantity::attenuation);
        return l;
    }

    Element element();
    NetworkTree tree();

    void statement();
    void resolve();

    std::vector<Token> toks_;
    std::string source_;
    std::size_t pos_ = 0;

    std::optional<Token> model_tok_;
    ModelKind model_ = ModelKind::single_mode;
    bool defaults_ = false;
    std::map<std::string, double> params_;
    std::optional<SweepSpec> sweep_;
    std::optional<Token> positions_tok_;
    std::vector<double> positions_;
    std::optional<Token> modes_tok_;
    int n_modes_ = 0;
    std::map<int, std::pair<Token, double>> mode_freq_;
    std::map<int, std::pair<Token, double>> mode_loss_;
    NetworkTree tree_;
    std::optional<Token> tree_tok_;
    std::set<std::string> seen_;
    NetlistDocument doc_;
};

Element Parser::element() {
    expect("(");
    const Token& head = next();
    Element e;
    const auto got = unit_pairs(head);
    if (head.text == "C") {
        only(head, got, {Quantity::capacitance});
        e = Capacitor{need(head, got, Quantity::capacitance)};
    } else if (head.text == "L") {
        only(head, got, {Quantity::inductance});
        e = Inductor{need(head, got, Quantity::inductance)};
    } else if (head.text == "R") {
        only(head, got, {Quantity::resistance});
        e = Resistor{need(head, got, Quantity::resistance)};
    } else if (head.text == "rlc") {
        only(head, got, {Quantity::resistance, Quantity::inductance, Quantity::capacitance});
        ParallelRlc p{std::nullopt, need(head, got, Quantity::inductance),
                      need(head, got, Quantity::capacitance)};
        if (got.count(Quantity::resistance)) p.r = got.at(Quantity::resistance);
        e = p;
    } else if (head.text == "tl") {
        e = tline_from(head, got);
    } else {
        fail(head, "unknown element '" + head.text + "'");
    }
    try {
        validate(e);
    } catch (const ValidationError& err) {
        fail(head, err.what());
    }
    expect(")");
    return e;
}

NetworkTree Parser::tree() {
    expect("(");
    const Token& head = next();
    NetworkTree out;
    if (head.text == "open") {
        out = open_end();
    } else if (head.text == "short") {
        out = short_end();
    } else if (head.text == "load") {
        const auto got = unit_pairs(head);
        only(head, got, {Quantity::resistance});
        const double r = need(head, got, Quantity::resistance);
        if (!(r > 0.0)) fail(head, "load resistance must be positive");
        out = resistor_end(r);
    } else if (head.text == "series") {
        Element e = element();
        out = series(std::move(e), tree());
    } else if (head.text == "shunt") {
        NetworkTree branch = tree();
        out = shunt(std::move(branch), tree());
    } else if (head.text == "line") {
        const TLine l = tline_from(head, unit_pairs(head));
        try {
            validate(Element{l});
        } catch (const ValidationError& err) {
            fail(head, err.what());
        }
        out = line(l, tree());
    } else {
        fail(head, "unknown tree form '" + head.text + "'");
    }
    expect(")");
    return out;
}

void Parser::statement() {
    const Token& kw = next();
    if (!kw.first_on_line) fail(kw, "statement must start a line");
    const std::string& k = kw.text;
    const bool repeatable = k == "param" || k == "mode_freq" || k == "mode_loss";
    if (!repeatable && !seen_.insert(k).second) fail(kw, "duplicate '" + k + "' statement");

    if (k == "model") {
        const Token& v = arg(kw, "model name");
        if (v.text == "singleMode") model_ = ModelKind::single_mode;
        else if (v.text == "multiMode") model_ = ModelKind::multi_mode;
        else if (v.text == "tline") model_ = ModelKind::tline;
        else if (v.text == "customTree") model_ = ModelKind::custom_tree;
        else fail(v, "unknown model '" + v.text + "'");
        if (!params_.empty() || sweep_ || tree_) fail(kw, "'model' must come first");
        model_tok_ = kw;
    } else if (k == "defaults") {
        const Token& v = arg(kw, "defaults name");
        if (v.text != "design") fail(v, "unknown defaults '" + v.text + "'");
        defaults_ = true;
    } else if (k == "param") {
        if (!model_tok_) fail(kw, "'param' before 'model'");
        const Token& name = arg(kw, "parameter name");
        const auto& allowed = params_for(model_);
        const auto it = allowed.find(name.text);
        if (it == allowed.end()) {
            fail(name, "unknown parameter '" + name.text + "' for model " + to_string(model_));
        }
        const Token& value = arg(kw, "value");
        if (at_end() || toks_[pos_].first_on_line) {
            fail(value, "missing unit for '" + name.text + "'; expected " +
                            quantity_unit(it->second));
        }
        const Token& unit = next();
        if (params_.count(name.text)) fail(name, "parameter '" + name.text + "' set twice");
        params_[name.text] = quantity(value, unit, it->second);
    } else if (k == "sweep") {
        const Token& a = arg(kw, "start frequency");
        const Token& au = arg(kw, "start unit");
        const Token& b = arg(kw, "stop frequency");
        const Token& bu = arg(kw, "stop unit");
        const Token& n = arg(kw, "point count");
        SweepSpec s{quantity(a, au, Quantity::frequency), quantity(b, bu, Quantity::frequency),
                    static_cast<int>(integer(n))};
        if (!at_end() && !toks_[pos_].first_on_line) {
            const Token& sp = next();
            if (sp.text == "linear") s.spacing = SweepSpec::Spacing::linear;
            else if (sp.text == "log") s.spacing = SweepSpec::Spacing::log;
            else fail(sp, "spacing must be linear or log");
        }
        if (!(s.f_start > 0.0) || !(s.f_stop > s.f_start)) fail(a, "sweep needs 0 < start < stop");
        if (s.n_points < 2) fail(n, "sweep needs at least two points");
        sweep_ = s;
    } else if (k == "positions") {
        positions_tok_ = kw;
        arg(kw, "at least one position");
        --pos_;
        while (!at_end() && !toks_[pos_].first_on_line) {
            const Token& t = next();
            const double f = number(t);
            if (!(f >= 0.0 && f <= 1.0)) fail(t, "position fraction must lie in [0, 1]");
            positions_.push_back(f);
        }
    } else if (k == "modes") {
        const Token& n = arg(kw, "mode count");
        const long v = integer(n);
        if (v < 1 || v > 1000) fail(n, "mode count must lie in [1, 1000]");
        n_modes_ = static_cast<int>(v);
        modes_tok_ = kw;
    } else if (k == "mode_freq" || k == "mode_loss") {
        const Token& idx = arg(kw, "mode index");
        const long i = integer(idx);
        if (i < 1) fail(idx, "mode index is 1-based");
        const Token& v = arg(kw, "value");
        const Token& u = arg(kw, "unit");
        auto& target = k == "mode_freq" ? mode_freq_ : mode_loss_;
        const double si =
            quantity(v, u, k == "mode_freq" ? Quantity::frequency : Quantity::resistance);
        if (!(si > 0.0)) fail(v, k + " must be positive");
        if (!target.emplace(static_cast<int>(i), std::make_pair(idx, si)).second) {
            fail(idx, "mode " + idx.text + " given twice");
        }
    } else if (k == "tree") {
        tree_tok_ = kw;
        tree_ = tree();
        return;
    } else {
        fail(kw, "unknown statement '" + k + "'");
    }
    end_of_statement(kw);
}

void Parser::resolve() {
    if (!model_tok_) fail_eof("missing 'model' statement");
    const Token& mt = *model_tok_;
    auto reject = [&](bool present, const std::optional<Token>& tok, const char* what) {
        if (present) fail(tok ? *tok : mt, std::string(what) + " is not valid for model " + to_string(model_));
    };
    auto get = [&](const std::string& name, double fallback, bool have_fallback) {
        const auto it = params_.find(name);
        if (it != params_.end()) return it->second;
        if (!have_fallback) fail(mt, "missing parameter '" + name + "'");
        return fallback;
    };

    if (model_ != ModelKind::multi_mode) {
        reject(modes_tok_.has_value(), modes_tok_, "'modes'");
        if (!mode_freq_.empty()) fail(mode_freq_.begin()->second.first, "'mode_freq' needs multiMode");
        if (!mode_loss_.empty()) fail(mode_loss_.begin()->second.first, "'mode_loss' needs multiMode");
    }
    if (model_ != ModelKind::tline) reject(positions_tok_.has_value(), positions_tok_, "'positions'");
    if (model_ != ModelKind::custom_tree) reject(tree_tok_.has_value(), tree_tok_, "'tree'");
    if (model_ == ModelKind::custom_tree && defaults_) fail(mt, "customTree has no design defaults");

    NetlistDocument& d = doc_;
    d.model = model_;
    d.sweep = sweep_;
    d.positions_frac = positions_;
    d.source = source_;

    try {
        if (model_ == ModelKind::single_mode || model_ == ModelKind::multi_mode) {
            const SingleModeParams def = default_single_mode();
            SingleModeParams p;
            p.cq = get("cq", def.cq, defaults_);
            p.cg = get("cg", def.cg, defaults_);
            p.lr = get("lr", def.lr, defaults_);
            p.cr = get("cr", def.cr, defaults_);
            p.ckappa = get("ckappa", def.ckappa, defaults_);
            p.rload = get("rload", def.rload, true);
            validate(p);
            if (model_ == ModelKind::single_mode) {
                d.single = p;
            } else {
                MultiModeParams m;
                m.base = p;
                m.n_modes = n_modes_ > 0 ? n_modes_ : 3;
                for (const auto& [i, entry] : mode_freq_) {
                    if (i > m.n_modes) fail(entry.first, "mode index beyond the mode count");
                }
                for (const auto& [i, entry] : mode_loss_) {
                    if (i > m.n_modes) fail(entry.first, "mode index beyond the mode count");
                }
                if (!mode_freq_.empty()) {
                    const auto harmonics = m.resolved_mode_frequencies();
                    m.mode_frequencies_hz = harmonics;
                    for (const auto& [i, entry] : mode_freq_) m.mode_frequencies_hz[i - 1] = entry.second;
                }
                if (!mode_loss_.empty()) {
                    m.per_mode_loss.assign(m.n_modes, std::nullopt);
                    for (const auto& [i, entry] : mode_loss_) m.per_mode_loss[i - 1] = entry.second;
                }
                validate(m);
                d.multi = m;
            }
        } else if (model_ == ModelKind::tline) {
            const TLineModelParams def = default_tline_model(0.0);
            TLineModelParams p;
            p.cq = get("cq", def.cq, defaults_);
            p.cg = get("cg", def.cg, defaults_);
            p.ckappa = get("ckappa", def.ckappa, defaults_);
            p.rload = get("rload", def.rload, true);
            p.line.z0 = get("z0", def.line.z0, defaults_);
            p.line.length = get("length", def.line.length, defaults_);
            p.line.vp = get("vp", def.line.vp, true);
            p.line.alpha = get("alpha", 0.0, true);
            p.port_position = 0.0;
            validate(p);
            if (positions_.empty()) fail(mt, "tline needs a 'positions' statement");
            d.tline = p;
        } else {
            if (!tree_) fail(mt, "customTree needs a 'tree' statement");
            d.custom_tree = tree_;
            d.custom_cq = get("cq", 0.0, false);
            if (!(d.custom_cq > 0.0)) fail(mt, "cq must be positive");
            if (params_.count("f1")) d.custom_f1_hz = params_.at("f1");
            validate(tree_);
        }
    } catch (const NetlistError&) {
        throw;
    } catch (const ValidationError& e) {
        fail(mt, e.what());
    }
}

NetlistDocument Parser::run() {
    while (!at_end()) statement();
    resolve();
    return doc_;
}

}  // namespace

const char* to_string(ModelKind m) {
    switch (m) {
        case ModelKind::single_mode: return "singleMode";
        case ModelKind::multi_mode: return "multiMode";
        case ModelKind::tline: return "tline";
        case ModelKind::custom_tree: return "customTree";
    }
    return "?";
}

NetlistDocument parse_netlist(std::istream& in, const std::string& source) {
    return Parser(tokenize(in), source).run();
}

NetlistDocument parse_netlist_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open netlist " + path);
    return parse_netlist(in, path);
}

SweepSpec default_sweep() { return SweepSpec{1e9, 14e9, 2001, SweepSpec::Spacing::linear}; }

double qubit_capacitance(const NetlistDocument& doc) {
    switch (doc.model) {
        case ModelKind::single_mode: return doc.single->cq;
        case ModelKind::multi_mode: return doc.multi->base.cq;
        case ModelKind::tline: return doc.tline->cq;
        case ModelKind::custom_tree: return doc.custom_cq;
    }
    return 0.0;
}

std::optional<double> fundamental_hz(const NetlistDocument& doc) {
    switch (doc.model) {
        case ModelKind::single_mode: return doc.single->resonator_hz();
        case ModelKind::multi_mode: return doc.multi->resolved_mode_frequencies().front();
        case ModelKind::tline: return doc.tline->line.fundamental_hz();
        case ModelKind::custom_tree: return doc.custom_f1_hz;
    }
    return std::nullopt;
}

TLineModelParams tline_at(const NetlistDocument& doc, double position_frac) {
    if (!doc.tline) throw ValidationError("document is not a tline model");
    TLineModelParams p = *doc.tline;
    p.port_position = position_frac * p.line.length;
    return p;
}

NetworkTree build_network(const NetlistDocument& doc, std::optional<double> position_frac) {
    switch (doc.model) {
        case ModelKind::single_mode: return build_single_mode(*doc.single);
        case ModelKind::multi_mode: return build_multi_mode(*doc.multi);
        case ModelKind::tline:
            if (!position_frac) throw ValidationError("tline network needs a port position");
            return build_tline_model(tline_at(doc, *position_frac));
        case ModelKind::custom_tree: return doc.custom_tree;
    }
    return nullptr;
}

}  // namespace purcellsim::cli
