#include "ringsynth/spec.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ringsynth {

const char* to_string(Quantifier q) {
    switch (q) {
    case Quantifier::forall_i: return "forall i";
    case Quantifier::forall_i_ne0: return "forall i!=0";
    case Quantifier::forall_ij: return "forall i,j";
    case Quantifier::zero_only: return "zero";
    case Quantifier::unquantified: return "";
    }
    return "";
}

const char* to_string(DirectClass c) {
    switch (c) {
    case DirectClass::alpha: return "alpha";
    case DirectClass::beta: return "beta";
    case DirectClass::general: return "general";
    }
    return "";
}

TemporalClass QuantifiedProperty::temporal_class() const {
    if (!has_temporal(body)) return TemporalClass::initial;
    if (body.op() == Op::globally && is_propositional(body.lhs())) return TemporalClass::invariant_G;
    return TemporalClass::general;
}

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

void push_unique(std::vector<std::string>& v, const std::string& s) {
    if (!contains(v, s)) v.push_back(s);
}

}  // namespace

bool Signals::is_local(const std::string& name) const {
    return contains(local_inputs, name) || contains(local_outputs, name) || name == kTok || name == kSend ||
           name == kRcv || name == kSch;
}

bool Signals::is_global(const std::string& name) const {
    return contains(global_inputs, name) || contains(global_outputs, name);
}

bool Signals::is_declared(const std::string& name) const { return is_local(name) || is_global(name); }

SignalKind Signals::kind(const std::string& name) const {
    if (name == kTok || name == kSend) return SignalKind::output;
    if (name == kRcv || name == kSch) return SignalKind::input;
    if (contains(local_inputs, name) || contains(global_inputs, name)) return SignalKind::input;
    if (contains(local_outputs, name) || contains(global_outputs, name)) return SignalKind::output;
    return SignalKind::unknown;
}

std::set<std::string> Signals::all() const {
    std::set<std::string> out{kTok, kSend, kRcv, kSch};
    for (const auto* v : {&local_inputs, &global_inputs, &local_outputs, &global_outputs})
        out.insert(v->begin(), v->end());
    return out;
}

void Signals::add_reserved() {
    push_unique(local_outputs, kTok);
    push_unique(local_outputs, kSend);
    push_unique(local_inputs, kRcv);
}

SignalKind atom_kind(const SignalRef& ref, const Signals& signals) {
    if (ref.name == kSend && ref.index.kind == IndexTerm::Kind::var_i_minus_1) return SignalKind::input;
    return signals.kind(ref.name);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool allowed_index(Quantifier q, const IndexTerm& idx) {
    using K = IndexTerm::Kind;
    switch (idx.kind) {
    case K::none: return true;
    case K::literal: return true;
    case K::var_i: return q == Quantifier::forall_i || q == Quantifier::forall_i_ne0 || q == Quantifier::forall_ij;
    case K::var_i_minus_1: return q != Quantifier::unquantified;
    case K::var_j: return q == Quantifier::forall_ij;
    }
    return false;
}

void validate_property(const QuantifiedProperty& p, const Signals& s, const char* section) {
    const std::string where = std::string(section) + " '" + (p.label.empty() ? p.body.to_string() : p.label) + "'";
    for (const auto& a : atoms_of(p.body)) {
        if (!s.is_declared(a.name)) throw Error(where + ": undeclared signal '" + a.name + "'");
        if (a.index_equality) {
            if (!s.is_global(a.name)) throw Error(where + ": '" + atom_key(a) + "' requires a global signal");
        } else if (s.is_global(a.name) && !a.index.is_none()) {
            throw Error(where + ": global signal '" + a.name + "' cannot carry an index");
        } else if (s.is_local(a.name) && a.index.is_none()) {
            throw Error(where + ": local signal '" + a.name + "' needs an index");
        }
        if (!allowed_index(p.quantifier, a.index))
            throw Error(where + ": index '" + atom_key(a) + "' is not bound by quantifier '" + to_string(p.quantifier) + "'");
        if (p.quantifier == Quantifier::forall_ij && s.kind(a.name) == SignalKind::input)
            throw Error(where + ": 2-indexed property mentions input '" + a.name + "'");
    }
    if (p.quantifier == Quantifier::forall_ij && contains_op(p.body, Op::next))
        throw Error(where + ": 2-indexed property must not use X");
}

}  // namespace

void validate(const IndexedSpec& spec) {
    const auto& s = spec.signals;
    for (const char* r : {kTok, kSend})
        if (!contains(s.local_outputs, r)) throw Error(std::string("signal ") + r + " must be a local output");
    if (!contains(s.local_inputs, kRcv)) throw Error("signal RCV must be a local input");
    std::set<std::string> seen;
    for (const auto* v : {&s.local_inputs, &s.global_inputs, &s.local_outputs, &s.global_outputs})
        for (const auto& n : *v)
            if (!seen.insert(n).second) throw Error("signal '" + n + "' declared twice");
    for (const auto& p : spec.assumptions) validate_property(p, s, "assumption");
    for (const auto& p : spec.guarantees) validate_property(p, s, "guarantee");
}

// ---------------------------------------------------------------------------
// Spec files

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) {
        // tolerate comma separated lists
        std::stringstream ws(w);
        for (std::string part; std::getline(ws, part, ',');)
            if (!part.empty()) out.push_back(part);
    }
    return out;
}

struct Prefix {
    Quantifier quantifier = Quantifier::unquantified;
    bool init = false;
    std::string label;
};

Prefix parse_prefix(const std::string& raw, int line) {
    Prefix out;
    std::string s = trim(raw);
    const auto lb = s.find('[');
    if (lb != std::string::npos) {
        const auto rb = s.find(']', lb);
        if (rb == std::string::npos) throw ParseError("unterminated label", line, static_cast<int>(lb) + 1);
        out.label = trim(s.substr(lb + 1, rb - lb - 1));
        s = trim(s.substr(0, lb) + s.substr(rb + 1));
    }
    std::string compact;
    for (char c : s)
        if (c != ' ' && c != '\t') compact += c;
    if (compact == "foralli") out.quantifier = Quantifier::forall_i;
    else if (compact == "foralli!=0") out.quantifier = Quantifier::forall_i_ne0;
    else if (compact == "foralli,j") out.quantifier = Quantifier::forall_ij;
    else if (compact == "zero") out.quantifier = Quantifier::zero_only;
    else if (compact == "init") {
        out.quantifier = Quantifier::forall_i;
        out.init = true;
    } else if (compact.empty()) out.quantifier = Quantifier::unquantified;
    else throw ParseError("unknown property prefix '" + s + "'", line, 1);
    return out;
}

}  // namespace

IndexedSpec parse_spec(const std::string& text, const std::string& origin) {
    IndexedSpec spec;
    enum class Section { none, signals, assumptions, guarantees } section = Section::none;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    struct Pending {
        std::string prefix;
        std::string expr;
        int line;
        int col;
        bool assumption;
    };
    std::vector<Pending> pending;
    try {
        while (std::getline(in, raw)) {
            ++line_no;
            std::string line = raw;
            if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[' && line.back() == ']') {
                const std::string name = trim(line.substr(1, line.size() - 2));
                if (name == "SIGNALS") section = Section::signals;
                else if (name == "ASSUMPTIONS") section = Section::assumptions;
                else if (name == "GUARANTEES") section = Section::guarantees;
                else throw ParseError("unknown section [" + name + "]", line_no, 1);
                continue;
            }
            const auto colon = line.find(':');
            if (section == Section::none) throw ParseError("content outside of a section", line_no, 1);
            if (section == Section::signals) {
                if (colon == std::string::npos) throw ParseError("expected 'key: names'", line_no, 1);
                const std::string key = trim(line.substr(0, colon));
                const auto names = split_ws(line.substr(colon + 1));
                std::vector<std::string>* dst = nullptr;
                if (key == "local_in") dst = &spec.signals.local_inputs;
                else if (key == "global_in") dst = &spec.signals.global_inputs;
                else if (key == "local_out") dst = &spec.signals.local_outputs;
                else if (key == "global_out") dst = &spec.signals.global_outputs;
                else throw ParseError("unknown signal key '" + key + "'", line_no, 1);
                for (const auto& n : names) dst->push_back(n);
                continue;
            }
            Pending p;
            p.line = line_no;
            p.assumption = section == Section::assumptions;
            // The offset of the expression inside the raw line keeps columns meaningful.
            const auto body_start = raw.find(colon == std::string::npos ? line : line.substr(colon + 1));
            if (colon == std::string::npos) {
                p.expr = line;
            } else {
                p.prefix = line.substr(0, colon);
                p.expr = line.substr(colon + 1);
            }
            p.col = body_start == std::string::npos ? 0 : static_cast<int>(body_start);
            pending.push_back(std::move(p));
        }
        spec.signals.add_reserved();
        ParseContext ctx;
        ctx.declared = spec.signals.all();
        for (const auto& p : pending) {
            Prefix pre = parse_prefix(p.prefix, p.line);
            ctx.line = p.line;
            ctx.column_offset = p.col;
            QuantifiedProperty prop{pre.quantifier, parse_ltl(p.expr, ctx), pre.label};
            if (pre.init && has_temporal(prop.body))
                throw ParseError("init property must not contain temporal operators", p.line, 1);
            (p.assumption ? spec.assumptions : spec.guarantees).push_back(std::move(prop));
        }
        validate(spec);
    } catch (const ParseError& e) {
        throw ParseError(origin + ": " + e.what(), e.line(), e.column());
    } catch (const Error& e) {
        throw Error(origin + ": " + e.what());
    }
    return spec;
}

IndexedSpec load_spec(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open spec file " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str(), file.string());
}

std::string format_property(const QuantifiedProperty& p) {
    std::string prefix = to_string(p.quantifier);
    if (!p.label.empty()) prefix += (prefix.empty() ? "[" : " [") + p.label + "]";
    if (prefix.empty()) return p.body.to_string();
    return prefix + ": " + p.body.to_string();
}

std::string format_spec(const IndexedSpec& spec) {
    std::ostringstream os;
    auto list = [&](const char* key, const std::vector<std::string>& v) {
        if (v.empty()) return;
        os << key << ":";
        for (const auto& n : v) os << ' ' << n;
        os << '\n';
    };
    os << "[SIGNALS]\n";
    list("local_in", spec.signals.local_inputs);
    list("global_in", spec.signals.global_inputs);
    list("local_out", spec.signals.local_outputs);
    list("global_out", spec.signals.global_outputs);
    os << "\n[ASSUMPTIONS]\n";
    for (const auto& p : spec.assumptions) os << format_property(p) << '\n';
    os << "\n[GUARANTEES]\n";
    for (const auto& p : spec.guarantees) os << format_property(p) << '\n';
    return os.str();
}

void save_spec(const IndexedSpec& spec, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw Error("cannot write spec file " + file.string());
    out << format_spec(spec);
}

// ---------------------------------------------------------------------------
// Direct-encoding classification

namespace {

bool only_kind(const Formula& f, SignalKind k, const std::function<SignalKind(const SignalRef&)>& kind) {
    for (const auto& a : atoms_of(f))
        if (kind(a) != k) return false;
    return true;
}

// Boolean structure whose only temporal operator is X applied to boolean
// formulas over outputs.
bool beta_body(const Formula& f, const std::function<SignalKind(const SignalRef&)>& kind) {
    switch (f.op()) {
    case Op::true_:
    case Op::false_: return true;
    case Op::atom: return kind(f.signal()) != SignalKind::unknown;
    case Op::next: return is_propositional(f.lhs()) && only_kind(f.lhs(), SignalKind::output, kind);
    case Op::not_: return beta_body(f.lhs(), kind);
    case Op::and_:
    case Op::or_:
    case Op::implies:
    case Op::iff: return beta_body(f.lhs(), kind) && beta_body(f.rhs(), kind);
    default: return false;
    }
}

}  // namespace

DirectClass classify_direct(const Formula& body, const std::function<SignalKind(const SignalRef&)>& kind) {
    if (body.op() != Op::globally) return DirectClass::general;
    const Formula& inner = body.lhs();
    if (is_propositional(inner) && only_kind(inner, SignalKind::input, kind)) return DirectClass::alpha;
    if (beta_body(inner, kind)) return DirectClass::beta;
    return DirectClass::general;
}

DirectClass classify_direct(const QuantifiedProperty& p, const Signals& signals) {
    return classify_direct(p.body, [&](const SignalRef& r) { return atom_kind(r, signals); });
}

// ---------------------------------------------------------------------------
// Built-in corpus

namespace {

const char* kSimpleArbiter = R"(# Single-resource arbiter: every request is eventually granted,
# grants only while holding the token.
[SIGNALS]
local_in: r
local_out: g

[ASSUMPTIONS]

[GUARANTEES]
forall i [S1]: G(g(i) -> TOK(i))
forall i [S2]: G(r(i) -> F g(i))
)";

const char* kAmbaSignals = R"([SIGNALS]
local_in: HBUSREQ HLOCK
global_in: HREADY HBURST0 HBURST1
local_out: HGRANT HMASTER HMASTERLOCK START DECIDE LOCKED
)";

std::string amba_non0_text(int burst_a, int burst_b) {
    std::ostringstream os;
    os << "# AMBA AHB arbiter component for masters i != 0.\n"
       << "# HBURST is encoded by HBURST1 HBURST0: SINGLE=00, BURST4=01, INCR=10.\n"
       << kAmbaSignals << R"(
[ASSUMPTIONS]
forall i [A1]: G((HMASTERLOCK(i) && HBURST==INCR && HMASTER(i)) -> X F !HBUSREQ(i))
forall i [A2]: G F HREADY
forall i [A3]: G(HLOCK(i) -> HBUSREQ(i))
forall i [A4]: !HBUSREQ(i) && !HLOCK(i) && !HREADY
forall i [A5]: G F TOK(i)

[GUARANTEES]
forall i [G1]: G(!HREADY -> X !START(i))
forall i [G2]: G((HMASTERLOCK(i) && HBURST==INCR && START(i)) -> X (!START(i) W (!START(i) && HBUSREQ(i))))
)"
       << "forall i [G3.1]: G((HMASTERLOCK(i) && HBURST==BURST4 && START(i) && HREADY) -> X (!START(i) W["
       << burst_a << "] (!START(i) && HREADY)))\n"
       << "forall i [G3.2]: G((HMASTERLOCK(i) && HBURST==BURST4 && START(i) && !HREADY) -> X (!START(i) W["
       << burst_b << "] (!START(i) && HREADY)))\n"
       << R"(forall i [G4]: G(HREADY -> (HGRANT(i) <-> X HMASTER(i)))
forall i [G5]: G(HREADY -> (LOCKED(i) <-> X HMASTERLOCK(i)))
forall i [G6]: G(X !START(i) -> ((HMASTER(i) <-> X HMASTER(i)) && (HMASTERLOCK(i) <-> X HMASTERLOCK(i))))
forall i [G7]: G((DECIDE(i) && X HGRANT(i)) -> (HLOCK(i) <-> X LOCKED(i)))
forall i [G8]: G(!DECIDE(i) -> ((HGRANT(i) <-> X HGRANT(i)) && (LOCKED(i) <-> X LOCKED(i))))
forall i [G9]: G(HBUSREQ(i) -> F (!HBUSREQ(i) || HMASTER(i)))
forall i!=0 [G10.1]: G(!HGRANT(i) -> (!HGRANT(i) W HBUSREQ(i)))
forall i!=0 [G11.1]: !HGRANT(i) && !HMASTERLOCK(i)
forall i [G12]: G(HGRANT(i) -> TOK(i))
)";
    return os.str();
}

std::string amba_zero_text(int burst_a, int burst_b) {
    std::ostringstream os;
    os << "# AMBA AHB arbiter component for master 0.\n"
       << "# HBURST is encoded by HBURST1 HBURST0: SINGLE=00, BURST4=01, INCR=10.\n"
       << R"([SIGNALS]
local_in: HBUSREQ HLOCK
global_in: HREADY HBURST0 HBURST1 NO_REQ
local_out: HGRANT HMASTER HMASTERLOCK START DECIDE LOCKED

[ASSUMPTIONS]
zero [A1]: G((HMASTERLOCK(0) && HBURST==INCR && HMASTER(0)) -> X F !HBUSREQ(0))
zero [A2]: G F HREADY
zero [A3]: G(HLOCK(0) -> HBUSREQ(0))
zero [A4]: !HBUSREQ(0) && !HLOCK(0) && !HREADY
zero [A5]: G F TOK(0)
zero [A6]: G(HBUSREQ(0) -> !NO_REQ)

[GUARANTEES]
zero [G1]: G(!HREADY -> X !START(0))
zero [G2]: G((HMASTERLOCK(0) && HBURST==INCR && START(0)) -> X (!START(0) W (!START(0) && HBUSREQ(0))))
)"
       << "zero [G3.1]: G((HMASTERLOCK(0) && HBURST==BURST4 && START(0) && HREADY) -> X (!START(0) W["
       << burst_a << "] (!START(0) && HREADY)))\n"
       << "zero [G3.2]: G((HMASTERLOCK(0) && HBURST==BURST4 && START(0) && !HREADY) -> X (!START(0) W["
       << burst_b << "] (!START(0) && HREADY)))\n"
       << R"(zero [G4]: G(HREADY -> (HGRANT(0) <-> X HMASTER(0)))
zero [G5]: G(HREADY -> (LOCKED(0) <-> X HMASTERLOCK(0)))
zero [G6]: G(X !START(0) -> ((HMASTER(0) <-> X HMASTER(0)) && (HMASTERLOCK(0) <-> X HMASTERLOCK(0))))
zero [G7]: G((DECIDE(0) && X HGRANT(0)) -> (HLOCK(0) <-> X LOCKED(0)))
zero [G8]: G(!DECIDE(0) -> ((HGRANT(0) <-> X HGRANT(0)) && (LOCKED(0) <-> X LOCKED(0))))
zero [G9]: G(HBUSREQ(0) -> F (!HBUSREQ(0) || HMASTER(0)))
zero [G10.2]: G((NO_REQ && !TOK(0) && X TOK(0)) -> X HGRANT(0))
zero [G11.2]: TOK(0) -> HGRANT(0) && HMASTER(0) && !HMASTERLOCK(0)
zero [G12]: G(HGRANT(0) -> TOK(0))
)";
    return os.str();
}

}  // namespace

std::vector<std::string> builtin_corpus_names() {
    return {"amba_non0", "amba_zero", "amba_zero_reduced_burst", "simple_arbiter"};
}

std::string builtin_corpus_text(const std::string& name) {
    if (name == "simple_arbiter") return kSimpleArbiter;
    if (name == "amba_non0") return amba_non0_text(3, 4);
    if (name == "amba_zero") return amba_zero_text(3, 4);
    if (name == "amba_zero_reduced_burst") return amba_zero_text(2, 3);
    throw Error("unknown built-in specification '" + name + "'");
}

IndexedSpec builtin_corpus(const std::string& name) { return parse_spec(builtin_corpus_text(name), name); }

}  // namespace ringsynth
