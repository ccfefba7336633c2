#include "ringsynth/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>

namespace ringsynth {

ParseError::ParseError(const std::string& msg, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

std::string atom_key(const SignalRef& ref) {
    std::string out = ref.name;
    if (ref.index_equality) {
        out += " == ";
        switch (ref.index.kind) {
        case IndexTerm::Kind::var_i: return out + "i";
        case IndexTerm::Kind::var_j: return out + "j";
        case IndexTerm::Kind::var_i_minus_1: return out + "i-1";
        case IndexTerm::Kind::literal: return out + std::to_string(ref.index.literal);
        case IndexTerm::Kind::none: break;
        }
        return out;
    }
    switch (ref.index.kind) {
    case IndexTerm::Kind::none: return out;
    case IndexTerm::Kind::var_i: return out + "(i)";
    case IndexTerm::Kind::var_j: return out + "(j)";
    case IndexTerm::Kind::var_i_minus_1: return out + "(i-1)";
    case IndexTerm::Kind::literal: return out + "(" + std::to_string(ref.index.literal) + ")";
    }
    return out;
}

std::string ground_name(const std::string& signal, int process) {
    return signal + "_" + std::to_string(process);
}

// ---------------------------------------------------------------------------
// Formula nodes

struct Formula::Node {
    Op op = Op::true_;
    SignalRef signal;
    int count = 0;
    Formula lhs;
    Formula rhs;
    Node() : lhs(nullptr), rhs(nullptr) {}
};

Formula::Formula() : Formula(tt()) {}

Formula Formula::make(Op op, Formula a, Formula b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return Formula(std::shared_ptr<const Node>(std::move(n)));
}

Formula Formula::tt() {
    static const Formula t = [] {
        auto n = std::make_shared<Node>();
        n->op = Op::true_;
        return Formula(std::shared_ptr<const Node>(std::move(n)));
    }();
    return t;
}

Formula Formula::ff() {
    static const Formula f = [] {
        auto n = std::make_shared<Node>();
        n->op = Op::false_;
        return Formula(std::shared_ptr<const Node>(std::move(n)));
    }();
    return f;
}

Formula Formula::atom(SignalRef ref) {
    auto n = std::make_shared<Node>();
    n->op = Op::atom;
    n->signal = std::move(ref);
    return Formula(std::shared_ptr<const Node>(std::move(n)));
}

Formula Formula::atom(std::string name, IndexTerm index) {
    return atom(SignalRef{std::move(name), index, false});
}

Formula Formula::neg(Formula f) { return make(Op::not_, std::move(f), Formula(nullptr)); }
Formula Formula::conj(Formula a, Formula b) { return make(Op::and_, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return make(Op::or_, std::move(a), std::move(b)); }
Formula Formula::implies(Formula a, Formula b) { return make(Op::implies, std::move(a), std::move(b)); }
Formula Formula::iff(Formula a, Formula b) { return make(Op::iff, std::move(a), std::move(b)); }
Formula Formula::X(Formula f) { return make(Op::next, std::move(f), Formula(nullptr)); }
Formula Formula::F(Formula f) { return make(Op::finally, std::move(f), Formula(nullptr)); }
Formula Formula::G(Formula f) { return make(Op::globally, std::move(f), Formula(nullptr)); }
Formula Formula::U(Formula a, Formula b) { return make(Op::until, std::move(a), std::move(b)); }
Formula Formula::W(Formula a, Formula b) { return make(Op::weak_until, std::move(a), std::move(b)); }

Formula Formula::Wk(int count, Formula a, Formula b) {
    if (count < 1) throw Error("W[k] requires k >= 1, got " + std::to_string(count));
    auto n = std::make_shared<Node>();
    n->op = Op::counted_weak_until;
    n->count = count;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return Formula(std::shared_ptr<const Node>(std::move(n)));
}

Formula Formula::conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return tt();
    Formula acc = fs.front();
    for (std::size_t k = 1; k < fs.size(); ++k) acc = conj(acc, fs[k]);
    return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return ff();
    Formula acc = fs.front();
    for (std::size_t k = 1; k < fs.size(); ++k) acc = disj(acc, fs[k]);
    return acc;
}

Op Formula::op() const { return node_->op; }
const SignalRef& Formula::signal() const { return node_->signal; }
int Formula::count() const { return node_->count; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }

bool Formula::is_unary() const {
    switch (op()) {
    case Op::not_:
    case Op::next:
    case Op::finally:
    case Op::globally: return true;
    default: return false;
    }
}

bool Formula::is_binary() const {
    switch (op()) {
    case Op::and_:
    case Op::or_:
    case Op::implies:
    case Op::iff:
    case Op::until:
    case Op::weak_until:
    case Op::counted_weak_until: return true;
    default: return false;
    }
}

bool Formula::is_temporal_op() const {
    switch (op()) {
    case Op::next:
    case Op::finally:
    case Op::globally:
    case Op::until:
    case Op::weak_until:
    case Op::counted_weak_until: return true;
    default: return false;
    }
}

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (op() != other.op()) return false;
    switch (op()) {
    case Op::true_:
    case Op::false_: return true;
    case Op::atom: return signal() == other.signal();
    default: break;
    }
    if (op() == Op::counted_weak_until && count() != other.count()) return false;
    if (!(lhs() == other.lhs())) return false;
    if (is_binary()) return rhs() == other.rhs();
    return true;
}

bool Formula::operator<(const Formula& other) const {
    if (node_ == other.node_) return false;
    if (op() != other.op()) return op() < other.op();
    switch (op()) {
    case Op::true_:
    case Op::false_: return false;
    case Op::atom: return signal() < other.signal();
    default: break;
    }
    if (count() != other.count()) return count() < other.count();
    if (lhs() != other.lhs()) return lhs() < other.lhs();
    if (is_binary()) return rhs() < other.rhs();
    return false;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kPrecIff = 1;
constexpr int kPrecOr = 2;
constexpr int kPrecAnd = 3;
constexpr int kPrecUntil = 4;
constexpr int kPrecUnary = 5;
constexpr int kPrecAtom = 6;

int precedence(const Formula& f) {
    switch (f.op()) {
    case Op::implies:
    case Op::iff: return kPrecIff;
    case Op::or_: return kPrecOr;
    case Op::and_: return kPrecAnd;
    case Op::until:
    case Op::weak_until:
    case Op::counted_weak_until: return kPrecUntil;
    case Op::not_:
    case Op::next:
    case Op::finally:
    case Op::globally: return kPrecUnary;
    default: return kPrecAtom;
    }
}

void print(std::ostream& os, const Formula& f, int ctx) {
    const int p = precedence(f);
    const bool parens = p < ctx;
    if (parens) os << '(';
    switch (f.op()) {
    case Op::true_: os << "true"; break;
    case Op::false_: os << "false"; break;
    case Op::atom: os << atom_key(f.signal()); break;
    case Op::not_:
        os << '!';
        print(os, f.lhs(), kPrecUnary);
        break;
    case Op::next:
    case Op::finally:
    case Op::globally: {
        os << (f.op() == Op::next ? "X " : f.op() == Op::finally ? "F " : "G ");
        print(os, f.lhs(), kPrecUnary);
        break;
    }
    case Op::and_:
    case Op::or_:
        // left associative
        print(os, f.lhs(), p);
        os << (f.op() == Op::and_ ? " && " : " || ");
        print(os, f.rhs(), p + 1);
        break;
    case Op::implies:
    case Op::iff:
    case Op::until:
    case Op::weak_until:
    case Op::counted_weak_until: {
        // right associative
        print(os, f.lhs(), p + 1);
        switch (f.op()) {
        case Op::implies: os << " -> "; break;
        case Op::iff: os << " <-> "; break;
        case Op::until: os << " U "; break;
        case Op::weak_until: os << " W "; break;
        default: os << " W[" << f.count() << "] "; break;
        }
        print(os, f.rhs(), p);
        break;
    }
    }
    if (parens) os << ')';
}

}  // namespace

std::string Formula::to_string() const {
    std::ostringstream os;
    print(os, *this, 0);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << f.to_string(); }

EnumTable EnumTable::amba_default() {
    EnumTable t;
    const Formula b1 = Formula::atom("HBURST1");
    const Formula b0 = Formula::atom("HBURST0");
    auto& hburst = t.enums["HBURST"];
    hburst.emplace("BURST4", Formula::conj(Formula::neg(b1), b0));
    hburst.emplace("INCR", Formula::conj(b1, Formula::neg(b0)));
    hburst.emplace("SINGLE", Formula::iff(b1, b0));
    return t;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok {
    ident,
    number,
    lparen,
    rparen,
    lbracket,
    rbracket,
    bang,
    and_,
    or_,
    implies,
    iff,
    eqeq,
    minus,
    end,
};

struct Token {
    Tok kind;
    std::string text;
    int column;
};

class Lexer {
public:
    Lexer(const std::string& src, const ParseContext& ctx) : src_(src), ctx_(ctx) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        std::size_t k = 0;
        while (true) {
            while (k < src_.size() && std::isspace(static_cast<unsigned char>(src_[k]))) ++k;
            const int col = static_cast<int>(k) + 1 + ctx_.column_offset;
            if (k >= src_.size()) {
                out.push_back({Tok::end, "", col});
                return out;
            }
            const char c = src_[k];
            auto two = [&](const char* s) { return src_.compare(k, std::char_traits<char>::length(s), s) == 0; };
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t e = k;
                while (e < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[e])) || src_[e] == '_')) ++e;
                out.push_back({Tok::ident, src_.substr(k, e - k), col});
                k = e;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t e = k;
                while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
                out.push_back({Tok::number, src_.substr(k, e - k), col});
                k = e;
            } else if (two("<->")) {
                out.push_back({Tok::iff, "<->", col});
                k += 3;
            } else if (two("->")) {
                out.push_back({Tok::implies, "->", col});
                k += 2;
            } else if (two("&&")) {
                out.push_back({Tok::and_, "&&", col});
                k += 2;
            } else if (two("||")) {
                out.push_back({Tok::or_, "||", col});
                k += 2;
            } else if (two("==")) {
                out.push_back({Tok::eqeq, "==", col});
                k += 2;
            } else {
                Tok t;
                switch (c) {
                case '(': t = Tok::lparen; break;
                case ')': t = Tok::rparen; break;
                case '[': t = Tok::lbracket; break;
                case ']': t = Tok::rbracket; break;
                case '!': t = Tok::bang; break;
                case '-': t = Tok::minus; break;
                default: throw ParseError(std::string("unexpected character '") + c + "'", ctx_.line, col);
                }
                out.push_back({t, std::string(1, c), col});
                ++k;
            }
        }
    }

private:
    const std::string& src_;
    const ParseContext& ctx_;
};

bool is_keyword(const std::string& s) {
    return s == "X" || s == "F" || s == "G" || s == "U" || s == "W" || s == "true" || s == "false";
}

class Parser {
public:
    Parser(std::vector<Token> toks, const ParseContext& ctx) : toks_(std::move(toks)), ctx_(ctx) {}

    Formula parse() {
        Formula f = parse_implication();
        if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, ctx_.line, peek().column); }
    void expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what);
        next();
    }

    Formula parse_implication() {
        Formula lhs = parse_or();
        if (peek().kind == Tok::implies) {
            next();
            return Formula::implies(lhs, parse_implication());
        }
        if (peek().kind == Tok::iff) {
            next();
            return Formula::iff(lhs, parse_implication());
        }
        return lhs;
    }

    Formula parse_or() {
        Formula acc = parse_and();
        while (peek().kind == Tok::or_) {
            next();
            acc = Formula::disj(acc, parse_and());
        }
        return acc;
    }

    Formula parse_and() {
        Formula acc = parse_until();
        while (peek().kind == Tok::and_) {
            next();
            acc = Formula::conj(acc, parse_until());
        }
        return acc;
    }

    Formula parse_until() {
        Formula lhs = parse_unary();
        if (peek().kind == Tok::ident && peek().text == "U") {
            next();
            return Formula::U(lhs, parse_until());
        }
        if (peek().kind == Tok::ident && peek().text == "W") {
            next();
            if (peek().kind == Tok::lbracket) {
                next();
                if (peek().kind != Tok::number) fail("expected count in W[k]");
                const int k = std::stoi(next().text);
                if (k < 1) fail("W[k] requires k >= 1");
                expect(Tok::rbracket, "']'");
                return Formula::Wk(k, lhs, parse_until());
            }
            return Formula::W(lhs, parse_until());
        }
        return lhs;
    }

    Formula parse_unary() {
        const Token& t = peek();
        if (t.kind == Tok::bang) {
            next();
            return Formula::neg(parse_unary());
        }
        if (t.kind == Tok::ident && (t.text == "X" || t.text == "F" || t.text == "G")) {
            const std::string op = next().text;
            Formula sub = parse_unary();
            return op == "X" ? Formula::X(sub) : op == "F" ? Formula::F(sub) : Formula::G(sub);
        }
        return parse_primary();
    }

    IndexTerm parse_index_term() {
        const Token& t = peek();
        if (t.kind == Tok::number) return IndexTerm::lit(std::stoi(next().text));
        if (t.kind == Tok::ident && t.text == "j") {
            next();
            return IndexTerm::j();
        }
        if (t.kind == Tok::ident && t.text == "i") {
            next();
            if (peek().kind == Tok::minus) {
                next();
                if (peek().kind != Tok::number || peek().text != "1") fail("only i-1 is supported as an offset");
                next();
                return IndexTerm::i_minus_1();
            }
            return IndexTerm::i();
        }
        fail("expected index term (i, j, i-1 or a literal)");
    }

    Formula parse_primary() {
        const Token t = peek();
        if (t.kind == Tok::lparen) {
            next();
            Formula f = parse_implication();
            expect(Tok::rparen, "')'");
            return f;
        }
        if (t.kind != Tok::ident) fail("expected formula");
        if (t.text == "true") {
            next();
            return Formula::tt();
        }
        if (t.text == "false") {
            next();
            return Formula::ff();
        }
        if (is_keyword(t.text)) fail("unexpected operator '" + t.text + "'");
        next();
        SignalRef ref{t.text, IndexTerm::none(), false};
        if (peek().kind == Tok::lparen) {
            next();
            ref.index = parse_index_term();
            expect(Tok::rparen, "')'");
        }
        if (peek().kind == Tok::eqeq) {
            next();
            if (!ref.index.is_none()) fail("'==' is only defined on unindexed signals");
            const Token rhs = peek();
            if (rhs.kind == Tok::number) {
                next();
                ref.index = IndexTerm::lit(std::stoi(rhs.text));
                ref.index_equality = true;
            } else if (rhs.kind == Tok::ident && (rhs.text == "i" || rhs.text == "j")) {
                next();
                ref.index = rhs.text == "i" ? IndexTerm::i() : IndexTerm::j();
                ref.index_equality = true;
            } else if (rhs.kind == Tok::ident) {
                next();
                auto e = ctx_.enums.enums.find(ref.name);
                if (e == ctx_.enums.enums.end()) fail("'" + ref.name + "' is not an enumerated signal");
                auto v = e->second.find(rhs.text);
                if (v == e->second.end()) fail("unknown value '" + rhs.text + "' of " + ref.name);
                check_declared(v->second, rhs.column);
                return v->second;
            } else {
                fail("expected value after '=='");
            }
        }
        if (!ctx_.declared.empty() && !ctx_.declared.count(ref.name))
            throw ParseError("unknown signal '" + ref.name + "'", ctx_.line, t.column);
        return Formula::atom(ref);
    }

    void check_declared(const Formula& f, int column) const {
        if (ctx_.declared.empty()) return;
        for (const auto& a : atoms_of(f))
            if (!ctx_.declared.count(a.name))
                throw ParseError("unknown signal '" + a.name + "'", ctx_.line, column);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const ParseContext& ctx_;
};

}  // namespace

Formula parse_ltl(const std::string& text, const ParseContext& ctx) {
    Lexer lex(text, ctx);
    Parser p(lex.run(), ctx);
    return p.parse();
}

// ---------------------------------------------------------------------------
// Queries

bool contains_op(const Formula& f, Op op) {
    if (f.op() == op) return true;
    if (f.is_unary()) return contains_op(f.lhs(), op);
    if (f.is_binary()) return contains_op(f.lhs(), op) || contains_op(f.rhs(), op);
    return false;
}

bool has_temporal(const Formula& f) {
    if (f.is_temporal_op()) return true;
    if (f.is_unary()) return has_temporal(f.lhs());
    if (f.is_binary()) return has_temporal(f.lhs()) || has_temporal(f.rhs());
    return false;
}

bool is_propositional(const Formula& f) { return !has_temporal(f); }

bool is_nnf(const Formula& f) {
    switch (f.op()) {
    case Op::not_: return f.lhs().is_atom();
    case Op::implies:
    case Op::iff:
    case Op::counted_weak_until: return false;
    default: break;
    }
    if (f.is_unary()) return is_nnf(f.lhs());
    if (f.is_binary()) return is_nnf(f.lhs()) && is_nnf(f.rhs());
    return true;
}

int max_negation_depth(const Formula& f) {
    if (f.op() == Op::not_) {
        int depth = 1;
        const Formula* cur = &f.lhs();
        while (cur->op() == Op::not_) {
            ++depth;
            cur = &cur->lhs();
        }
        return std::max(depth, max_negation_depth(*cur));
    }
    if (f.is_unary()) return max_negation_depth(f.lhs());
    if (f.is_binary()) return std::max(max_negation_depth(f.lhs()), max_negation_depth(f.rhs()));
    return 0;
}

void collect_atoms(const Formula& f, std::set<SignalRef>& out) {
    if (f.is_atom()) {
        out.insert(f.signal());
        return;
    }
    if (f.is_unary()) collect_atoms(f.lhs(), out);
    if (f.is_binary()) {
        collect_atoms(f.lhs(), out);
        collect_atoms(f.rhs(), out);
    }
}

std::set<SignalRef> atoms_of(const Formula& f) {
    std::set<SignalRef> out;
    collect_atoms(f, out);
    return out;
}

std::set<std::string> atom_keys_of(const Formula& f) {
    std::set<std::string> out;
    for (const auto& a : atoms_of(f)) out.insert(atom_key(a));
    return out;
}

// ---------------------------------------------------------------------------
// Rewrites

namespace {

Formula rebuild(const Formula& f, Formula a, Formula b) {
    switch (f.op()) {
    case Op::not_: return Formula::neg(std::move(a));
    case Op::next: return Formula::X(std::move(a));
    case Op::finally: return Formula::F(std::move(a));
    case Op::globally: return Formula::G(std::move(a));
    case Op::and_: return Formula::conj(std::move(a), std::move(b));
    case Op::or_: return Formula::disj(std::move(a), std::move(b));
    case Op::implies: return Formula::implies(std::move(a), std::move(b));
    case Op::iff: return Formula::iff(std::move(a), std::move(b));
    case Op::until: return Formula::U(std::move(a), std::move(b));
    case Op::weak_until: return Formula::W(std::move(a), std::move(b));
    case Op::counted_weak_until: return Formula::Wk(f.count(), std::move(a), std::move(b));
    default: return f;
    }
}

}  // namespace

Formula map_atoms(const Formula& f, const std::function<Formula(const SignalRef&)>& fn) {
    if (f.is_atom()) return fn(f.signal());
    if (f.is_unary()) return rebuild(f, map_atoms(f.lhs(), fn), Formula());
    if (f.is_binary()) return rebuild(f, map_atoms(f.lhs(), fn), map_atoms(f.rhs(), fn));
    return f;
}

Formula expand_counted_until(const Formula& f) {
    if (f.op() == Op::counted_weak_until) {
        const Formula a = expand_counted_until(f.lhs());
        const Formula b = expand_counted_until(f.rhs());
        Formula acc = Formula::W(a, b);
        for (int k = 2; k <= f.count(); ++k) acc = Formula::W(a, Formula::conj(b, Formula::X(acc)));
        return acc;
    }
    if (f.is_unary()) return rebuild(f, expand_counted_until(f.lhs()), Formula());
    if (f.is_binary()) return rebuild(f, expand_counted_until(f.lhs()), expand_counted_until(f.rhs()));
    return f;
}

namespace {

Formula nnf(const Formula& f, bool negated) {
    using F = Formula;
    switch (f.op()) {
    case Op::true_: return negated ? F::ff() : F::tt();
    case Op::false_: return negated ? F::tt() : F::ff();
    case Op::atom: return negated ? F::neg(f) : f;
    case Op::not_: return nnf(f.lhs(), !negated);
    case Op::and_:
        return negated ? F::disj(nnf(f.lhs(), true), nnf(f.rhs(), true))
                       : F::conj(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::or_:
        return negated ? F::conj(nnf(f.lhs(), true), nnf(f.rhs(), true))
                       : F::disj(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::implies:
        return negated ? F::conj(nnf(f.lhs(), false), nnf(f.rhs(), true))
                       : F::disj(nnf(f.lhs(), true), nnf(f.rhs(), false));
    case Op::iff: {
        const F a = nnf(f.lhs(), false), na = nnf(f.lhs(), true);
        const F b = nnf(f.rhs(), false), nb = nnf(f.rhs(), true);
        return negated ? F::disj(F::conj(a, nb), F::conj(na, b)) : F::disj(F::conj(a, b), F::conj(na, nb));
    }
    case Op::next: return F::X(nnf(f.lhs(), negated));
    case Op::finally: return negated ? F::G(nnf(f.lhs(), true)) : F::F(nnf(f.lhs(), false));
    case Op::globally: return negated ? F::F(nnf(f.lhs(), true)) : F::G(nnf(f.lhs(), false));
    case Op::until:
        if (!negated) return F::U(nnf(f.lhs(), false), nnf(f.rhs(), false));
        return F::W(nnf(f.rhs(), true), F::conj(nnf(f.lhs(), true), nnf(f.rhs(), true)));
    case Op::weak_until:
        if (!negated) return F::W(nnf(f.lhs(), false), nnf(f.rhs(), false));
        return F::U(nnf(f.rhs(), true), F::conj(nnf(f.lhs(), true), nnf(f.rhs(), true)));
    case Op::counted_weak_until: throw Error("to_nnf: expand W[k] first");
    }
    return f;
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }

Formula simplify(const Formula& f) {
    using F = Formula;
    if (!f.is_unary() && !f.is_binary()) return f;
    const F a = simplify(f.lhs());
    const F b = f.is_binary() ? simplify(f.rhs()) : F();
    const bool at = a.op() == Op::true_, af = a.op() == Op::false_;
    const bool bt = f.is_binary() && b.op() == Op::true_;
    const bool bf = f.is_binary() && b.op() == Op::false_;
    switch (f.op()) {
    case Op::not_:
        if (at) return F::ff();
        if (af) return F::tt();
        if (a.op() == Op::not_) return a.lhs();
        return F::neg(a);
    case Op::and_:
        if (af || bf) return F::ff();
        if (at) return b;
        if (bt) return a;
        if (a == b) return a;
        return F::conj(a, b);
    case Op::or_:
        if (at || bt) return F::tt();
        if (af) return b;
        if (bf) return a;
        if (a == b) return a;
        return F::disj(a, b);
    case Op::implies:
        if (af || bt) return F::tt();
        if (at) return b;
        if (bf) return simplify(F::neg(a));
        return F::implies(a, b);
    case Op::iff:
        if (at) return b;
        if (bt) return a;
        if (af) return simplify(F::neg(b));
        if (bf) return simplify(F::neg(a));
        if (a == b) return F::tt();
        return F::iff(a, b);
    case Op::next:
        if (at || af) return a;
        return F::X(a);
    case Op::finally:
        if (at || af) return a;
        if (a.op() == Op::finally) return a;
        return F::F(a);
    case Op::globally:
        if (at || af) return a;
        if (a.op() == Op::globally) return a;
        return F::G(a);
    case Op::until:
        if (bt || bf) return b;
        if (af) return b;
        if (at) return F::F(b);
        return F::U(a, b);
    case Op::weak_until:
        if (bt) return b;
        if (af) return b;
        if (at) return F::tt();
        if (bf) return F::G(a);
        return F::W(a, b);
    case Op::counted_weak_until: return F::Wk(f.count(), a, b);
    default: return f;
    }
}

Formula substitute_index(const Formula& f, IndexAssignment assignment, int ring_size) {
    if (ring_size < 1) throw Error("substitute_index: ring size must be >= 1");
    return map_atoms(f, [&](const SignalRef& ref) -> Formula {
        if (ref.index_equality) throw Error("cannot ground '" + atom_key(ref) + "': localize global outputs first");
        int k = 0;
        switch (ref.index.kind) {
        case IndexTerm::Kind::none: return Formula::atom(ref);
        case IndexTerm::Kind::literal: k = ref.index.literal; break;
        case IndexTerm::Kind::var_i:
        case IndexTerm::Kind::var_i_minus_1:
            if (!assignment.i) throw Error("unbound index variable i in '" + atom_key(ref) + "'");
            k = *assignment.i;
            if (ref.index.kind == IndexTerm::Kind::var_i_minus_1) k = k - 1;
            break;
        case IndexTerm::Kind::var_j:
            if (!assignment.j) throw Error("unbound index variable j in '" + atom_key(ref) + "'");
            k = *assignment.j;
            break;
        }
        k = ((k % ring_size) + ring_size) % ring_size;
        return Formula::atom(ground_name(ref.name, k));
    });
}

// ---------------------------------------------------------------------------
// Lasso evaluation

namespace {

using Table = std::vector<bool>;

Table eval_all(const Formula& f, const LassoShape& shape, const AtomOracle& atom) {
    const std::size_t n = shape.size();
    Table out(n, false);
    switch (f.op()) {
    case Op::true_: out.assign(n, true); return out;
    case Op::false_: return out;
    case Op::atom:
        for (std::size_t k = 0; k < n; ++k) out[k] = atom(k, f.signal());
        return out;
    default: break;
    }
    const Table a = eval_all(f.lhs(), shape, atom);
    Table b;
    if (f.is_binary()) b = eval_all(f.rhs(), shape, atom);
    switch (f.op()) {
    case Op::not_:
        for (std::size_t k = 0; k < n; ++k) out[k] = !a[k];
        return out;
    case Op::and_:
        for (std::size_t k = 0; k < n; ++k) out[k] = a[k] && b[k];
        return out;
    case Op::or_:
        for (std::size_t k = 0; k < n; ++k) out[k] = a[k] || b[k];
        return out;
    case Op::implies:
        for (std::size_t k = 0; k < n; ++k) out[k] = !a[k] || b[k];
        return out;
    case Op::iff:
        for (std::size_t k = 0; k < n; ++k) out[k] = a[k] == b[k];
        return out;
    case Op::next:
        for (std::size_t k = 0; k < n; ++k) out[k] = a[shape.succ(k)];
        return out;
    default: break;
    }
    // Fixpoint iteration over the lasso graph: least for U/F, greatest for W/G.
    const bool greatest = f.op() == Op::globally || f.op() == Op::weak_until;
    out.assign(n, greatest);
    auto step = [&](std::size_t k) -> bool {
        const bool nxt = out[shape.succ(k)];
        switch (f.op()) {
        case Op::finally: return a[k] || nxt;
        case Op::globally: return a[k] && nxt;
        case Op::until:
        case Op::weak_until: return b[k] || (a[k] && nxt);
        default: throw Error("evaluate_lasso: expand W[k] first");
        }
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = n; k-- > 0;) {
            const bool v = step(k);
            if (v != out[k]) {
                out[k] = v;
                changed = true;
            }
        }
    }
    return out;
}

}  // namespace

std::vector<bool> evaluate_lasso_all(const Formula& f, const LassoShape& shape, const AtomOracle& atom) {
    if (shape.loop_len == 0) throw Error("evaluate_lasso: loop must be nonempty");
    if (contains_op(f, Op::counted_weak_until)) return eval_all(expand_counted_until(f), shape, atom);
    return eval_all(f, shape, atom);
}

bool evaluate_lasso(const Formula& f, const LassoShape& shape, const AtomOracle& atom) {
    return evaluate_lasso_all(f, shape, atom)[0];
}

bool evaluate_lasso(const Formula& f, const std::vector<NamedLetter>& prefix, const std::vector<NamedLetter>& loop) {
    LassoShape shape{prefix.size(), loop.size()};
    return evaluate_lasso(f, shape, [&](std::size_t pos, const SignalRef& ref) {
        const NamedLetter& l = pos < prefix.size() ? prefix[pos] : loop[pos - prefix.size()];
        return l.count(atom_key(ref)) > 0;
    });
}

}  // namespace ringsynth
