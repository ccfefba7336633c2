#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ringsynth {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Reserved signal names.
inline constexpr const char* kTok = "TOK";
inline constexpr const char* kSend = "SEND";
inline constexpr const char* kRcv = "RCV";
inline constexpr const char* kSch = "SCH";

/// Index attached to a signal reference.
struct IndexTerm {
    enum class Kind { none, var_i, var_j, var_i_minus_1, literal };
    Kind kind = Kind::none;
    int literal = 0;

    static IndexTerm none() { return {}; }
    static IndexTerm i() { return {Kind::var_i, 0}; }
    static IndexTerm j() { return {Kind::var_j, 0}; }
    static IndexTerm i_minus_1() { return {Kind::var_i_minus_1, 0}; }
    static IndexTerm lit(int k) { return {Kind::literal, k}; }

    bool is_none() const { return kind == Kind::none; }
    bool operator==(const IndexTerm&) const = default;
    auto operator<=>(const IndexTerm&) const = default;
};

/// A (possibly indexed) signal occurrence. Ground atoms produced by index
/// substitution are unindexed names such as `g_3`.
///
/// `index_equality` marks the pre-localization form `HMASTER == i`, which
/// only survives until localize_global_outputs rewrites it to `HMASTER(i)`.
struct SignalRef {
    std::string name;
    IndexTerm index;
    bool index_equality = false;

    bool is_global() const { return index.is_none(); }
    bool operator==(const SignalRef&) const = default;
    auto operator<=>(const SignalRef&) const = default;
};

/// Printed key of an atom: `g_3`, `r(i)`, `SEND(i-1)`, `HREADY`.
std::string atom_key(const SignalRef& ref);

enum class Op {
    true_,
    false_,
    atom,
    not_,
    and_,
    or_,
    implies,
    iff,
    next,
    finally,
    globally,
    until,
    weak_until,
    counted_weak_until,
};

/// Immutable LTL formula. Copies share structure.
class Formula {
public:
    Formula();  // true

    static Formula tt();
    static Formula ff();
    static Formula atom(SignalRef ref);
    static Formula atom(std::string name, IndexTerm index = IndexTerm::none());
    static Formula neg(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula implies(Formula a, Formula b);
    static Formula iff(Formula a, Formula b);
    static Formula X(Formula f);
    static Formula F(Formula f);
    static Formula G(Formula f);
    static Formula U(Formula a, Formula b);
    static Formula W(Formula a, Formula b);
    /// `a W[count] b`; count must be >= 1.
    static Formula Wk(int count, Formula a, Formula b);

    /// Left-nested conjunction/disjunction; empty list gives true/false.
    static Formula conj_all(const std::vector<Formula>& fs);
    static Formula disj_all(const std::vector<Formula>& fs);

    Op op() const;
    const SignalRef& signal() const;
    int count() const;
    const Formula& lhs() const;  // only child of unary nodes
    const Formula& rhs() const;

    bool is_atom() const { return op() == Op::atom; }
    bool is_unary() const;
    bool is_binary() const;
    bool is_temporal_op() const;

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }
    /// Total order on structure (used for canonical sets).
    bool operator<(const Formula& other) const;

    std::string to_string() const;

    const void* identity() const { return node_.get(); }

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Formula make(Op op, Formula a, Formula b);
    std::shared_ptr<const Node> node_;
};

std::ostream& operator<<(std::ostream& os, const Formula& f);

/// Named enumerations usable as `SIG == VALUE` in expressions. Each value
/// is a boolean formula over the bit signals encoding it.
struct EnumTable {
    std::map<std::string, std::map<std::string, Formula>> enums;

    /// HBURST over bits HBURST1 HBURST0: SINGLE=00 (and 11), BURST4=01, INCR=10.
    static EnumTable amba_default();
};

/// Optional declaration context for the parser.
struct ParseContext {
    /// If non-empty, every atom name must be in this set.
    std::set<std::string> declared;
    EnumTable enums = EnumTable::amba_default();
    /// Line number reported for errors (spec files parse one line at a time).
    int line = 1;
    int column_offset = 0;
};

Formula parse_ltl(const std::string& text, const ParseContext& ctx = {});

// ---------------------------------------------------------------------------
// Structural queries and rewrites

bool contains_op(const Formula& f, Op op);
bool is_propositional(const Formula& f);
bool has_temporal(const Formula& f);
bool is_nnf(const Formula& f);
/// Max count of consecutive negations sitting directly above an atom.
int max_negation_depth(const Formula& f);
void collect_atoms(const Formula& f, std::set<SignalRef>& out);
std::set<SignalRef> atoms_of(const Formula& f);
std::set<std::string> atom_keys_of(const Formula& f);

/// Unfolds every `W[k]`: `a W[1] b = a W b`, `a W[k] b = a W (b && X(a W[k-1] b))`.
Formula expand_counted_until(const Formula& f);

/// Negation normal form over {atoms, !atom, &&, ||, X, F, G, U, W}.
/// Uses the duality pairs !(a U b) = !b W (!a && !b) and
/// !(a W b) = !b U (!a && !b). Precondition: no W[k].
Formula to_nnf(const Formula& f);

/// Constant folding and trivial identities (idempotence, X true, G true ...).
Formula simplify(const Formula& f);

/// Replaces each atom via the callback (structure preserved).
Formula map_atoms(const Formula& f, const std::function<Formula(const SignalRef&)>& fn);

/// Index assignment for substitution; absent variables are unbound.
struct IndexAssignment {
    std::optional<int> i;
    std::optional<int> j;
};

/// Grounds indexed atoms: `g(i)` with i:=3 becomes `g_3`; `i-1` wraps modulo
/// ring_size. Global atoms stay as they are.
Formula substitute_index(const Formula& f, IndexAssignment assignment, int ring_size);

std::string ground_name(const std::string& signal, int process);

// ---------------------------------------------------------------------------
// Evaluation on ultimately periodic words

/// Word `letters[0..prefix_len) (letters[prefix_len..])^omega`; atom truth is
/// queried through the callback with the absolute position.
struct LassoShape {
    std::size_t prefix_len = 0;
    std::size_t loop_len = 1;
    std::size_t size() const { return prefix_len + loop_len; }
    std::size_t succ(std::size_t pos) const { return pos + 1 < size() ? pos + 1 : prefix_len; }
};

using AtomOracle = std::function<bool(std::size_t pos, const SignalRef& atom)>;

/// Truth of f at every position of the lasso. Weak until is evaluated as
/// (a U b) || G a.
std::vector<bool> evaluate_lasso_all(const Formula& f, const LassoShape& shape, const AtomOracle& atom);
bool evaluate_lasso(const Formula& f, const LassoShape& shape, const AtomOracle& atom);

/// Convenience: letters are sets of atom keys that hold.
using NamedLetter = std::set<std::string>;
bool evaluate_lasso(const Formula& f, const std::vector<NamedLetter>& prefix,
                    const std::vector<NamedLetter>& loop);

}  // namespace ringsynth
