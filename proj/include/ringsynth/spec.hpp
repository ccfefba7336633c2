#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ringsynth/ltl.hpp"

namespace ringsynth {

enum class Quantifier { forall_i, forall_i_ne0, forall_ij, zero_only, unquantified };

enum class TemporalClass { invariant_G, initial, general };

enum class SignalKind { input, output, unknown };

const char* to_string(Quantifier q);

struct QuantifiedProperty {
    Quantifier quantifier = Quantifier::forall_i;
    Formula body;
    std::string label;

    TemporalClass temporal_class() const;
    bool is_tr() const { return label.rfind("TR", 0) == 0; }
    bool operator==(const QuantifiedProperty& o) const {
        return quantifier == o.quantifier && body == o.body && label == o.label;
    }
};

struct Signals {
    std::vector<std::string> local_inputs;
    std::vector<std::string> global_inputs;
    std::vector<std::string> local_outputs;
    /// Pre-localization global outputs (START, HMASTERLOCK ... before rewriting).
    std::vector<std::string> global_outputs;

    bool is_local(const std::string& name) const;
    bool is_global(const std::string& name) const;
    bool is_declared(const std::string& name) const;
    SignalKind kind(const std::string& name) const;
    std::set<std::string> all() const;
    /// Adds TOK/SEND (local outputs) and RCV (local input) when missing.
    void add_reserved();
    bool operator==(const Signals&) const = default;
};

/// Parameterized specification: signal declarations plus quantified
/// assumption and guarantee lists.
struct IndexedSpec {
    Signals signals;
    std::vector<QuantifiedProperty> assumptions;
    std::vector<QuantifiedProperty> guarantees;

    bool operator==(const IndexedSpec&) const = default;
};

/// Kind of an atom occurrence in a 1-indexed property. `SEND(i-1)` counts as
/// an input: the process observes it as the token arriving.
SignalKind atom_kind(const SignalRef& ref, const Signals& signals);

/// Checks every declaration and property invariant; throws Error.
void validate(const IndexedSpec& spec);

IndexedSpec parse_spec(const std::string& text, const std::string& origin = "<string>");
IndexedSpec load_spec(const std::filesystem::path& file);
std::string format_spec(const IndexedSpec& spec);
void save_spec(const IndexedSpec& spec, const std::filesystem::path& file);
/// Renders one property line in spec-file syntax.
std::string format_property(const QuantifiedProperty& p);

enum class DirectClass { alpha, beta, general };
const char* to_string(DirectClass c);

/// Syntactic classification used by the direct SMT encoding.
/// alpha: G over a boolean formula of current inputs.
/// beta:  G over current inputs, current outputs and next outputs (X only
///        above boolean output formulas).
DirectClass classify_direct(const Formula& body, const std::function<SignalKind(const SignalRef&)>& kind);
DirectClass classify_direct(const QuantifiedProperty& p, const Signals& signals);

/// Built-in specifications: amba_non0, amba_zero, amba_zero_reduced_burst,
/// simple_arbiter.
IndexedSpec builtin_corpus(const std::string& name);
std::string builtin_corpus_text(const std::string& name);
std::vector<std::string> builtin_corpus_names();

}  // namespace ringsynth
