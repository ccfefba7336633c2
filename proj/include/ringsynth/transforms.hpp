#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ringsynth/spec.hpp"

namespace ringsynth {

struct SplitOptions {
    /// Auxiliary global input introduced for the 0-process.
    std::string aux_input = "NO_REQ";
    /// Local request signal used for the auxiliary assumption A6.
    std::string request_signal = "HBUSREQ";
};

struct SplitResult {
    IndexedSpec non_zero;
    IndexedSpec zero;
};

/// non_zero keeps forall-i and forall-i!=0 properties; zero keeps forall-i
/// properties instantiated at 0 plus the zero-only ones. When the zero part
/// mentions the auxiliary input it is declared and A6 is added.
SplitResult split_zero_process(const IndexedSpec& spec, const SplitOptions& opt = {});

/// Rewrites `g` and `g == i` for each named global output into `g(i)`
/// (`g(0)` in zero-only properties) and moves the declaration to the local
/// outputs. Empty list: all declared global outputs.
IndexedSpec localize_global_outputs(const IndexedSpec& spec, const std::vector<std::string>& globals = {});

/// TR1..TR4 (label prefix TR). Idempotent.
std::vector<QuantifiedProperty> tr_guarantees();
IndexedSpec add_tr_guarantees(const IndexedSpec& spec);

/// One implication premises -> conclusions of the localized specification.
struct Obligation {
    std::string name;
    std::vector<QuantifiedProperty> premises;
    std::vector<QuantifiedProperty> conclusions;
    Formula formula() const;
};

struct LocalizedSpec {
    Signals signals;
    Quantifier quantifier = Quantifier::forall_i;  // forall_i or zero_only
    std::vector<Obligation> obligations;

    /// Flattened to one guarantee per obligation (for dumping and checking).
    IndexedSpec as_indexed() const;
    /// One implication per conclusion: premises -> conclusion.
    std::vector<QuantifiedProperty> per_conclusion() const;
};

struct LocalizeOptions {
    /// Grant signal whose "grant only with token" guarantee is injected
    /// when declared and missing.
    std::optional<std::string> grant_signal = std::string("HGRANT");
};

/// (ass(i) -> TR(i)) and (ass(i) && GF TOK(i) -> gua(i)). The TR side
/// omits the GF TOK(i) assumption.
LocalizedSpec localize_assumptions(const IndexedSpec& spec, const LocalizeOptions& opt = {});

struct HubProperty {
    std::string label;
    Formula formula;  // over unindexed signal names
};

struct HubObligation {
    std::string name;
    std::vector<HubProperty> premises;
    std::vector<HubProperty> conclusions;
    Formula formula() const;
};

/// Single-process synthesis problem. Inputs include RCV, outputs include
/// TOK and SEND.
struct HubSpec {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<HubObligation> obligations;
    Formula formula() const;
};

/// Drops the process index: `s(i)` and `s(0)` become `s`, `SEND(i-1)`
/// becomes RCV. Adds GF(TOK || RCV) and G(TOK -> !RCV) to every premise.
HubSpec hub_abstraction(const LocalizedSpec& spec);

/// Adds an extra assumption written with index i; in a 0-process spec it is
/// instantiated at 0.
IndexedSpec with_assumption(const IndexedSpec& spec, const Formula& indexed, const std::string& label);

/// Full chain for a 1-indexed spec that is already split.
HubSpec prepare_hub(const IndexedSpec& spec, const LocalizeOptions& opt = {});
LocalizedSpec prepare_localized(const IndexedSpec& spec, const LocalizeOptions& opt = {});

}  // namespace ringsynth
