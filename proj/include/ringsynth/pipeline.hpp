#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ringsynth/checker.hpp"
#include "ringsynth/synth.hpp"

namespace ringsynth {

/// `--spec` file or `--preset` name; exactly one must be given.
IndexedSpec load_spec_or_preset(const std::string& file, const std::string& preset);

/// Local assumption for (†): the premises of the TR obligation.
Formula token_release_assumption(const IndexedSpec& spec);

struct VerifyOptions {
    std::vector<int> sizes = {2};
    std::vector<Timing> timings = {Timing::fully_asynchronous};
    /// Per property: verify from its cutoff to cutoff + extra instead of `sizes`.
    bool cutoff = false;
    int extra = 0;
    CheckOptions check;
};

struct PropertyVerdict {
    std::string label;
    Quantifier quantifier = Quantifier::forall_i;
    int size = 0;
    Timing timing = Timing::fully_asynchronous;
    bool holds = false;
    std::string note;
    std::optional<RingLasso> counterexample;
};

struct VerifyReport {
    std::vector<Violation> wellformed;
    bool condition_a = false;
    bool token_release = true;
    std::vector<PropertyVerdict> properties;
    /// Properties whose verdicts differ between ring sizes at one timing.
    std::vector<std::string> cutoff_disagreements;

    bool ok() const;
};

/// Well-formedness, (†) and every guarantee of the spec in rings built from
/// the template (process 0 runs `zero` when given). Global outputs are
/// localized first since the template carries the local versions.
VerifyReport verify_template(const IndexedSpec& spec, const ProcessTemplate& model, const ProcessTemplate* zero,
                             const VerifyOptions& opt);

std::string format_lasso(const Ring& ring, const RingLasso& run);

}  // namespace ringsynth
