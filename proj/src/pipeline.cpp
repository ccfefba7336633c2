#include "ringsynth/pipeline.hpp"

#include <map>
#include <sstream>

namespace ringsynth {

IndexedSpec load_spec_or_preset(const std::string& file, const std::string& preset) {
    if (file.empty() == preset.empty()) throw Error("give exactly one of --spec and --preset");
    return file.empty() ? builtin_corpus(preset) : load_spec(file);
}

Formula token_release_assumption(const IndexedSpec& spec) {
    const HubSpec hub = prepare_hub(spec);
    for (const auto& o : hub.obligations) {
        if (o.name != "TR") continue;
        Formula f = Formula::tt();
        for (const auto& p : o.premises) f = Formula::conj(f, p.formula);
        return f;
    }
    throw Error("hub specification has no TR obligation");
}

bool VerifyReport::ok() const {
    if (!wellformed.empty() || !token_release || !cutoff_disagreements.empty()) return false;
    for (const auto& p : properties)
        if (!p.holds) return false;
    return true;
}

VerifyReport verify_template(const IndexedSpec& spec_in, const ProcessTemplate& model, const ProcessTemplate* zero,
                             const VerifyOptions& opt) {
    const IndexedSpec spec = spec_in.signals.global_outputs.empty() ? spec_in : localize_global_outputs(spec_in);
    VerifyReport rep;
    rep.wellformed = check_wellformed(model, false);
    rep.condition_a = check_wellformed(model, true).size() == rep.wellformed.size();
    if (zero) {
        for (auto v : check_wellformed(*zero, false)) {
            v.message = "zero template: " + v.message;
            rep.wellformed.push_back(std::move(v));
        }
        rep.condition_a = rep.condition_a && check_wellformed(*zero, true).empty();
    }
    if (!rep.wellformed.empty()) return rep;
    rep.token_release = check_token_release(model, token_release_assumption(spec)).holds;

    const std::set<std::string> globals(spec.signals.global_inputs.begin(), spec.signals.global_inputs.end());
    for (const auto& prop : spec.guarantees) {
        if (prop.quantifier == Quantifier::zero_only && !zero)
            throw Error("property " + prop.label + " is about process 0; a zero template is needed");
        std::vector<int> sizes = opt.sizes;
        std::string note;
        if (opt.cutoff) {
            const CutoffInfo info = cutoff_for(prop, spec.assumptions, rep.condition_a);
            note = info.reason;
            if (info.cutoff) {
                sizes.clear();
                for (int n = *info.cutoff; n <= *info.cutoff + opt.extra; ++n) sizes.push_back(n);
            }
        }
        for (const Timing timing : opt.timings) {
            std::map<bool, int> seen;
            for (const int n : sizes) {
                const Ring ring = zero ? Ring(*zero, model, n, timing, globals) : Ring(model, n, timing, globals);
                const RingCheckResult r = verify_ring(ring, prop, spec.assumptions, opt.check);
                PropertyVerdict v;
                v.label = prop.label;
                v.quantifier = prop.quantifier;
                v.size = n;
                v.timing = timing;
                v.holds = r.holds;
                v.note = note;
                v.counterexample = r.counterexample;
                rep.properties.push_back(std::move(v));
                seen[r.holds]++;
            }
            if (opt.cutoff && seen.size() > 1)
                rep.cutoff_disagreements.push_back(prop.label + " (" + to_string(timing) + ")");
        }
    }
    return rep;
}

std::string format_lasso(const Ring& ring, const RingLasso& run) {
    std::ostringstream os;
    for (std::size_t k = 0; k < run.positions.size(); ++k) {
        const auto& p = run.positions[k];
        if (k == run.loop_start) os << "-- loop --\n";
        os << k << ":";
        for (int q = 0; q < ring.size(); ++q)
            os << ' ' << ring.process(q).state_names[static_cast<std::size_t>(p.state[static_cast<std::size_t>(q)])];
        os << " |";
        for (std::size_t b = 0; b < ring.env_atoms().size(); ++b)
            if ((p.env >> b) & 1) os << ' ' << ring.env_atoms()[b];
        os << " | sched";
        for (int q = 0; q < ring.size(); ++q)
            if ((p.scheduled >> q) & 1) os << ' ' << q;
        if (p.receiver >= 0) os << " | token to " << p.receiver;
        os << '\n';
    }
    return os.str();
}

}  // namespace ringsynth
