#include "ringsynth/transforms.hpp"

#include <algorithm>

namespace ringsynth {

namespace {

bool mentions(const Formula& f, const std::string& name) {
    for (const auto& a : atoms_of(f))
        if (a.name == name) return true;
    return false;
}

bool mentions(const std::vector<QuantifiedProperty>& ps, const std::string& name) {
    return std::any_of(ps.begin(), ps.end(), [&](const QuantifiedProperty& p) { return mentions(p.body, name); });
}

Formula at_zero(const Formula& f, const std::string& label) {
    return map_atoms(f, [&](const SignalRef& r) {
        SignalRef out = r;
        switch (r.index.kind) {
        case IndexTerm::Kind::var_i: out.index = IndexTerm::lit(0); break;
        case IndexTerm::Kind::var_i_minus_1:
        case IndexTerm::Kind::var_j:
            throw Error("cannot restrict '" + label + "' to process 0: it mentions " + atom_key(r));
        default: break;
        }
        return Formula::atom(out);
    });
}

void erase_name(std::vector<std::string>& v, const std::string& name) { v.erase(std::remove(v.begin(), v.end(), name), v.end()); }

}  // namespace

SplitResult split_zero_process(const IndexedSpec& spec, const SplitOptions& opt) {
    SplitResult out;
    out.non_zero.signals = spec.signals;
    out.zero.signals = spec.signals;
    auto route = [&](const std::vector<QuantifiedProperty>& src, bool assumption) {
        auto& nz = assumption ? out.non_zero.assumptions : out.non_zero.guarantees;
        auto& z = assumption ? out.zero.assumptions : out.zero.guarantees;
        for (const auto& p : src) {
            switch (p.quantifier) {
            case Quantifier::forall_i:
                nz.push_back(p);
                z.push_back({Quantifier::zero_only, at_zero(p.body, p.label), p.label});
                break;
            case Quantifier::forall_i_ne0: nz.push_back(p); break;
            case Quantifier::zero_only: z.push_back(p); break;
            case Quantifier::unquantified:
                nz.push_back(p);
                z.push_back(p);
                break;
            case Quantifier::forall_ij: throw Error("split_zero_process: 2-indexed property '" + p.label + "'");
            }
        }
    };
    route(spec.assumptions, true);
    route(spec.guarantees, false);

    const std::string& aux = opt.aux_input;
    if (!aux.empty()) {
        if (!mentions(out.non_zero.assumptions, aux) && !mentions(out.non_zero.guarantees, aux))
            erase_name(out.non_zero.signals.global_inputs, aux);
        if (mentions(out.zero.assumptions, aux) || mentions(out.zero.guarantees, aux)) {
            auto& gi = out.zero.signals.global_inputs;
            if (std::find(gi.begin(), gi.end(), aux) == gi.end()) gi.push_back(aux);
            const bool has_a6 = std::any_of(out.zero.assumptions.begin(), out.zero.assumptions.end(),
                                            [](const QuantifiedProperty& p) { return p.label == "A6"; });
            const auto& li = spec.signals.local_inputs;
            if (!has_a6 && std::find(li.begin(), li.end(), opt.request_signal) != li.end()) {
                const Formula a6 = Formula::G(Formula::implies(Formula::atom(opt.request_signal, IndexTerm::lit(0)),
                                                               Formula::neg(Formula::atom(aux))));
                out.zero.assumptions.push_back({Quantifier::zero_only, a6, "A6"});
            }
        }
    }
    validate(out.non_zero);
    validate(out.zero);
    return out;
}

IndexedSpec localize_global_outputs(const IndexedSpec& spec, const std::vector<std::string>& globals_in) {
    std::vector<std::string> globals = globals_in.empty() ? spec.signals.global_outputs : globals_in;
    for (const auto& g : globals) {
        const auto& go = spec.signals.global_outputs;
        if (std::find(go.begin(), go.end(), g) == go.end()) throw Error("'" + g + "' is not a declared global output");
    }
    const std::set<std::string> set(globals.begin(), globals.end());
    IndexedSpec out = spec;
    auto rewrite = [&](QuantifiedProperty& p) {
        p.body = map_atoms(p.body, [&](const SignalRef& r) -> Formula {
            if (!set.count(r.name)) return Formula::atom(r);
            if (r.index_equality) return Formula::atom(r.name, r.index);
            switch (p.quantifier) {
            case Quantifier::forall_i:
            case Quantifier::forall_i_ne0: return Formula::atom(r.name, IndexTerm::i());
            case Quantifier::zero_only: return Formula::atom(r.name, IndexTerm::lit(0));
            default: throw Error("cannot localize '" + r.name + "' in '" + p.label + "': no process index in scope");
            }
        });
    };
    for (auto& p : out.assumptions) rewrite(p);
    for (auto& p : out.guarantees) rewrite(p);
    for (const auto& g : globals) {
        erase_name(out.signals.global_outputs, g);
        out.signals.local_outputs.push_back(g);
    }
    validate(out);
    return out;
}

std::vector<QuantifiedProperty> tr_guarantees() {
    const Formula tok = Formula::atom(kTok, IndexTerm::i());
    const Formula snd = Formula::atom(kSend, IndexTerm::i());
    const Formula prev = Formula::atom(kSend, IndexTerm::i_minus_1());
    using F = Formula;
    return {
        {Quantifier::forall_i, F::G(F::implies(snd, tok)), "TR1"},
        {Quantifier::forall_i, F::G(F::implies(F::conj(tok, F::neg(snd)), F::X(tok))), "TR2"},
        {Quantifier::forall_i, F::G(F::implies(F::conj(F::neg(tok), F::neg(prev)), F::X(F::neg(tok)))), "TR3"},
        {Quantifier::forall_i, F::G(F::implies(tok, F::F(snd))), "TR4"},
    };
}

IndexedSpec add_tr_guarantees(const IndexedSpec& spec) {
    IndexedSpec out = spec;
    std::set<std::string> have;
    for (const auto& g : spec.guarantees)
        if (g.is_tr()) have.insert(g.label);
    for (auto& tr : tr_guarantees())
        if (!have.count(tr.label)) out.guarantees.push_back(std::move(tr));
    return out;
}

Formula Obligation::formula() const {
    std::vector<Formula> p, c;
    for (const auto& x : premises) p.push_back(x.body);
    for (const auto& x : conclusions) c.push_back(x.body);
    return Formula::implies(Formula::conj_all(p), Formula::conj_all(c));
}

IndexedSpec LocalizedSpec::as_indexed() const {
    IndexedSpec out;
    out.signals = signals;
    for (const auto& o : obligations) out.guarantees.push_back({quantifier, o.formula(), o.name});
    return out;
}

std::vector<QuantifiedProperty> LocalizedSpec::per_conclusion() const {
    std::vector<QuantifiedProperty> out;
    for (const auto& o : obligations) {
        std::vector<Formula> p;
        for (const auto& x : o.premises) p.push_back(x.body);
        const Formula prem = Formula::conj_all(p);
        for (const auto& c : o.conclusions)
            out.push_back({quantifier, p.empty() ? c.body : Formula::implies(prem, c.body), o.name + ":" + c.label});
    }
    return out;
}

LocalizedSpec localize_assumptions(const IndexedSpec& spec, const LocalizeOptions& opt) {
    LocalizedSpec out;
    out.signals = spec.signals;
    if (!spec.signals.global_outputs.empty()) throw Error("localize_assumptions: localize global outputs first");
    bool zero = false, indexed = false;
    for (const auto* v : {&spec.assumptions, &spec.guarantees})
        for (const auto& p : *v) {
            if (p.quantifier == Quantifier::forall_ij) throw Error("localize_assumptions: 2-indexed property '" + p.label + "'");
            if (p.quantifier == Quantifier::zero_only) zero = true;
            if ((p.quantifier == Quantifier::forall_i || p.quantifier == Quantifier::forall_i_ne0) && !p.is_tr())
                indexed = true;
        }
    if (zero && indexed) throw Error("localize_assumptions: split the 0-process specification first");
    out.quantifier = zero ? Quantifier::zero_only : Quantifier::forall_i;
    const IndexTerm me = zero ? IndexTerm::lit(0) : IndexTerm::i();

    std::vector<QuantifiedProperty> tr, gua;
    for (const auto& g : spec.guarantees) {
        if (!g.is_tr()) {
            gua.push_back(g);
            continue;
        }
        QuantifiedProperty t = g;
        if (zero) {
            // instantiate at 0; SEND(i-1) stays as the predecessor reference
            t.body = map_atoms(g.body, [](const SignalRef& r) {
                if (r.index.kind == IndexTerm::Kind::var_i) return Formula::atom(r.name, IndexTerm::lit(0));
                return Formula::atom(r);
            });
            t.quantifier = Quantifier::zero_only;
        }
        tr.push_back(std::move(t));
    }
    std::set<std::string> tr_labels;
    for (const auto& t : tr) tr_labels.insert(t.label);
    for (const char* l : {"TR1", "TR2", "TR3", "TR4"})
        if (!tr_labels.count(l)) throw Error(std::string("localize_assumptions: missing ") + l);

    const Formula gf_tok = Formula::G(Formula::F(Formula::atom(kTok, me)));
    std::vector<QuantifiedProperty> ass_tr, ass_gua;
    bool has_gf_tok = false;
    for (const auto& a : spec.assumptions) {
        if (a.quantifier == Quantifier::unquantified)
            for (const auto& r : atoms_of(a.body))
                if (!spec.signals.is_global(r.name) || spec.signals.kind(r.name) != SignalKind::input)
                    throw Error("localize_assumptions: global assumption '" + a.label + "' mentions non-global '" + r.name + "'");
        if (a.body == gf_tok) has_gf_tok = true;
        else ass_tr.push_back(a);
        ass_gua.push_back(a);
    }
    if (!has_gf_tok) ass_gua.push_back({out.quantifier, gf_tok, "GF_TOK"});

    if (opt.grant_signal && spec.signals.kind(*opt.grant_signal) == SignalKind::output &&
        spec.signals.is_local(*opt.grant_signal)) {
        const Formula g12 = Formula::G(Formula::implies(Formula::atom(*opt.grant_signal, me), Formula::atom(kTok, me)));
        const bool present = std::any_of(gua.begin(), gua.end(),
                                         [&](const QuantifiedProperty& g) { return g.label == "G12" || g.body == g12; });
        if (!present) gua.push_back({out.quantifier, g12, "G12"});
    }
    out.obligations.push_back({"TR", ass_tr, tr});
    out.obligations.push_back({"GUA", ass_gua, gua});
    return out;
}

Formula HubObligation::formula() const {
    std::vector<Formula> p, c;
    for (const auto& x : premises) p.push_back(x.formula);
    for (const auto& x : conclusions) c.push_back(x.formula);
    return Formula::implies(Formula::conj_all(p), Formula::conj_all(c));
}

Formula HubSpec::formula() const {
    std::vector<Formula> fs;
    for (const auto& o : obligations) fs.push_back(o.formula());
    return Formula::conj_all(fs);
}

HubSpec hub_abstraction(const LocalizedSpec& spec) {
    const Signals& s = spec.signals;
    if (!s.global_outputs.empty()) throw Error("hub_abstraction: localize global outputs first");
    if (spec.quantifier != Quantifier::forall_i && spec.quantifier != Quantifier::zero_only)
        throw Error("hub_abstraction: spec is not 1-indexed");
    auto drop = [&](const SignalRef& r, const std::string& label) -> Formula {
        const auto fail = [&](const std::string& why) -> Formula {
            throw Error("hub_abstraction: spec is not 1-indexed ('" + label + "': " + why + ")");
        };
        if (r.index_equality) return fail(atom_key(r) + " needs localization");
        switch (r.index.kind) {
        case IndexTerm::Kind::none:
            if (s.is_local(r.name)) return fail("local signal " + r.name + " without index");
            return Formula::atom(r.name);
        case IndexTerm::Kind::var_i: return Formula::atom(r.name);
        case IndexTerm::Kind::literal:
            if (r.index.literal == 0 && spec.quantifier == Quantifier::zero_only) return Formula::atom(r.name);
            return fail("refers to another process: " + atom_key(r));
        case IndexTerm::Kind::var_i_minus_1:
            if (r.name == kSend) return Formula::atom(kRcv);
            return fail("refers to the predecessor: " + atom_key(r));
        case IndexTerm::Kind::var_j: return fail("2-indexed atom " + atom_key(r));
        }
        return fail("unexpected atom");
    };
    HubSpec out;
    for (const auto& n : s.local_inputs)
        if (n != kRcv) out.inputs.push_back(n);
    for (const auto& n : s.global_inputs) out.inputs.push_back(n);
    out.inputs.push_back(kRcv);
    for (const auto& n : s.local_outputs)
        if (n != kTok && n != kSend) out.outputs.push_back(n);
    out.outputs.push_back(kTok);
    out.outputs.push_back(kSend);
    const Formula tok = Formula::atom(kTok), rcv = Formula::atom(kRcv);
    for (const auto& o : spec.obligations) {
        HubObligation h;
        h.name = o.name;
        for (const auto& p : o.premises)
            h.premises.push_back({p.label, map_atoms(p.body, [&](const SignalRef& r) { return drop(r, p.label); })});
        h.premises.push_back({"HUB1", Formula::G(Formula::F(Formula::disj(tok, rcv)))});
        h.premises.push_back({"HUB2", Formula::G(Formula::implies(tok, Formula::neg(rcv)))});
        for (const auto& c : o.conclusions)
            h.conclusions.push_back({c.label, map_atoms(c.body, [&](const SignalRef& r) { return drop(r, c.label); })});
        out.obligations.push_back(std::move(h));
    }
    return out;
}

IndexedSpec with_assumption(const IndexedSpec& spec, const Formula& indexed, const std::string& label) {
    bool zero = false, indexed_props = false;
    for (const auto* v : {&spec.assumptions, &spec.guarantees})
        for (const auto& p : *v) {
            if (p.quantifier == Quantifier::zero_only) zero = true;
            if (p.quantifier == Quantifier::forall_i || p.quantifier == Quantifier::forall_i_ne0) indexed_props = true;
        }
    IndexedSpec out = spec;
    if (zero && !indexed_props) out.assumptions.push_back({Quantifier::zero_only, at_zero(indexed, label), label});
    else out.assumptions.push_back({Quantifier::forall_i, indexed, label});
    validate(out);
    return out;
}

LocalizedSpec prepare_localized(const IndexedSpec& spec, const LocalizeOptions& opt) {
    IndexedSpec s = spec.signals.global_outputs.empty() ? spec : localize_global_outputs(spec);
    return localize_assumptions(add_tr_guarantees(s), opt);
}

HubSpec prepare_hub(const IndexedSpec& spec, const LocalizeOptions& opt) {
    return hub_abstraction(prepare_localized(spec, opt));
}

}  // namespace ringsynth
