#include "ringsynth/synth.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>

#include "ringsynth/checker.hpp"

namespace ringsynth {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

int index_of(const std::vector<std::string>& v, const std::string& s) {
    const auto it = std::find(v.begin(), v.end(), s);
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
}

bool is_invariant(const Formula& f) { return f.op() == Op::globally && is_propositional(f.lhs()); }

bool only_inputs(const Formula& f, const std::vector<std::string>& inputs) {
    for (const auto& a : atoms_of(f))
        if (!contains(inputs, a.name)) return false;
    return true;
}

/// Literal conjuncts of a top-level conjunction (name -> value).
std::map<std::string, bool> unit_literals(const Formula& f) {
    std::map<std::string, bool> out;
    std::vector<Formula> todo{f};
    while (!todo.empty()) {
        Formula g = todo.back();
        todo.pop_back();
        if (g.op() == Op::and_) {
            todo.push_back(g.lhs());
            todo.push_back(g.rhs());
        } else if (g.is_atom()) {
            out[g.signal().name] = true;
        } else if (g.op() == Op::not_ && g.lhs().is_atom()) {
            out[g.lhs().signal().name] = false;
        }
    }
    return out;
}

Formula substitute_constants(const Formula& f, const std::map<std::string, bool>& values) {
    if (values.empty()) return f;
    return simplify(map_atoms(f, [&](const SignalRef& r) {
        const auto it = values.find(r.name);
        if (it == values.end() || !r.index.is_none()) return Formula::atom(r);
        return it->second ? Formula::tt() : Formula::ff();
    }));
}

/// Inputs fixed by the letter; TOK fixed when known.
Formula restrict(const Formula& f, const std::vector<std::string>& inputs, Letter in, std::optional<bool> tok) {
    return simplify(map_atoms(f, [&](const SignalRef& r) {
        const int k = index_of(inputs, r.name);
        if (k >= 0) return ((in >> k) & 1) ? Formula::tt() : Formula::ff();
        if (tok && r.name == kTok) return *tok ? Formula::tt() : Formula::ff();
        return Formula::atom(r);
    }));
}

bool satisfiable(const Formula& f) {
    std::vector<std::string> names;
    for (const auto& a : atoms_of(f)) names.push_back(atom_key(a));
    if (names.size() > 24) return true;  // conservative
    std::map<std::string, int> idx;
    for (std::size_t k = 0; k < names.size(); ++k) idx[names[k]] = static_cast<int>(k);
    const CompiledLabel c(f, idx);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << names.size()); ++v)
        if (c.eval(v)) return true;
    return false;
}

}  // namespace

EncodingPlan plan_encoding(const HubSpec& spec, bool direct) {
    EncodingPlan plan;
    plan.inputs = spec.inputs;
    plan.outputs = spec.outputs;
    if (!direct || spec.obligations.empty()) {
        plan.negated_general = Formula::neg(spec.formula());
        for (const auto& o : spec.obligations)
            for (const auto& c : o.conclusions) plan.automaton_labels.push_back(o.name + ":" + c.label);
        return plan;
    }
    auto kind = [&](const SignalRef& r) {
        if (contains(spec.inputs, r.name)) return SignalKind::input;
        if (contains(spec.outputs, r.name)) return SignalKind::output;
        return SignalKind::unknown;
    };
    // invariant premises present in every obligation
    for (const auto& p : spec.obligations.front().premises) {
        if (!is_invariant(p.formula)) continue;
        const bool everywhere = std::all_of(spec.obligations.begin(), spec.obligations.end(), [&](const HubObligation& o) {
            return std::any_of(o.premises.begin(), o.premises.end(), [&](const HubProperty& q) { return q.formula == p.formula; });
        });
        const bool dup = std::any_of(plan.invariants.begin(), plan.invariants.end(),
                                     [&](const HubProperty& q) { return q.formula == p.formula; });
        if (everywhere && !dup) plan.invariants.push_back(p);
    }
    std::map<std::string, bool> units;
    for (const auto& inv : plan.invariants)
        if (only_inputs(inv.formula, spec.inputs))
            for (const auto& [k, v] : unit_literals(inv.formula.lhs())) units[k] = v;

    std::vector<Formula> disjuncts;
    for (const auto& o : spec.obligations) {
        std::vector<Formula> prem, concl;
        for (const auto& p : o.premises) {
            const bool inv = std::any_of(plan.invariants.begin(), plan.invariants.end(),
                                         [&](const HubProperty& q) { return q.formula == p.formula; });
            if (!inv) prem.push_back(substitute_constants(p.formula, units));
        }
        for (const auto& c : o.conclusions) {
            if (classify_direct(c.formula, kind) != DirectClass::general) {
                plan.betas.push_back({c.label, substitute_constants(c.formula, units)});
                continue;
            }
            concl.push_back(substitute_constants(c.formula, units));
            plan.automaton_labels.push_back(o.name + ":" + c.label);
        }
        if (concl.empty()) continue;
        disjuncts.push_back(Formula::conj(Formula::conj_all(prem), Formula::neg(Formula::conj_all(concl))));
    }
    plan.negated_general = simplify(Formula::disj_all(disjuncts));
    return plan;
}

Nba plan_automaton(const EncodingPlan& plan) {
    Nba nba = ltl_to_nba(plan.negated_general);
    if (plan.invariants.empty()) return nba;
    std::vector<Formula> invs;
    for (const auto& i : plan.invariants) invs.push_back(i.formula.lhs());
    const Formula inv = Formula::conj_all(invs);
    std::vector<Nba::Edge> keep;
    for (const auto& e : nba.edges)
        if (satisfiable(Formula::conj(e.label, inv))) keep.push_back(e);
    nba.edges = std::move(keep);
    return trim(nba);
}

int SynthesisInstance::rcv_bit() const { return index_of(inputs, kRcv); }

SynthesisInstance make_instance(const EncodingPlan& plan, const Nba& nba, int bound, bool hardcode_token,
                                std::optional<PinnedPrefix> pinned) {
    SynthesisInstance inst;
    inst.inputs = plan.inputs;
    inst.outputs = plan.outputs;
    inst.nba = nba;
    inst.bound = bound;
    inst.hardcode_token = hardcode_token;
    std::vector<Formula> invs;
    for (const auto& i : plan.invariants) invs.push_back(i.formula.lhs());
    inst.invariant = Formula::conj_all(invs);
    inst.betas = plan.betas;
    inst.pinned = std::move(pinned);
    if (bound < 2) throw Error("bound must be at least 2");
    if (inst.rcv_bit() < 0 || !contains(inst.outputs, kTok) || !contains(inst.outputs, kSend))
        throw Error("hub signals must include RCV, TOK and SEND");
    if (inst.inputs.size() > 16) throw Error("too many inputs for explicit letters");
    return inst;
}

namespace {

struct Encoder {
    const SynthesisInstance& inst;
    int b;
    Letter letters;
    Letter rcv_mask;

    explicit Encoder(const SynthesisInstance& i)
        : inst(i), b(i.bound), letters(i.num_letters()), rcv_mask(Letter{1} << i.rcv_bit()) {}

    std::optional<bool> known_tok(int q) const {
        if (!inst.hardcode_token) return std::nullopt;
        return q != 0;
    }
    SExpr delta(int q, Letter in) const { return sx({"delta", sx_int(q), sx_int(in)}); }
    static SExpr rho(int a, const SExpr& s) { return sx({"rho_" + std::to_string(a), s}); }

    SExpr tok_at(const SExpr& s) const {
        if (!inst.hardcode_token) return sx({"out_TOK", s});
        if (s.is_atom()) return SExpr(s.atom == "0" ? "false" : "true");
        return sx_not(sx({"=", s, "0"}));
    }
    SExpr out_at(const std::string& name, const SExpr& s) const {
        if (name == kTok) return tok_at(s);
        return sx({"out_" + name, s});
    }
    SExpr sends(int q) const { return out_at(kSend, sx_int(q)); }

    /// Boolean term over the outputs of `s` (inputs already substituted).
    SExpr outputs_term(const Formula& f, const SExpr& s) const {
        return to_sexpr(f, [&](const SignalRef& r) -> SExpr {
            if (!contains(inst.outputs, r.name)) throw Error("encoding: unexpected atom '" + r.name + "'");
            return out_at(r.name, s);
        });
    }

    /// beta(i, out(q), out(delta(q, i))).
    SExpr beta_term(const Formula& f, int q, Letter in, bool next) const {
        switch (f.op()) {
        case Op::true_: return SExpr("true");
        case Op::false_: return SExpr("false");
        case Op::atom: {
            const auto& n = f.signal().name;
            if (const int k = index_of(inst.inputs, n); k >= 0) {
                if (next) throw Error("direct guarantee reads a next input: " + n);
                return SExpr(((in >> k) & 1) ? "true" : "false");
            }
            if (!contains(inst.outputs, n)) throw Error("direct guarantee mentions undeclared '" + n + "'");
            return out_at(n, next ? delta(q, in) : sx_int(q));
        }
        case Op::not_: return sx_not(beta_term(f.lhs(), q, in, next));
        case Op::and_: return sx_and({beta_term(f.lhs(), q, in, next), beta_term(f.rhs(), q, in, next)});
        case Op::or_: return sx_or({beta_term(f.lhs(), q, in, next), beta_term(f.rhs(), q, in, next)});
        case Op::implies: return sx_or({sx_not(beta_term(f.lhs(), q, in, next)), beta_term(f.rhs(), q, in, next)});
        case Op::iff: return sx({"=", beta_term(f.lhs(), q, in, next), beta_term(f.rhs(), q, in, next)});
        case Op::next:
            if (next) throw Error("direct guarantee nests X");
            return beta_term(f.lhs(), q, in, true);
        default: throw Error("direct guarantee is not of the form G beta: " + f.to_string());
        }
    }

    SExpr invariant_term(int q, Letter in) const {
        return outputs_term(restrict(inst.invariant, inst.inputs, in, known_tok(q)), sx_int(q));
    }
};

}  // namespace

SmtProblem build_core_constraints(const SynthesisInstance& inst) {
    const Encoder enc(inst);
    const int b = inst.bound;
    const Letter L = inst.num_letters();
    const Nba& nba = inst.nba;
    SmtProblem p;
    p.header_comments.push_back("bounded synthesis query: " + std::to_string(b) + " states, " +
                                std::to_string(nba.num_states) + " automaton states, " + std::to_string(L) + " letters");
    std::string ins = "inputs:";
    for (const auto& i : inst.inputs) ins += " " + i;
    p.header_comments.push_back(ins);
    p.functions.push_back({"delta", {{0, b - 1}, {0, static_cast<std::int64_t>(L) - 1}}, false,
                           std::pair<std::int64_t, std::int64_t>{0, b - 1}});
    for (const auto& o : inst.outputs)
        if (o != kTok || !inst.hardcode_token) p.functions.push_back({"out_" + o, {{0, b - 1}}, true, std::nullopt});
    // accepting cycles stay inside one automaton SCC: only SCCs with an
    // accepting state get ranks, the others a reachability flag
    const auto comp = state_sccs(nba);
    std::vector<bool> ranked(static_cast<std::size_t>(nba.num_states), false);
    {
        std::vector<bool> cyclic(static_cast<std::size_t>(nba.num_states)), acc(static_cast<std::size_t>(nba.num_states));
        for (const auto& e : nba.edges)
            if (comp[static_cast<std::size_t>(e.src)] == comp[static_cast<std::size_t>(e.dst)])
                cyclic[static_cast<std::size_t>(comp[static_cast<std::size_t>(e.src)])] = true;
        for (int a = 0; a < nba.num_states; ++a)
            if (nba.accepting[static_cast<std::size_t>(a)]) acc[static_cast<std::size_t>(comp[static_cast<std::size_t>(a)])] = true;
        for (int a = 0; a < nba.num_states; ++a) {
            const auto c = static_cast<std::size_t>(comp[static_cast<std::size_t>(a)]);
            ranked[static_cast<std::size_t>(a)] = cyclic[c] && acc[c];
        }
    }
    const std::int64_t rho_max = static_cast<std::int64_t>(b) * nba.num_states;
    for (int a = 0; a < nba.num_states; ++a) {
        if (!ranked[static_cast<std::size_t>(a)]) {
            p.functions.push_back({"reach_" + std::to_string(a), {{0, b - 1}}, true, std::nullopt});
            continue;
        }
        FunDecl f{"rho_" + std::to_string(a), {{0, b - 1}}, false, std::nullopt};
        if (inst.rho_range) f.range = std::pair<std::int64_t, std::int64_t>{-1, rho_max};
        p.functions.push_back(f);
    }
    auto reached = [&](int a, const SExpr& s) {
        if (ranked[static_cast<std::size_t>(a)]) return sx({">=", Encoder::rho(a, s), "0"});
        return sx({"reach_" + std::to_string(a), s});
    };

    // token partition and conditions (ii)-(vi), (a)
    if (!inst.hardcode_token) {
        p.assertions.push_back(enc.tok_at("1"));
        p.assertions.push_back(sx_not(enc.tok_at("0")));
    }
    Letter first_plain = 0;
    while (first_plain & enc.rcv_mask) ++first_plain;
    for (int q = 0; q < b; ++q) {
        const SExpr qs = sx_int(q);
        const SExpr tq = enc.tok_at(qs);
        const SExpr snd = enc.sends(q);
        if (tq.is_atom() && tq.atom == "false") p.assertions.push_back(sx_not(snd));
        else if (!(tq.is_atom() && tq.atom == "true")) p.assertions.push_back(sx({"=>", snd, tq}));
        for (Letter in = 0; in < L; ++in) {
            const SExpr d = enc.delta(q, in);
            if (in & enc.rcv_mask) {
                // only meaningful without the token
                if (tq.is_atom() && tq.atom == "true") continue;
                if (tq.is_atom()) p.assertions.push_back(enc.tok_at(d));
                else p.assertions.push_back(sx({"=>", sx_not(tq), enc.tok_at(d)}));
                continue;
            }
            p.assertions.push_back(sx({"=>", snd, sx_not(enc.tok_at(d))}));
            p.assertions.push_back(sx({"=>", sx_not(snd), sx({"=", enc.tok_at(d), tq})}));
            if (in != first_plain) p.assertions.push_back(sx({"=>", snd, sx({"=", d, enc.delta(q, first_plain)})}));
        }
    }

    // states from `first` on are interchangeable: number them in BFS-forest order
    const int first = std::max(2, inst.pinned ? inst.pinned->model.num_states() : 0);
    if (inst.symmetry_breaking && first < b) {
        p.functions.push_back({"edge", {{0, b - 1}, {0, b - 1}}, true, std::nullopt});
        p.functions.push_back({"parent", {{0, b - 1}}, false, std::pair<std::int64_t, std::int64_t>{0, b - 1}});
        for (int q = first; q < b; ++q) {
            const SExpr qs = sx_int(q);
            for (int src = 0; src < q; ++src) {
                std::vector<SExpr> hits;
                const bool tok = enc.known_tok(src).value_or(false);
                for (Letter in = 0; in < L; ++in)
                    if (!(tok && (in & enc.rcv_mask))) hits.push_back(sx({"=", enc.delta(src, in), qs}));
                const SExpr e = sx({"edge", sx_int(src), qs});
                p.assertions.push_back(sx({"=", e, sx_or(std::move(hits))}));
                p.assertions.push_back(sx({"=>", e, sx({"<=", sx({"parent", qs}), sx_int(src)})}));
                p.assertions.push_back(sx({"=>", sx({"=", sx({"parent", qs}), sx_int(src)}), e}));
            }
            // parent(q) = q: q starts a new BFS tree
            p.assertions.push_back(sx({"<=", sx({"parent", qs}), qs}));
            if (q + 1 < b) p.assertions.push_back(sx({"<=", sx({"parent", qs}), sx({"parent", sx_int(q + 1)})}));
        }
    }

    // reachability of the initial pairs
    for (int a0 : nba.initial)
        for (int q0 : {0, 1}) p.assertions.push_back(reached(a0, sx_int(q0)));

    // ranking rule; residual labels cached per (edge, letter, token value)
    const auto out_edges = nba.out_edges();
    std::map<std::tuple<std::size_t, Letter, int>, Formula> cache;
    auto residual = [&](std::size_t e, Letter in, std::optional<bool> tok) -> const Formula& {
        const auto key = std::make_tuple(e, in, tok ? int(*tok) : 2);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, restrict(nba.edges[e].label, inst.inputs, in, tok)).first;
        return it->second;
    };
    for (int q = 0; q < b; ++q) {
        const SExpr qs = sx_int(q);
        const auto tok = enc.known_tok(q);
        for (Letter in = 0; in < L; ++in) {
            const SExpr inv = enc.invariant_term(q, in);
            if (inv.is_atom() && inv.atom == "false") continue;
            const SExpr d = enc.delta(q, in);
            for (int a = 0; a < nba.num_states; ++a) {
                std::map<int, std::vector<SExpr>> by_target;
                for (int ei : out_edges[static_cast<std::size_t>(a)]) {
                    const Formula& r = residual(static_cast<std::size_t>(ei), in, tok);
                    if (r.op() == Op::false_) continue;
                    by_target[nba.edges[static_cast<std::size_t>(ei)].dst].push_back(enc.outputs_term(r, qs));
                }
                const SExpr here = reached(a, qs);
                for (auto& [dst, guards] : by_target) {
                    const SExpr g = sx_or(std::move(guards));
                    if (g.is_atom() && g.atom == "false") continue;
                    SExpr concl = reached(dst, d);
                    if (ranked[static_cast<std::size_t>(a)] && comp[static_cast<std::size_t>(a)] == comp[static_cast<std::size_t>(dst)]) {
                        const char* rel = nba.accepting[static_cast<std::size_t>(dst)] ? ">" : ">=";
                        concl = sx({rel, Encoder::rho(dst, d), Encoder::rho(a, qs)});
                    }
                    p.assertions.push_back(sx({"=>", sx_and({here, inv, g}), concl}));
                }
            }
        }
    }
    return p;
}

std::vector<SExpr> build_direct_guarantees(const SynthesisInstance& inst) {
    const Encoder enc(inst);
    std::vector<SExpr> out;
    for (const auto& beta : inst.betas) {
        if (!is_invariant(beta.formula) && beta.formula.op() != Op::globally)
            throw Error("direct guarantee '" + beta.label + "' is not of the form G beta");
        const Formula body = beta.formula.lhs();
        for (int q = 0; q < inst.bound; ++q)
            for (Letter in = 0; in < inst.num_letters(); ++in) {
                const SExpr inv = enc.invariant_term(q, in);
                if (inv.is_atom() && inv.atom == "false") continue;
                const SExpr t = enc.beta_term(body, q, in, false);
                if (t.is_atom() && t.atom == "true") continue;
                out.push_back(sx_or({sx_not(inv), t}));
            }
    }
    return out;
}

std::vector<SExpr> build_pin_constraints(const SynthesisInstance& inst) {
    std::vector<SExpr> out;
    if (!inst.pinned) return out;
    const Encoder enc(inst);
    const ProcessTemplate& m = inst.pinned->model;
    if (m.num_states() > inst.bound)
        throw Error("pinned model has " + std::to_string(m.num_states()) + " states, bound is " + std::to_string(inst.bound));
    // letter translation by input names
    std::vector<int> map_bits;
    for (const auto& i : inst.inputs) {
        const int k = m.input_index(i);
        if (k < 0) throw Error("pinned model lacks input '" + i + "'");
        map_bits.push_back(k);
    }
    if (m.inputs.size() != inst.inputs.size()) throw Error("pinned model has different inputs");
    for (int q = 0; q < m.num_states(); ++q) {
        const SExpr qs = sx_int(q);
        if (inst.hardcode_token && m.token[static_cast<std::size_t>(q)] != (q != 0))
            throw Error("pinned model does not match the hardcoded token partition");
        for (const auto& o : inst.outputs) {
            if (o == kTok && inst.hardcode_token) continue;
            const SExpr v = enc.out_at(o, qs);
            out.push_back(m.output(q, o) ? v : sx_not(v));
        }
        for (Letter in = 0; in < inst.num_letters(); ++in) {
            NamedLetter named;
            Letter theirs = 0;
            for (std::size_t k = 0; k < inst.inputs.size(); ++k)
                if ((in >> k) & 1) {
                    named.insert(inst.inputs[k]);
                    theirs |= Letter{1} << map_bits[k];
                }
            if (!eval_label(inst.pinned->a_prev, named)) continue;
            const auto& succ = m.successors[static_cast<std::size_t>(q)][theirs];
            if (succ.size() != 1) continue;
            out.push_back(sx({"=", enc.delta(q, in), sx_int(succ.front())}));
        }
    }
    return out;
}

SmtProblem encode(const SynthesisInstance& inst) {
    SmtProblem p = build_core_constraints(inst);
    for (auto& c : build_direct_guarantees(inst)) p.assertions.push_back(std::move(c));
    for (auto& c : build_pin_constraints(inst)) p.assertions.push_back(std::move(c));
    return p;
}

ProcessTemplate extract_template(const SmtModel& model, const SynthesisInstance& inst) {
    std::vector<std::string> outs;
    for (const auto& o : inst.outputs)
        if (o != kTok) outs.push_back(o);
    ProcessTemplate t = ProcessTemplate::make(inst.inputs, outs, inst.bound);
    const Letter rcv = Letter{1} << inst.rcv_bit();
    for (int q = 0; q < inst.bound; ++q) {
        const auto qi = static_cast<std::size_t>(q);
        t.token[qi] = inst.hardcode_token ? q != 0 : model.truth("out_TOK", {q});
        for (std::size_t k = 0; k < outs.size(); ++k) t.label[qi][k] = model.truth("out_" + outs[k], {q});
    }
    for (int q = 0; q < inst.bound; ++q)
        for (Letter in = 0; in < inst.num_letters(); ++in) {
            if (t.token[static_cast<std::size_t>(q)] && (in & rcv)) continue;
            const auto d = model.value("delta", {q, static_cast<std::int64_t>(in)});
            if (d < 0 || d >= inst.bound) throw Error("model maps delta out of range");
            t.add_transition(q, in, static_cast<int>(d));
        }
    t.initial = {1, 0};
    for (int q = 0; q < inst.bound; ++q) t.state_names[static_cast<std::size_t>(q)] = "t" + std::to_string(q);
    return t;
}

RecheckReport recheck(const ProcessTemplate& t, const SynthesisInstance& inst, const HubSpec* full_spec) {
    RecheckReport rep;
    auto fail = [&](std::string m) {
        rep.ok = false;
        rep.problems.push_back(std::move(m));
    };
    for (const auto& v : check_wellformed(t, true)) fail("condition (" + v.condition + "): " + v.message);
    if (!rep.ok) return rep;

    auto named = [&](int q, Letter in) {
        NamedLetter l;
        for (std::size_t k = 0; k < t.inputs.size(); ++k)
            if ((in >> k) & 1) l.insert(t.inputs[k]);
        for (const auto& o : inst.outputs)
            if (t.output(q, o)) l.insert(o);
        return l;
    };
    const auto env = ring_environment_filter(t);
    const Formula inv = inst.invariant;
    HubSystem::LetterFilter filter = [&](int q, Letter in) { return env(q, in) && eval_label(inv, named(q, in)); };

    if (inst.nba.num_states > 0 && !inst.nba.initial.empty()) {
        std::vector<Component> comps{{inst.nba, -1}};
        HubSystem sys(t, component_atoms(comps), filter);
        if (!find_accepting_run(sys, comps, false).empty) fail("the automaton accepts a run of the template");
    }
    for (const auto& beta : inst.betas) {
        const Formula body = beta.formula.lhs();
        for (int q = 0; q < t.num_states(); ++q)
            for (Letter in = 0; in < t.num_letters(); ++in) {
                if (!filter(q, in)) continue;
                const int q2 = t.next(q, in);
                const NamedLetter now = named(q, in);
                const NamedLetter later = named(q2, 0);
                const Formula ground = map_atoms(body, [](const SignalRef& r) { return Formula::atom(r); });
                // evaluate with X reading the successor's outputs
                std::function<bool(const Formula&, bool)> ev = [&](const Formula& f, bool nx) -> bool {
                    switch (f.op()) {
                    case Op::true_: return true;
                    case Op::false_: return false;
                    case Op::atom: return (nx ? later : now).count(f.signal().name) > 0;
                    case Op::not_: return !ev(f.lhs(), nx);
                    case Op::and_: return ev(f.lhs(), nx) && ev(f.rhs(), nx);
                    case Op::or_: return ev(f.lhs(), nx) || ev(f.rhs(), nx);
                    case Op::implies: return !ev(f.lhs(), nx) || ev(f.rhs(), nx);
                    case Op::iff: return ev(f.lhs(), nx) == ev(f.rhs(), nx);
                    case Op::next: return ev(f.lhs(), true);
                    default: throw Error("unexpected operator in direct guarantee");
                    }
                };
                if (!ev(ground, false))
                    fail("direct guarantee " + beta.label + " fails at " + t.state_names[static_cast<std::size_t>(q)] +
                         " letter " + std::to_string(in));
            }
    }
    if (full_spec) {
        std::vector<Component> comps{{ltl_to_nba(Formula::neg(full_spec->formula())), -1}};
        if (comps[0].nba.num_states > 0 && !comps[0].nba.initial.empty()) {
            HubSystem sys(t, component_atoms(comps), env);
            if (!find_accepting_run(sys, comps, false).empty) fail("the template violates the hub specification");
        }
    }
    return rep;
}

namespace {

struct Attempt {
    BoundAttempt info;
    std::optional<ProcessTemplate> model;
    std::string diagnostics;
};

Attempt attempt_bound(const EncodingPlan& plan, const Nba& nba, int bound, const SynthOptions& opt, const HubSpec& spec) {
    Attempt at;
    at.info.bound = bound;
    std::optional<PinnedPrefix> pin = opt.pinned;
    if (pin && pin->model.num_states() > bound) {
        at.info.verdict = SolverVerdict::unsat;
        at.diagnostics = "bound below the pinned model";
        return at;
    }
    SynthesisInstance inst = make_instance(plan, nba, bound, opt.hardcode_token, pin);
    inst.symmetry_breaking = opt.symmetry_breaking;
    const SmtProblem problem = encode(inst);
    at.info.assertions = problem.assertions.size();
    const SolverResult r = run_solver(problem.to_smtlib(), opt.solver_cmd, opt.timeout);
    at.info.verdict = r.verdict;
    at.info.seconds = r.seconds;
    at.diagnostics = r.diagnostics;
    if (r.verdict != SolverVerdict::sat) return at;
    const SmtModel model = parse_model(r.model_text, problem);
    if (const auto bad = failing_assertions(problem, model); !bad.empty())
        throw Error("internal: solver model violates " + std::to_string(bad.size()) + " emitted assertions");
    ProcessTemplate t = extract_template(model, inst);
    const auto rep = recheck(t, inst, opt.full_recheck ? &spec : nullptr);
    if (!rep.ok) throw Error("internal: extracted template fails recheck: " + rep.problems.front());
    at.model = std::move(t);
    return at;
}

}  // namespace

SynthesisResult synthesize(const HubSpec& spec, const SynthOptions& opt) {
    SynthesisResult res;
    const EncodingPlan plan = plan_encoding(spec, opt.direct_encoding);
    const Nba nba = plan_automaton(plan);
    res.nba_states = nba.num_states;
    if (opt.log)
        opt.log("automaton: " + std::to_string(nba.num_states) + " states, " + std::to_string(nba.edges.size()) +
                " edges; direct guarantees: " + std::to_string(plan.betas.size()));
    const int step = std::max(1, opt.parallel_bounds);
    for (int lo = std::max(2, opt.min_bound); lo <= opt.max_bound; lo += step) {
        std::vector<std::future<Attempt>> jobs;
        for (int b = lo; b < lo + step && b <= opt.max_bound; ++b)
            jobs.push_back(std::async(step > 1 ? std::launch::async : std::launch::deferred,
                                      [&, b] { return attempt_bound(plan, nba, b, opt, spec); }));
        for (auto& j : jobs) {
            Attempt at = j.get();
            res.attempts.push_back(at.info);
            if (opt.log)
                opt.log("bound " + std::to_string(at.info.bound) + ": " + to_string(at.info.verdict) + " (" +
                        std::to_string(at.info.assertions) + " assertions, " + std::to_string(at.info.seconds) + " s)");
            if (res.status == SynthesisResult::Status::ok) continue;
            if (at.model) {
                res.status = SynthesisResult::Status::ok;
                res.model = std::move(at.model);
            } else if (at.info.verdict != SolverVerdict::unsat) {
                res.status = SynthesisResult::Status::solver_failure;
                res.diagnostics = std::string(to_string(at.info.verdict)) + " at bound " + std::to_string(at.info.bound) +
                                  ": " + at.diagnostics;
                return res;
            }
        }
        if (res.status == SynthesisResult::Status::ok) return res;
    }
    res.status = SynthesisResult::Status::no_model;
    return res;
}

Formula hub_input_constraint(const Formula& indexed) {
    const Formula body = indexed.op() == Op::globally ? indexed.lhs() : indexed;
    if (!is_propositional(body)) throw Error("phase assumption must be G of a boolean formula: " + indexed.to_string());
    return map_atoms(body, [](const SignalRef& r) {
        if (r.index.kind == IndexTerm::Kind::var_j || r.index.kind == IndexTerm::Kind::var_i_minus_1)
            throw Error("phase assumption refers to another process: " + atom_key(r));
        return Formula::atom(r.name);
    });
}

std::vector<Phase> amba_phases() {
    return {
        {"locked BURST4 requests", parse_ltl("G((HBUSREQ(i) -> HLOCK(i)) && HBURST==BURST4)")},
        {"BURST4 requests", parse_ltl("G(HBURST==BURST4)")},
        {"full specification", std::nullopt},
    };
}

std::vector<PhaseOutcome> run_phases(const IndexedSpec& spec, const std::vector<Phase>& phases, SynthOptions opt,
                                     const std::function<void(const PhaseOutcome&)>& on_phase) {
    std::vector<PhaseOutcome> out;
    std::optional<PinnedPrefix> pin = opt.pinned;
    for (const auto& ph : phases) {
        PhaseOutcome po;
        po.phase = ph;
        const IndexedSpec s = ph.assumption ? with_assumption(spec, *ph.assumption, "PHASE") : spec;
        SynthOptions o = opt;
        o.pinned = pin;
        if (pin) o.min_bound = std::max(o.min_bound, pin->model.num_states());
        const auto start = std::chrono::steady_clock::now();
        po.result = synthesize(prepare_hub(s), o);
        po.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(po);
        if (on_phase) on_phase(po);
        if (po.result.status != SynthesisResult::Status::ok) break;
        pin = PinnedPrefix{*po.result.model, ph.assumption ? hub_input_constraint(*ph.assumption) : Formula::tt()};
    }
    return out;
}

}  // namespace ringsynth
