#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "ringsynth/pipeline.hpp"

using namespace ringsynth;

namespace {

constexpr int kOk = 0;
constexpr int kNoModel = 10;
constexpr int kSolverFailure = 20;
constexpr int kFailed = 1;

struct SolverFlags {
    int max_bound = 8;
    int min_bound = 2;
    bool no_direct = false;
    bool no_hardcode = false;
    std::string solver_cmd = default_solver_command();
    double timeout = 0;
    int parallel = 1;
    bool quick_recheck = false;

    void add(CLI::App* app) {
        app->add_option("--max-bound", max_bound, "largest template size tried")->check(CLI::Range(2, 64));
        app->add_option("--min-bound", min_bound, "smallest template size tried")->check(CLI::Range(2, 64));
        app->add_flag("--no-direct-encoding", no_direct, "put every guarantee into the automaton");
        app->add_flag("--no-hardcode-token", no_hardcode, "let the solver choose the token states");
        app->add_option("--solver-cmd", solver_cmd, "SMT-LIB 2 solver reading the script on stdin");
        app->add_option("--timeout", timeout, "per-bound solver timeout in seconds (0: none)");
        app->add_option("--parallel-bounds", parallel, "bounds solved concurrently")->check(CLI::Range(1, 64));
        app->add_flag("--quick-recheck", quick_recheck, "skip the re-check against the full hub specification");
    }

    SynthOptions options() const {
        SynthOptions o;
        o.direct_encoding = !no_direct;
        o.hardcode_token = !no_hardcode;
        o.min_bound = min_bound;
        o.max_bound = max_bound;
        o.solver_cmd = solver_cmd;
        o.timeout = std::chrono::milliseconds(static_cast<long long>(timeout * 1000));
        o.parallel_bounds = parallel;
        o.full_recheck = !quick_recheck;
        o.log = [](const std::string& m) { std::cerr << m << '\n'; };
        return o;
    }
};

int exit_code(const SynthesisResult& r) {
    switch (r.status) {
    case SynthesisResult::Status::ok: return kOk;
    case SynthesisResult::Status::no_model: return kNoModel;
    default: return kSolverFailure;
    }
}

const char* status_name(const SynthesisResult& r) {
    switch (r.status) {
    case SynthesisResult::Status::ok: return "ok";
    case SynthesisResult::Status::no_model: return "no_model";
    default: return "solver_failure";
    }
}

void write_model(const ProcessTemplate& t, const std::string& path) {
    save_template(t, path);
    std::ofstream(path + ".dot") << to_dot(t);
    std::cerr << "wrote " << path << " and " << path << ".dot\n";
}

std::vector<int> split_sizes(int lo, int hi) {
    std::vector<int> v;
    for (int n = lo; n <= hi; ++n) v.push_back(n);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parameterized synthesis of token-ring process templates"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "synthesize a process template");
    std::string spec_file, preset, phase_assumption, pin_file, pin_assumption = "true", out = "model.json";
    SolverFlags sf;
    synth->add_option("--spec", spec_file, "specification file");
    synth->add_option("--preset", preset, "built-in specification");
    synth->add_option("--phase-assumption", phase_assumption, "extra assumption G(...) over process i");
    synth->add_option("--pin", pin_file, "model whose states are kept");
    synth->add_option("--pin-assumption", pin_assumption, "letters on which pinned transitions are kept");
    synth->add_option("--out", out, "model file (DOT goes next to it)");
    sf.add(synth);

    // verify
    auto* verify = app.add_subcommand("verify", "model check a template in rings");
    std::string model_file, zero_file, mode = "async";
    int ring_size = 2, ring_max = 0, extra = 0;
    bool cutoff = false, all_modes = false;
    verify->add_option("--model", model_file, "template file")->required();
    verify->add_option("--zero-model", zero_file, "template of process 0");
    verify->add_option("--spec", spec_file, "specification file");
    verify->add_option("--preset", preset, "built-in specification");
    verify->add_option("--ring-size", ring_size, "ring size")->check(CLI::Range(1, 16));
    verify->add_option("--ring-max", ring_max, "check every size from --ring-size up to this")->check(CLI::Range(1, 16));
    verify->add_flag("--cutoff", cutoff, "check each property from its cutoff");
    verify->add_option("--extra", extra, "sizes checked beyond the cutoff")->check(CLI::Range(0, 8));
    verify->add_option("--mode", mode, "sync, interleaving or async");
    verify->add_flag("--all-modes", all_modes, "check all three timings");

    // amba
    auto* amba = app.add_subcommand("amba", "decompositional AMBA arbiter synthesis");
    std::string process = "non0", phase = "all", out_dir = ".";
    bool reduced_burst = false, verify_final = false;
    amba->add_option("--process", process, "non0 or zero")->check(CLI::IsMember({"non0", "zero"}));
    amba->add_option("--phase", phase, "1, 2, 3 or all")->check(CLI::IsMember({"1", "2", "3", "all"}));
    amba->add_flag("--reduced-burst", reduced_burst, "burst lengths 2/3 (zero process)");
    amba->add_option("--pin", pin_file, "model of the previous phase (single phase runs)");
    amba->add_option("--out-dir", out_dir, "directory for phase models");
    amba->add_flag("--verify", verify_final, "model check the last model at the cutoff");
    sf.add(amba);

    // encode
    auto* enc = app.add_subcommand("encode", "write the SMT-LIB query for one bound");
    int bound = 2;
    enc->add_option("--spec", spec_file, "specification file");
    enc->add_option("--preset", preset, "built-in specification");
    enc->add_option("--phase-assumption", phase_assumption, "extra assumption G(...) over process i");
    enc->add_option("--bound", bound, "template size")->check(CLI::Range(2, 64));
    enc->add_option("--out", out, "output file ('-' for stdout)");
    enc->add_flag("--no-direct-encoding", sf.no_direct, "put every guarantee into the automaton");
    enc->add_flag("--no-hardcode-token", sf.no_hardcode, "let the solver choose the token states");

    // transform
    auto* tr = app.add_subcommand("transform", "print an intermediate form of a specification");
    std::string stage = "hub";
    tr->add_option("--spec", spec_file, "specification file");
    tr->add_option("--preset", preset, "built-in specification");
    tr->add_option("--stage", stage, "split, localize, hub, plan or automaton")
        ->check(CLI::IsMember({"split", "localize", "hub", "plan", "automaton"}));
    tr->add_flag("--no-direct-encoding", sf.no_direct, "plan without direct encoding");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) {
            IndexedSpec spec = load_spec_or_preset(spec_file, preset);
            if (!phase_assumption.empty()) spec = with_assumption(spec, parse_ltl(phase_assumption), "PHASE");
            SynthOptions o = sf.options();
            if (!pin_file.empty()) {
                o.pinned = PinnedPrefix{load_template(pin_file), parse_ltl(pin_assumption)};
                o.min_bound = std::max(o.min_bound, o.pinned->model.num_states());
            }
            const auto r = synthesize(prepare_hub(spec), o);
            double total = 0;
            std::cout << "bound\tverdict\tseconds\tassertions\n";
            for (const auto& a : r.attempts) {
                total += a.seconds;
                std::cout << a.bound << '\t' << to_string(a.verdict) << '\t' << std::fixed << std::setprecision(3)
                          << a.seconds << '\t' << a.assertions << '\n';
            }
            std::cout << "# status " << status_name(r) << ", automaton " << r.nba_states << " states, " << total
                      << " s";
            if (r.model) std::cout << ", model " << r.model->num_states() << " states";
            std::cout << '\n';
            if (r.model) write_model(*r.model, out);
            if (!r.diagnostics.empty()) std::cerr << r.diagnostics << '\n';
            return exit_code(r);
        }

        if (*verify) {
            const IndexedSpec spec = load_spec_or_preset(spec_file, preset);
            const ProcessTemplate model = load_template(model_file);
            std::optional<ProcessTemplate> zero;
            if (!zero_file.empty()) zero = load_template(zero_file);
            VerifyOptions vo;
            vo.sizes = split_sizes(ring_size, std::max(ring_size, ring_max));
            vo.timings = all_modes ? std::vector<Timing>{Timing::synchronous, Timing::interleaving,
                                                         Timing::fully_asynchronous}
                                   : std::vector<Timing>{parse_timing(mode)};
            vo.cutoff = cutoff;
            vo.extra = extra;
            const VerifyReport rep = verify_template(spec, model, zero ? &*zero : nullptr, vo);
            for (const auto& v : rep.wellformed) std::cerr << "condition (" << v.condition << "): " << v.message << '\n';
            if (!rep.wellformed.empty()) return kFailed;
            std::cout << "property\tquantifier\tsize\ttiming\tholds\tnote\n";
            std::cout << "(a)\t-\t-\t-\t" << (rep.condition_a ? "yes" : "no") << "\tcondition (a)\n";
            std::cout << "(dagger)\t-\t-\t-\t" << (rep.token_release ? "yes" : "no") << "\ttoken release\n";
            const std::set<std::string> globals(spec.signals.global_inputs.begin(), spec.signals.global_inputs.end());
            for (const auto& p : rep.properties) {
                std::cout << p.label << '\t' << to_string(p.quantifier) << '\t' << p.size << '\t' << to_string(p.timing)
                          << '\t' << (p.holds ? "yes" : "no") << '\t' << p.note << '\n';
                if (p.counterexample) {
                    const Ring ring = zero ? Ring(*zero, model, p.size, p.timing, globals)
                                           : Ring(model, p.size, p.timing, globals);
                    std::cerr << "counterexample for " << p.label << " (n=" << p.size << ", " << to_string(p.timing)
                              << "):\n"
                              << format_lasso(ring, *p.counterexample);
                }
            }
            for (const auto& d : rep.cutoff_disagreements) std::cerr << "verdicts differ across sizes: " << d << '\n';
            return rep.ok() ? kOk : kFailed;
        }

        if (*amba) {
            const std::string name =
                process == "non0" ? "amba_non0" : (reduced_burst ? "amba_zero_reduced_burst" : "amba_zero");
            if (process == "zero" && !reduced_burst) std::cerr << "note: original burst lengths, expect a long run\n";
            const IndexedSpec spec = builtin_corpus(name);
            auto phases = amba_phases();
            SynthOptions o = sf.options();
            if (phase != "all") {
                const auto k = static_cast<std::size_t>(std::stoi(phase) - 1);
                if (k > 0) {
                    if (pin_file.empty()) throw Error("phase " + phase + " needs --pin with the previous phase model");
                    o.pinned = PinnedPrefix{load_template(pin_file), hub_input_constraint(*phases[k - 1].assumption)};
                }
                phases = {phases[k]};
            }
            std::filesystem::create_directories(out_dir);
            std::cout << "phase\tassumption\tstatus\tseconds\tstates\tautomaton\n";
            int first = phase == "all" ? 1 : std::stoi(phase);
            std::optional<ProcessTemplate> last;
            int code = kOk;
            run_phases(spec, phases, o, [&](const PhaseOutcome& po) {
                const int idx = first++;
                std::cout << idx << '\t' << (po.phase.assumption ? po.phase.assumption->to_string() : "-") << '\t'
                          << status_name(po.result) << '\t' << std::fixed << std::setprecision(1) << po.seconds << '\t'
                          << (po.result.model ? std::to_string(po.result.model->num_states()) : "-") << '\t'
                          << po.result.nba_states << std::endl;
                if (po.result.model) {
                    write_model(*po.result.model, out_dir + "/" + process + "_phase" + std::to_string(idx) + ".json");
                    last = po.result.model;
                }
                code = exit_code(po.result);
            });
            if (code == kOk && verify_final && last) {
                VerifyOptions vo;
                vo.cutoff = true;
                const VerifyReport rep = verify_template(spec, *last, nullptr, vo);
                std::cout << "# cutoff verification: " << (rep.ok() ? "passed" : "FAILED") << '\n';
                if (!rep.ok()) code = kFailed;
            }
            return code;
        }

        if (*enc) {
            IndexedSpec spec = load_spec_or_preset(spec_file, preset);
            if (!phase_assumption.empty()) spec = with_assumption(spec, parse_ltl(phase_assumption), "PHASE");
            const EncodingPlan plan = plan_encoding(prepare_hub(spec), !sf.no_direct);
            const std::string text = encode(make_instance(plan, plan_automaton(plan), bound, !sf.no_hardcode)).to_smtlib();
            if (out == "-" || out == "model.json")
                std::cout << text;
            else
                std::ofstream(out) << text;
            return kOk;
        }

        if (*tr) {
            const IndexedSpec spec = load_spec_or_preset(spec_file, preset);
            if (stage == "split") {
                const auto s = split_zero_process(spec);
                std::cout << "# non-zero processes\n" << format_spec(s.non_zero) << "\n# process 0\n" << format_spec(s.zero);
            } else if (stage == "localize") {
                for (const auto& o : prepare_localized(spec).obligations) {
                    std::cout << "[" << o.name << "]\n";
                    for (const auto& p : o.premises) std::cout << "  assume " << format_property(p) << '\n';
                    for (const auto& p : o.conclusions) std::cout << "  ensure " << format_property(p) << '\n';
                }
            } else if (stage == "hub") {
                const HubSpec hub = prepare_hub(spec);
                std::cout << "inputs:";
                for (const auto& s : hub.inputs) std::cout << ' ' << s;
                std::cout << "\noutputs:";
                for (const auto& s : hub.outputs) std::cout << ' ' << s;
                std::cout << '\n';
                for (const auto& o : hub.obligations) {
                    std::cout << "[" << o.name << "]\n";
                    for (const auto& p : o.premises) std::cout << "  assume " << p.label << ": " << p.formula.to_string() << '\n';
                    for (const auto& p : o.conclusions) std::cout << "  ensure " << p.label << ": " << p.formula.to_string() << '\n';
                }
            } else if (stage == "plan") {
                const EncodingPlan plan = plan_encoding(prepare_hub(spec), !sf.no_direct);
                for (const auto& p : plan.invariants) std::cout << "invariant " << p.label << ": " << p.formula.to_string() << '\n';
                for (const auto& p : plan.betas) std::cout << "direct " << p.label << ": " << p.formula.to_string() << '\n';
                std::cout << "automaton: " << plan.negated_general.to_string() << '\n';
            } else {
                const EncodingPlan plan = plan_encoding(prepare_hub(spec), !sf.no_direct);
                std::cout << write_automaton(plan_automaton(plan));
            }
            return kOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailed;
    }
    return kOk;
}
