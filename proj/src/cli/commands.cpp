#include "plf/cli.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "plf/depth1.hpp"
#include "plf/formula.hpp"
#include "plf/kripke.hpp"
#include "plf/plfcheck.hpp"
#include "plf/quantum.hpp"
#include "plf/scenario.hpp"

namespace plf::cli {

nlohmann::json RunReport::to_json() const {
    return {{"command", command}, {"inputs", inputs}, {"verdicts", verdicts}, {"exit_code", exit_code}};
}

namespace {

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return "sha256:" + hex;
}

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path, std::istream& in) {
    std::ostringstream ss;
    if (path == "-") {
        ss << in.rdbuf();
        return ss.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path + "'");
    ss << f.rdbuf();
    return ss.str();
}

nlohmann::json parse_json_text(const std::string& text, const std::string& path) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << text;
}

std::string pretty(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string format_prob(double p) {
    if (std::abs(p) <= 1e-12) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", p);
    return buf;
}

RunReport input_error(RunReport r, std::ostream& err, const std::string& msg) {
    err << "error: " << msg << "\n";
    r.verdicts["error"] = msg;
    r.exit_code = kInputError;
    return r;
}

nlohmann::json core_to_json(const Depth1Problem& p, const UnsatCore& core) {
    ValuationGrid grid(p.domains());
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : core.steps) {
        nlohmann::json pts = nlohmann::json::array();
        for (auto i : s.points) pts.push_back(grid.describe(i));
        const auto& c = p.clauses()[s.clause];
        steps.push_back({{"clause", s.clause},
                         {"kind", to_string(c.kind)},
                         {"label", c.label},
                         {"formula", render(c.to_modal())},
                         {"stage", s.deflation ? "deflation" : "filter"},
                         {"removed", pts}});
    }
    const auto& req = p.clauses()[core.required_clause];
    return {{"uncovered", {{"clause", core.required_clause}, {"label", req.label}, {"formula", render(req.to_modal())}}},
            {"steps", steps}};
}

nlohmann::json worlds_to_json(const Depth1Problem& p, const std::vector<std::size_t>& points) {
    ValuationGrid grid(p.domains());
    nlohmann::json out = nlohmann::json::array();
    for (auto i : points) out.push_back(grid.describe(i));
    return out;
}

// Both routes, with the agreement check that guards the whole tool.
struct DualVerdict {
    Verdict table;
    Depth1Problem problem;
    SatResult modal;
};

DualVerdict decide_both(const Behavior& beh, std::ostream& err) {
    DualVerdict d{plf_feasible(beh), encode(beh), {}};
    d.modal = solve_depth1(d.problem);
    if (d.table.feasible != d.modal.satisfiable()) {
        err << "internal error: extended-table route says " << (d.table.feasible ? "feasible" : "infeasible")
            << " but modal route says " << (d.modal.satisfiable() ? "sat" : "unsat") << "\n";
        std::abort();
    }
    if (d.modal.satisfiable() && !verify_witness(d.problem, *d.modal.model)) {
        err << "internal error: modal witness fails re-verification\n";
        std::abort();
    }
    if (d.table.feasible && !validate_extended_table(*d.table.witness, beh)) {
        err << "internal error: extended-table witness fails validation\n";
        std::abort();
    }
    return d;
}

}  // namespace

// ---------------------------------------------------------------------------

RunReport cmd_eval(const EvalOptions& opt, Streams io) {
    RunReport r{"eval", {}, nlohmann::json::object(), kOk};
    try {
        std::string text = slurp(opt.model_file, io.in);
        r.inputs[opt.model_file] = sha256_hex(text);
        KripkeModel m = model_from_json(parse_json_text(text, opt.model_file));
        Formula f = parse_formula(opt.formula);
        r.verdicts["formula"] = render(f);
        bool result;
        if (opt.validity) {
            result = valid(m, f);
            r.verdicts["valid"] = result;
        } else {
            if (!opt.world) throw InputError("a world is required unless --validity is given");
            if (!m.has_world(*opt.world)) throw InputError("unknown world '" + *opt.world + "'");
            result = evaluate(m, *opt.world, f);
            r.verdicts["world"] = *opt.world;
            r.verdicts["holds"] = result;
        }
        io.out << (result ? "true" : "false") << "\n";
        r.exit_code = result ? kOk : kNegative;
    } catch (const InputError& e) {
        return input_error(std::move(r), io.err, e.what());
    } catch (const FormatError& e) {
        return input_error(std::move(r), io.err, e.what());
    } catch (const SyntaxError& e) {
        return input_error(std::move(r), io.err, e.what());
    }
    return r;
}

RunReport cmd_check(const CheckOptions& opt, Streams io) {
    RunReport r{"check", {}, nlohmann::json::object(), kOk};
    std::optional<Behavior> beh;
    try {
        if (opt.mode != "pns" && opt.mode != "plf" && opt.mode != "modal")
            throw InputError("mode must be pns, plf or modal");
        std::string text = slurp(opt.behavior_file, io.in);
        r.inputs[opt.behavior_file] = sha256_hex(text);
        beh = behavior_from_json(parse_json_text(text, opt.behavior_file));
    } catch (const InputError& e) {
        return input_error(std::move(r), io.err, e.what());
    } catch (const InvalidBehavior& e) {
        return input_error(std::move(r), io.err, e.what());
    }
    r.verdicts["mode"] = opt.mode;

    try {
        if (opt.mode == "pns") {
            PnsReport rep = check_pns(*beh);
            r.verdicts["pns"] = pns_report_to_json(rep);
            if (rep.holds) {
                io.out << "possibilistic no-signalling holds\n";
            } else {
                io.out << "possibilistic no-signalling violated:\n";
                for (const auto& v : rep.violations)
                    io.out << "  " << v.party << "=" << v.value << " possible at (x,y)=(" << v.first.first << ","
                           << v.first.second << ") but not at (" << v.second.first << "," << v.second.second
                           << "), or vice versa\n";
            }
            if (opt.out) write_file(*opt.out, pretty(r.verdicts["pns"]));
            r.exit_code = rep.holds ? kOk : kNegative;
            return r;
        }

        DualVerdict d = decide_both(*beh, io.err);
        r.verdicts["feasible"] = d.table.feasible;
        r.verdicts["modal"] = d.modal.satisfiable() ? "sat" : "unsat";
        nlohmann::json artifact;
        if (opt.mode == "plf") {
            if (d.table.feasible) {
                io.out << "feasible: an extended table over the friends' outcomes exists\n";
                artifact = {{"feasible", true}, {"witness", extended_table_to_json(*d.table.witness)}};
            } else {
                io.out << "infeasible: no extended table reproduces the behavior\n";
                io.out << trace_to_text(*beh, *d.table.trace);
                artifact = {{"feasible", false}, {"trace", trace_to_json(*beh, *d.table.trace)}};
                r.verdicts["branches"] = d.table.trace->branches.size();
            }
        } else {
            if (d.modal.satisfiable()) {
                io.out << "sat: " << d.modal.model->size() << " accessible worlds\n";
                artifact = {{"satisfiable", true}, {"worlds", worlds_to_json(d.problem, *d.modal.model)}};
            } else {
                const auto& req = d.problem.clauses()[d.modal.core->required_clause];
                io.out << "unsat: " << render(req.to_modal()) << " cannot be witnessed ("
                       << d.modal.core->steps.size() << " core steps)\n";
                artifact = {{"satisfiable", false}, {"core", core_to_json(d.problem, *d.modal.core)}};
            }
        }
        if (opt.out) write_file(*opt.out, pretty(artifact));
        r.exit_code = d.table.feasible ? kOk : kNegative;
    } catch (const InputError& e) {
        return input_error(std::move(r), io.err, e.what());
    }
    return r;
}

RunReport cmd_hardy(const HardyOptions& opt, Streams io) {
    RunReport r{"hardy", {}, nlohmann::json::object(), kOk};
    if (!(opt.epsilon > 0.0 && opt.epsilon <= 1e-3))
        return input_error(std::move(r), io.err, "--epsilon must lie in (0, 1e-3]");
    ProbTable t = born_table(hardy_state());
    Behavior beh = possibilistic_collapse(t, opt.epsilon);

    const Cell headline[] = {{1, 1, 1, 1}, {0, 1, 1, 2}, {1, 0, 2, 1}, {1, 1, 2, 2}};
    std::string line;
    nlohmann::json hv = nlohmann::json::object();
    for (const auto& c : headline) {
        std::string key = "P(" + std::to_string(c.a) + "," + std::to_string(c.b) + "|" + std::to_string(c.x) + "," +
                          std::to_string(c.y) + ")";
        if (!line.empty()) line += "  ";
        line += key + "=" + format_prob(t.at(c));
        hv[key] = t.at(c);
    }
    r.verdicts["headline"] = hv;
    r.verdicts["epsilon"] = opt.epsilon;
    r.verdicts["impossible_cells"] = beh.impossible_cells().size();

    try {
        if (opt.out == "-") {
            io.out << behavior_to_json(beh).dump(2) << "\n";
            io.err << line << "\n";
        } else {
            std::filesystem::path dir(opt.out);
            write_file((dir / "hardy_probabilities.json").string(), pretty(prob_table_to_json(t)));
            write_file((dir / "hardy_behavior.json").string(), pretty(behavior_to_json(beh)));
            io.out << line << "\n";
        }
    } catch (const InputError& e) {
        return input_error(std::move(r), io.err, e.what());
    }
    return r;
}

namespace {

struct NamedEvent {
    const char* name;
    Cell cell;
};

// The four events of the Hardy argument.
constexpr NamedEvent kEvents[] = {
    {"E1", {1, 1, 2, 2}}, {"E2", {0, 1, 1, 2}}, {"E3", {1, 0, 2, 1}}, {"E4", {1, 1, 1, 1}}};

std::string event_name(const Cell& c) {
    for (const auto& e : kEvents)
        if (e.cell == c) return e.name;
    return to_string(c);
}

std::string world_text(int a, int b, int c, int d, int x, int y) {
    return "(A=" + std::to_string(a) + ",B=" + std::to_string(b) + ",C=" + std::to_string(c) +
           ",D=" + std::to_string(d) + ",X=" + std::to_string(x) + ",Y=" + std::to_string(y) + ")";
}

}  // namespace

RunReport cmd_prove(const ProveOptions& opt, Streams io) {
    RunReport r{"prove", {}, nlohmann::json::object(), kOk};
    std::vector<NamedEvent> drops;
    for (const auto& e : kEvents) {
        if (std::string(e.name) == "E1") continue;
        if (!opt.drop || *opt.drop == e.name) drops.push_back(e);
    }
    if (opt.drop && drops.empty()) return input_error(std::move(r), io.err, "--drop takes E2, E3 or E4");

    bool ok = true;
    auto expect = [&](bool cond, const std::string& what) {
        io.out << (cond ? "  [ok] " : "  [FAILED] ") << what << "\n";
        ok = ok && cond;
    };

    Behavior beh = hardy_behavior();
    Depth1Problem problem = encode(beh);

    if (!opt.drop) {
        io.out << "Hardy behavior: impossible cells";
        for (const auto& c : beh.impossible_cells()) io.out << " " << event_name(c) << to_string(c);
        io.out << "; E1" << to_string(kEvents[0].cell) << " possible\n";
        PnsReport pns = check_pns(beh);
        expect(pns.holds, "possibilistic no-signalling holds");
        r.verdicts["pns"] = pns.holds;

        SatResult sat = solve_depth1(problem);
        expect(!sat.satisfiable(), "modal constraints at w0 are unsatisfiable");
        r.verdicts["modal"] = sat.satisfiable() ? "sat" : "unsat";
        if (sat.core) {
            const auto& req = problem.clauses()[sat.core->required_clause];
            io.out << "  uncovered: " << render(req.to_modal()) << "\n";
            r.verdicts["core"] = core_to_json(problem, *sat.core);
        }

        // World network: w1 witnesses E1 with some C,D; w2..w4 move X and/or Y to the
        // reading setting while C,D stay fixed, and reading copies C into A, D into B.
        io.out << "World network from w0:\n";
        const auto& cfg = beh.config();
        for (int c : cfg.a_values) {
            for (int d : cfg.b_values) {
                struct W {
                    const char* name;
                    int a, b, x, y;
                } ws[] = {{"w1", 1, 1, 2, 2}, {"w2", c, 1, 1, 2}, {"w3", 1, d, 2, 1}, {"w4", c, d, 1, 1}};
                io.out << "  C=" << c << ",D=" << d << ":";
                bool blocked = false;
                for (const auto& w : ws) {
                    Cell cell{w.a, w.b, w.x, w.y};
                    io.out << " " << w.name << "=" << world_text(w.a, w.b, c, d, w.x, w.y);
                    if (!beh.possible(cell)) {
                        io.out << " contradicts ~<>" << event_name(cell) << "\n";
                        blocked = true;
                        break;
                    }
                }
                if (!blocked) io.out << " (no contradiction)\n";
                expect(blocked, "C=" + std::to_string(c) + ",D=" + std::to_string(d) + " is ruled out");
            }
        }

        Verdict v = plf_feasible(beh);
        expect(!v.feasible, "no extended table exists");
        r.verdicts["feasible"] = v.feasible;
        if (v.trace) {
            io.out << trace_to_text(beh, *v.trace);
            bool replays = true;
            for (const auto& br : v.trace->branches) replays = replays && replay_branch(beh, v.trace->target, br);
            expect(replays, "every elimination branch replays");
            r.verdicts["trace"] = trace_to_json(beh, *v.trace);
        }
    }

    nlohmann::json relax = nlohmann::json::object();
    for (const auto& e : drops) {
        io.out << "Dropping ~<>" << e.name << to_string(e.cell) << ":\n";
        Depth1Problem relaxed = problem.without_label(cell_label(e.cell));
        SatResult sat = solve_depth1(relaxed);
        expect(sat.satisfiable(), "relaxed constraints are satisfiable");
        bool verified = sat.satisfiable() && verify_witness(relaxed, *sat.model);
        expect(verified, "witness re-verified by the Kripke evaluator");
        nlohmann::json entry{{"satisfiable", sat.satisfiable()}, {"verified", verified}};
        if (sat.model) {
            entry["worlds"] = worlds_to_json(relaxed, *sat.model);
            if (opt.drop) {
                ValuationGrid grid(relaxed.domains());
                io.out << "  witness worlds accessible from w0:\n";
                for (std::size_t n = 0; n < sat.model->size(); ++n)
                    io.out << "    w" << n + 1 << ": " << grid.describe((*sat.model)[n]) << "\n";
            } else {
                io.out << "  witness with " << sat.model->size() << " accessible worlds\n";
            }
        }
        relax[e.name] = entry;
    }
    r.verdicts["relaxations"] = relax;
    r.verdicts["all_expectations_hold"] = ok;
    io.out << (ok ? "All expectations hold.\n" : "Some expectations FAILED.\n");
    r.exit_code = ok ? kOk : kNegative;
    return r;
}

RunReport cmd_parse(const std::string& formula, Streams io) {
    RunReport r{"parse", {}, nlohmann::json::object(), kOk};
    try {
        Formula f = parse_formula(formula);
        r.verdicts["rendered"] = render(f);
        r.verdicts["ast"] = dump_ast(f);
        io.out << render(f) << "\n" << dump_ast(f) << "\n";
    } catch (const SyntaxError& e) {
        r.verdicts["offset"] = e.offset();
        r.verdicts["expected"] = e.expected();
        return input_error(std::move(r), io.err, e.what());
    }
    return r;
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, Streams io) {
    CLI::App app{"Possibilistic Local Friendliness checker"};
    app.require_subcommand(1);
    bool json = false;
    std::optional<std::string> out;
    app.add_flag("--json", json, "Print a machine-readable run report");

    EvalOptions eval_opt;
    std::vector<std::string> eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate a modal formula on a Kripke model");
    eval->add_option("model", eval_opt.model_file, "Kripke model JSON")->required();
    eval->add_option("args", eval_args, "[world] formula")->required()->expected(1, 2);
    eval->add_flag("--validity", eval_opt.validity, "Check the formula at every world");
    eval->add_flag("--json", json);

    CheckOptions check_opt;
    auto* check = app.add_subcommand("check", "Check a behavior for PNS or PLF feasibility");
    check->add_option("behavior", check_opt.behavior_file, "Behavior JSON, or - for stdin")->required();
    check->add_option("--mode", check_opt.mode, "pns | plf | modal")->check(CLI::IsMember({"pns", "plf", "modal"}));
    check->add_option("--out", out, "Write witness, trace or report JSON here");
    check->add_flag("--json", json);

    HardyOptions hardy_opt;
    std::optional<std::string> hardy_out;
    auto* hardy = app.add_subcommand("hardy", "Compute the Hardy model and its behavior");
    hardy->add_option("--epsilon", hardy_opt.epsilon, "Possibility threshold");
    hardy->add_option("--out", hardy_out, "Output directory, or - to stream the behavior to stdout");
    hardy->add_flag("--json", json);

    ProveOptions prove_opt;
    std::optional<std::string> drop;
    auto* prove = app.add_subcommand("prove", "Reproduce the no-go argument end to end");
    prove->add_option("--drop", drop, "Only run the relaxation without this impossibility")
        ->check(CLI::IsMember({"E2", "E3", "E4"}));
    prove->add_flag("--json", json);

    std::string formula;
    auto* parse = app.add_subcommand("parse", "Parse a formula and echo it with its syntax tree");
    parse->add_option("formula", formula)->required();
    parse->add_flag("--json", json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        io.out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        io.out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        io.err << "error: " << e.what() << "\n";
        return kInputError;
    }

    std::ostringstream discard;
    Streams text_io{io.in, json ? static_cast<std::ostream&>(discard) : io.out, io.err};
    RunReport report;
    if (*eval) {
        if (eval_args.size() == 2) {
            eval_opt.world = eval_args[0];
            eval_opt.formula = eval_args[1];
        } else {
            eval_opt.formula = eval_args[0];
        }
        report = cmd_eval(eval_opt, text_io);
    } else if (*check) {
        check_opt.out = out;
        report = cmd_check(check_opt, text_io);
    } else if (*hardy) {
        if (hardy_out) hardy_opt.out = *hardy_out;
        // The behavior stream is the product of `--out -`; keep it on stdout.
        Streams hio{io.in, hardy_opt.out == "-" ? io.out : text_io.out, io.err};
        report = cmd_hardy(hardy_opt, hio);
        if (json && hardy_opt.out == "-") {
            io.err << report.to_json().dump(2) << "\n";
            return report.exit_code;
        }
    } else if (*prove) {
        prove_opt.drop = drop;
        report = cmd_prove(prove_opt, text_io);
    } else if (*parse) {
        report = cmd_parse(formula, text_io);
    }
    if (json) io.out << report.to_json().dump(2) << "\n";
    return report.exit_code;
}

}  // namespace plf::cli
