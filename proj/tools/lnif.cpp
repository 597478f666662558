// Command-line front end: proof search, checking, cut elimination, countermodels and LaTeX.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <future>
#include <iostream>
#include <sstream>

#include "lnif/latex.hpp"
#include "lnif/prover.hpp"
#include "lnif/semantics.hpp"
#include "lnif/serialize.hpp"
#include "lnif/transform.hpp"

using namespace lnif;
using json = nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kInput = 1, kSearch = 2, kNoModel = 3, kCheck = 4 };

// One input's result; text and json carry the same content.
struct Report {
    int code = kOk;
    std::string text;
    json data = json::object();
};

struct Common {
    std::string format = "text";
    std::string out;
    std::size_t jobs = 1;
};

Report input_error(const std::string& input, const Error& e) {
    Report r;
    r.code = kInput;
    r.text = "ERROR " + e.kind() + ": " + e.what();
    r.data = {{"input", input}, {"status", "error"}, {"error", e.kind()}, {"message", e.what()}};
    return r;
}

// Runs fn over inputs with up to jobs threads; results keep input order.
std::vector<Report> batch(const std::vector<std::string>& inputs, std::size_t jobs,
                          const std::function<Report(const std::string&)>& fn) {
    std::vector<Report> out(inputs.size());
    jobs = std::max<std::size_t>(1, jobs);
    for (std::size_t start = 0; start < inputs.size(); start += jobs) {
        std::vector<std::future<Report>> fs;
        for (std::size_t i = start; i < std::min(inputs.size(), start + jobs); ++i)
            fs.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async, fn, inputs[i]));
        for (std::size_t i = 0; i < fs.size(); ++i) out[start + i] = fs[i].get();
    }
    return out;
}

int emit(const std::vector<Report>& rs, const Common& c) {
    int code = kOk;
    for (const auto& r : rs) code = std::max(code, r.code);
    if (c.format == "json") {
        json arr = json::array();
        for (const auto& r : rs) {
            json d = r.data;
            d["exit"] = r.code;
            arr.push_back(d);
        }
        std::cout << (rs.size() == 1 ? arr[0] : arr).dump(2) << "\n";
    } else {
        for (const auto& r : rs) std::cout << r.text << (r.text.empty() || r.text.back() == '\n' ? "" : "\n");
    }
    return code;
}

Report guarded(const std::string& input, const std::function<Report()>& fn) {
    try {
        return fn();
    } catch (const InternalError& e) {
        Report r = input_error(input, e);
        r.code = kCheck;
        return r;
    } catch (const Error& e) {
        return input_error(input, e);
    }
}

std::vector<std::string> gather(std::vector<std::string> items, const std::string& list_file) {
    if (!list_file.empty()) {
        std::istringstream in(read_file(list_file));
        for (std::string line; std::getline(in, line);)
            if (!line.empty() && line[0] != '#') items.push_back(line);
    }
    return items;
}

void add_common(CLI::App* app, Common& c, bool with_out = true) {
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    if (with_out) app->add_option("-o,--output", c.out, "Output file (single input only)");
    app->add_option("--jobs", c.jobs, "Parallel inputs")->check(CLI::PositiveNumber);
}

std::string describe(const Derivation& d) {
    return "height " + std::to_string(height(d)) + ", " + std::to_string(node_count(d)) + " nodes";
}

Report write_derivation(const std::string& input, const Derivation& d, const std::string& out, json data) {
    Report r;
    std::string doc = derivation_to_json(d);
    data["input"] = input;
    data["status"] = "ok";
    data["conclusion"] = d->conclusion.str();
    data["height"] = height(d);
    data["nodes"] = node_count(d);
    if (out.empty()) {
        data["derivation"] = json::parse(doc);
        r.text = doc;
    } else {
        write_file(out, doc + "\n");
        data["file"] = out;
        r.text = "OK " + d->conclusion.str() + " (" + describe(d) + ") -> " + out;
    }
    r.data = data;
    return r;
}

Derivation load(const std::string& path) { return derivation_from_json(read_file(path)); }

Multiset formulas(const std::vector<std::string>& texts) {
    Multiset m;
    for (const auto& t : texts) ms_insert(m, parse_formula(t));
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear nested sequent prover and proof transformer for first-order Goedel logic"};
    app.require_subcommand(1);
    Common c;
    int code = kOk;

    // prove
    auto* prove_cmd = app.add_subcommand("prove", "Search for a derivation of |- F");
    std::vector<std::string> prove_inputs;
    std::string prove_list, config_path;
    std::optional<std::size_t> depth;
    bool parallel = false;
    prove_cmd->add_option("formulas", prove_inputs, "Formulas to prove");
    prove_cmd->add_option("--from", prove_list, "File with one formula per line");
    prove_cmd->add_option("--depth", depth, "Maximum derivation height");
    prove_cmd->add_option("--config", config_path, "Prover configuration file");
    prove_cmd->add_flag("--parallel", parallel, "Explore branches in parallel");
    add_common(prove_cmd, c);
    prove_cmd->callback([&] {
        auto inputs = gather(prove_inputs, prove_list);
        if (!c.out.empty() && inputs.size() != 1) throw CLI::ValidationError("-o needs exactly one formula");
        ProverConfig cfg;
        try {
            if (!config_path.empty()) cfg = parse_config(read_file(config_path));
        } catch (const Error& e) {
            code = emit({input_error(config_path, e)}, c);
            return;
        }
        if (depth) cfg.depth = *depth;
        if (parallel) cfg.parallel = true;
        code = emit(batch(inputs, c.jobs, [&](const std::string& in) {
                        return guarded(in, [&] {
                            Formula f = parse_formula(in);
                            ProveResult res = prove(f, cfg);
                            if (res.ok()) return write_derivation(in, res.proof, c.out, {{"explored", res.explored}});
                            Report r;
                            r.code = kSearch;
                            r.text = std::string("FAIL ") + failure_name(*res.failure) + ": " + res.reason;
                            r.data = {{"input", in}, {"status", "fail"}, {"failure", failure_name(*res.failure)},
                                      {"reason", res.reason}, {"explored", res.explored}};
                            return r;
                        });
                    }),
                    c);
    });

    // check
    auto* check_cmd = app.add_subcommand("check", "Check derivation files");
    std::vector<std::string> check_files;
    std::string mode_name_opt = "official";
    check_cmd->add_option("files", check_files, "Derivation files")->required();
    check_cmd->add_option("--mode", mode_name_opt, "official, extended or with-cut")
        ->check(CLI::IsMember({"official", "extended", "with-cut"}));
    add_common(check_cmd, c, false);
    check_cmd->callback([&] {
        Mode mode = *mode_from_name(mode_name_opt);
        code = emit(batch(check_files, c.jobs, [&](const std::string& path) {
                        return guarded(path, [&] {
                            Derivation d = load(path);
                            CheckResult res = check_derivation(d, mode);
                            Report r;
                            if (res.ok) {
                                r.text = "OK " + path + ": " + d->conclusion.str() + " (" + describe(d) + ")";
                                r.data = {{"input", path}, {"status", "ok"}, {"conclusion", d->conclusion.str()},
                                          {"height", height(d)}, {"nodes", node_count(d)}};
                            } else {
                                r.code = kCheck;
                                r.text = "INVALID " + path + ": " + res.kind + " at " + res.path_str() + ": " + res.message;
                                r.data = {{"input", path}, {"status", "invalid"}, {"error", res.kind},
                                          {"path", res.path}, {"message", res.message}};
                            }
                            return r;
                        });
                    }),
                    c);
    });

    // cutelim
    auto* cut_cmd = app.add_subcommand("cutelim", "Eliminate cuts from a derivation");
    std::string cut_in;
    cut_cmd->add_option("input", cut_in, "Derivation file")->required();
    add_common(cut_cmd, c);
    cut_cmd->callback([&] {
        code = emit({guarded(cut_in, [&] {
                         Derivation d = load(cut_in);
                         CutStats st;
                         Derivation out;
                         try {
                             out = eliminate_cut(d, &st);
                         } catch (const NotWithCutValid& e) {
                             Report r = input_error(cut_in, e);
                             r.code = kCheck;
                             return r;
                         }
                         return write_derivation(cut_in, out, c.out,
                                                 {{"cuts_reduced", st.cuts_reduced}, {"principal_steps", st.principal_steps},
                                                  {"permutation_steps", st.permutation_steps}});
                     })},
                    c);
    });

    // countermodel
    auto* cm_cmd = app.add_subcommand("countermodel", "Search finite linear Kripke countermodels");
    std::vector<std::string> cm_inputs;
    std::string cm_list;
    std::size_t worlds = 3, domain = 1;
    cm_cmd->add_option("formulas", cm_inputs, "Formulas");
    cm_cmd->add_option("--from", cm_list, "File with one formula per line");
    cm_cmd->add_option("--worlds", worlds, "Maximum number of worlds")->check(CLI::Range(1, 64));
    cm_cmd->add_option("--domain", domain, "Maximum domain size")->check(CLI::Range(1, 16));
    add_common(cm_cmd, c, false);
    cm_cmd->callback([&] {
        code = emit(batch(gather(cm_inputs, cm_list), c.jobs, [&](const std::string& in) {
                        return guarded(in, [&] {
                            Formula f = universal_closure(parse_formula(in));
                            Report r;
                            if (auto m = find_countermodel(f, worlds, domain)) {
                                std::string model = print_model(m->model);
                                r.text = "COUNTERMODEL " + model + "; refuted at world " + std::to_string(m->world + 1);
                                r.data = {{"input", in}, {"status", "countermodel"}, {"model", model}, {"world", m->world + 1}};
                            } else {
                                r.code = kNoModel;
                                r.text = "none within bounds (worlds <= " + std::to_string(worlds) +
                                         ", domain <= " + std::to_string(domain) + ")";
                                r.data = {{"input", in}, {"status", "none"}, {"worlds", worlds}, {"domain", domain}};
                            }
                            return r;
                        });
                    }),
                    c);
    });

    // oracle
    auto* or_cmd = app.add_subcommand("oracle", "Goedel chain validity of propositional formulas");
    std::vector<std::string> or_inputs;
    std::string or_list;
    or_cmd->add_option("formulas", or_inputs, "Formulas");
    or_cmd->add_option("--from", or_list, "File with one formula per line");
    add_common(or_cmd, c, false);
    or_cmd->callback([&] {
        code = emit(batch(gather(or_inputs, or_list), c.jobs, [&](const std::string& in) {
                        return guarded(in, [&] {
                            GoedelResult g = goedel_valid(parse_formula(in));
                            Report r;
                            r.data = {{"input", in}, {"valid", g.valid}, {"chain", g.chain}, {"witness", g.witness}};
                            r.text = (g.valid ? "VALID " : "INVALID ") + in + " (chain of " + std::to_string(g.chain + 1) + " values)";
                            for (const auto& [v, deg] : g.witness) r.text += "\n  " + v + " = " + deg;
                            return r;
                        });
                    }),
                    c);
    });

    // latex
    auto* tex_cmd = app.add_subcommand("latex", "Render a derivation as a bussproofs tree");
    std::string tex_in;
    bool fragment = false;
    tex_cmd->add_option("input", tex_in, "Derivation file")->required();
    tex_cmd->add_flag("--fragment", fragment, "Omit the document preamble");
    add_common(tex_cmd, c);
    tex_cmd->callback([&] {
        code = emit({guarded(tex_in, [&] {
                         Derivation d = load(tex_in);
                         std::string tex = derivation_to_latex(d, !fragment);
                         Report r;
                         r.data = {{"input", tex_in}, {"status", "ok"}};
                         if (c.out.empty()) {
                             r.text = tex;
                             r.data["latex"] = tex;
                         } else {
                             write_file(c.out, tex);
                             r.text = "OK " + tex_in + " -> " + c.out;
                             r.data["file"] = c.out;
                         }
                         return r;
                     })},
                    c);
    });

    // axiom
    auto* ax_cmd = app.add_subcommand("axiom", "Construct the derivation of an axiom schema instance");
    std::string ax_name;
    std::vector<std::string> ax_args;
    ax_cmd->add_option("schema", ax_name, "Schema name")->required();
    ax_cmd->add_option("--arg", ax_args, "Instances A, B, C; quantifier schemas take forall x. A(x) and B");
    add_common(ax_cmd, c);
    ax_cmd->callback([&] {
        code = emit({guarded(ax_name, [&] {
                         auto s = schema_from_name(ax_name);
                         if (!s) throw InputError("unknown schema '" + ax_name + "'");
                         AxiomArgs args = default_axiom_args(*s);
                         if (is_quantifier_schema(*s)) {
                             if (ax_args.size() > 0) {
                                 Formula q = parse_formula(ax_args[0]);
                                 if (!q.is_quant()) throw InputError("quantifier schemas take the body as 'forall x. A(x)'");
                                 args.var = q.name();
                                 args.body = q.body();
                             }
                             if (ax_args.size() > 1) args.b = parse_formula(ax_args[1]);
                         } else {
                             if (ax_args.size() > 0) args.a = parse_formula(ax_args[0]);
                             if (ax_args.size() > 1) args.b = parse_formula(ax_args[1]);
                             if (ax_args.size() > 2) args.c = parse_formula(ax_args[2]);
                         }
                         return write_derivation(ax_name, prove_axiom(*s, args), c.out, {{"schema", ax_name}});
                     })},
                    c);
    });

    // transform
    auto* tr_cmd = app.add_subcommand("transform", "Apply an admissibility or invertibility rewrite");
    std::string op, tr_in, formula_text, from_param, to_param, rule_text, param;
    std::size_t pos = 0;
    std::vector<std::size_t> ks;
    std::vector<std::string> add_l, add_r;
    tr_cmd->add_option("op", op, "Operation")
        ->required()
        ->check(CLI::IsMember({"bot-r", "rename", "iw", "ew", "lwr", "invert-left", "invert-right", "contract-left",
                               "contract-right", "merge", "normalize"}));
    tr_cmd->add_option("input", tr_in, "Derivation file")->required();
    tr_cmd->add_option("--pos", pos, "Component index (0-based)");
    tr_cmd->add_option("--formula", formula_text, "Formula acted on");
    tr_cmd->add_option("--from-param", from_param, "Parameter renamed (rename)");
    tr_cmd->add_option("--to-param", to_param, "New parameter name (rename)");
    tr_cmd->add_option("--rule", rule_text, "Right rule to invert (invert-right)");
    tr_cmd->add_option("--param", param, "Eigenvariable or witness for inversions");
    tr_cmd->add_option("--k", ks, "Copies per component (invert-left)");
    tr_cmd->add_option("--add-left", add_l, "Antecedent formulas (iw)");
    tr_cmd->add_option("--add-right", add_r, "Consequent formulas (iw)");
    add_common(tr_cmd, c);
    tr_cmd->callback([&] {
        code = emit({guarded(tr_in, [&] {
                         Derivation d = load(tr_in);
                         auto strip_hash = [](std::string p) { return !p.empty() && p[0] == '#' ? p.substr(1) : p; };
                         auto f = [&] {
                             if (formula_text.empty()) throw InputError(op + " needs --formula");
                             return parse_formula(formula_text);
                         };
                         std::vector<Derivation> outs;
                         if (op == "bot-r") outs = {admit_bot_r(d, pos)};
                         else if (op == "rename") outs = {rename_param(d, strip_hash(from_param), strip_hash(to_param))};
                         else if (op == "iw") outs = {admit_iw(d, pos, formulas(add_l), formulas(add_r))};
                         else if (op == "ew") outs = {admit_ew(d, pos)};
                         else if (op == "lwr") outs = {admit_lwr(d, pos, f())};
                         else if (op == "invert-left") outs = invert_left(d, f(), ks, strip_hash(param));
                         else if (op == "invert-right") {
                             auto tag = rule_from_name(rule_text);
                             if (!tag) throw InputError("unknown rule '" + rule_text + "'");
                             outs = invert_right(d, *tag, pos, f(), strip_hash(param));
                         } else if (op == "contract-left") outs = {admit_contraction_left(d, pos, f())};
                         else if (op == "contract-right") outs = {admit_contraction_right(d, pos, f())};
                         else if (op == "merge") outs = {admit_merge(d, pos)};
                         else outs = {normalize(d)};
                         if (outs.size() == 1) return write_derivation(tr_in, outs[0], c.out, {{"op", op}});
                         Report r;
                         r.data = {{"input", tr_in}, {"status", "ok"}, {"op", op}, {"outputs", json::array()}};
                         for (std::size_t i = 0; i < outs.size(); ++i) {
                             std::string path = c.out.empty() ? "" : c.out + "." + std::to_string(i);
                             Report one = write_derivation(tr_in, outs[i], path, {});
                             r.text += one.text + "\n";
                             r.data["outputs"].push_back(one.data);
                         }
                         return r;
                     })},
                    c);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kInput;
    } catch (const Error& e) {
        std::cerr << "ERROR " << e.kind() << ": " << e.what() << "\n";
        return kInput;
    }
    return code;
}
