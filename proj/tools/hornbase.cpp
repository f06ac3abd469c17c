// hornbase: deductive-database front end.
//
// Commands: validate, model, query, update, compare, revise,
// check-postulates, apply, gen.
// Exit codes: 0 success, 1 no realization, 2 input error, 3 resource cap.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hornbase/generate.hpp"
#include "hornbase/revision.hpp"
#include "hornbase/view_update.hpp"

using json = nlohmann::json;
using namespace hornbase;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoRealization = 1;
constexpr int kExitInputError = 2;
constexpr int kExitResourceCap = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Atom parse_atom_text(const std::string& text) {
    // Reuse the request grammar for a single atom.
    auto req = parse_request("+ " + text + ".");
    return *req.nu_plus.begin();
}

json atom_list(const AtomSet& atoms) {
    json out = json::array();
    for (const auto& a : atoms) out.push_back(to_string(a));
    return out;
}

json result_to_json(const UpdateResult& res, UpdateAlgorithm algo) {
    json out;
    out["solutions"] = json::array();
    for (const auto& t : res.transactions) {
        json sol;
        sol["insert"] = atom_list(t.t_ins);
        sol["delete"] = atom_list(t.t_del);
        out["solutions"].push_back(std::move(sol));
    }
    out["algorithm"] = algo == UpdateAlgorithm::minimality ? "minimality" : "materialized";
    out["stats"] = {{"sld_nodes", res.stats.sld_nodes},
                    {"tableau_branches", res.stats.tableau_branches},
                    {"elapsed_ms", res.stats.elapsed_ms}};
    return out;
}

void print_result_text(const UpdateResult& res) {
    if (res.transactions.empty()) {
        std::cout << "no realization\n";
        return;
    }
    for (size_t i = 0; i < res.transactions.size(); ++i) {
        const auto& t = res.transactions[i];
        std::cout << "solution " << i << ":";
        for (const auto& a : t.t_ins) std::cout << " +" << to_string(a);
        for (const auto& a : t.t_del) std::cout << " -" << to_string(a);
        std::cout << "\n";
    }
}

UpdateRequest load_request(const std::string& arg) {
    // A request argument is a file path unless it starts with '+' or '-'.
    if (!arg.empty() && (arg[0] == '+' || arg[0] == '-')) {
        std::string text = arg;
        if (text.find('.') == std::string::npos) text += ".";
        return parse_request(text);
    }
    return parse_request(read_file(arg));
}

struct EngineFlags {
    std::string algo = "min";
    size_t max_del_repair = 4;
    size_t depth_bound = 0;  // 0: default bound
    bool trace_sld = false;
    bool trace_tableau = false;
    std::string format = "json";
    bool all = false;
    uint64_t seed = 1;
};

void add_engine_flags(CLI::App* cmd, EngineFlags& flags) {
    cmd->add_option("--algo", flags.algo, "min|mat")->check(CLI::IsMember({"min", "mat"}));
    cmd->add_option("--max-del-repair", flags.max_del_repair,
                    "cardinality cap for constraint-repair deletions");
    cmd->add_option("--depth-bound", flags.depth_bound, "SLD depth bound (0 = automatic)");
    cmd->add_flag("--trace-sld", flags.trace_sld, "dump SLD trees");
    cmd->add_flag("--trace-tableau", flags.trace_tableau, "dump update tableaux");
    cmd->add_option("--format", flags.format, "json|text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_flag("--all", flags.all, "enumerate all repair choices");
    cmd->add_option("--seed", flags.seed, "random seed");
}

void maybe_trace(const KnowledgeBase& kb, const UpdateRequest& req, const EngineFlags& flags) {
    if (flags.trace_sld) {
        size_t bound = flags.depth_bound ? flags.depth_bound : default_depth_bound(kb);
        for (const auto& a : req.nu_plus) {
            std::cerr << "% SLD tree for <- " << to_string(a) << "\n"
                      << render_sld_tree(sld_tree(kb, a, bound));
        }
        for (const auto& a : req.nu_minus) {
            std::cerr << "% SLD tree for <- " << to_string(a) << "\n"
                      << render_sld_tree(sld_tree(kb, a, bound));
        }
    }
    if (flags.trace_tableau) {
        bool minimality = flags.algo == "min";
        auto program = minimality ? idb_star(kb) : idb_plus(kb);
        for (const auto& a : req.nu_minus) {
            Tableau t = build_update_tableau(program, neg(a),
                                             minimality ? TableauMode::minimality
                                                        : TableauMode::materialized);
            if (minimality) t = strong_minimality_filter(t, kb, a);
            std::cerr << "% update tableau for -" << to_string(a) << "\n"
                      << render_tableau(t, kb);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hornbase: Horn deductive database with rational view updates"};
    app.require_subcommand(1);

    std::string db_path, request_arg, atom_arg, out_path;
    size_t solution_index = 0;
    EngineFlags flags;

    auto* validate = app.add_subcommand("validate", "parse and check a database");
    validate->add_option("db", db_path)->required();

    auto* model = app.add_subcommand("model", "print the least Herbrand model");
    model->add_option("db", db_path)->required();
    add_engine_flags(model, flags);

    auto* query = app.add_subcommand("query", "decide entailment of a ground atom");
    query->add_option("db", db_path)->required();
    query->add_option("atom", atom_arg)->required();
    add_engine_flags(query, flags);

    auto* update = app.add_subcommand("update", "compute view-update transactions");
    update->add_option("db", db_path)->required();
    update->add_option("request", request_arg)->required();
    add_engine_flags(update, flags);

    auto* compare = app.add_subcommand("compare", "diff the two algorithms' solutions");
    compare->add_option("db", db_path)->required();
    compare->add_option("request", request_arg)->required();
    add_engine_flags(compare, flags);

    auto* revise = app.add_subcommand("revise", "revise a ground fact into the database");
    revise->add_option("db", db_path)->required();
    revise->add_option("fact", atom_arg)->required();
    add_engine_flags(revise, flags);

    auto* check = app.add_subcommand("check-postulates", "evaluate KB*1..KB*7.3 for a revision");
    check->add_option("db", db_path)->required();
    check->add_option("request", atom_arg, "+atom or -atom or bare atom")->required();
    add_engine_flags(check, flags);

    auto* apply_cmd = app.add_subcommand("apply", "apply one update solution to the database");
    apply_cmd->add_option("db", db_path)->required();
    apply_cmd->add_option("request", request_arg)->required();
    apply_cmd->add_option("--index", solution_index, "solution index (default 0)");
    apply_cmd->add_option("-o,--out", out_path, "output .ddb path")->required();
    add_engine_flags(apply_cmd, flags);

    auto* gen = app.add_subcommand("gen", "generate a seeded random database");
    add_engine_flags(gen, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            std::cout << serialize_program(generate_kb(flags.seed));
            return kExitOk;
        }

        KnowledgeBase kb = parse_program(read_file(db_path));

        if (validate->parsed()) {
            std::cout << "ok: " << kb.kb_i.size() << " rules, " << kb.kb_u.size() << " facts, "
                      << kb.kb_ic.size() << " constraints\n";
            auto violations = violated_constraints(kb);
            if (!violations.empty()) {
                for (const auto& [ic, sub] : violations)
                    std::cout << "violated: " << to_string(substitute(sub, ic)) << "\n";
                return kExitInputError;
            }
            std::cout << "consistent\n";
            return kExitOk;
        }

        if (model->parsed()) {
            for (const auto& a : least_model(kb).atoms) std::cout << to_string(a) << "\n";
            return kExitOk;
        }

        if (query->parsed()) {
            Atom goal = parse_atom_text(atom_arg);
            bool holds = entails(kb, goal);
            if (flags.trace_sld) {
                size_t bound = flags.depth_bound ? flags.depth_bound : default_depth_bound(kb);
                std::cerr << render_sld_tree(sld_tree(kb, goal, bound));
            }
            std::cout << (holds ? "true" : "false") << "\n";
            return kExitOk;
        }

        UpdateOptions uopts;
        uopts.max_del_repair = flags.max_del_repair;
        uopts.depth_bound = flags.depth_bound;

        if (update->parsed() || compare->parsed() || apply_cmd->parsed()) {
            UpdateRequest req = load_request(request_arg);
            maybe_trace(kb, req, flags);

            if (compare->parsed()) {
                UpdateResult min_res = run_view_update(kb, req, UpdateAlgorithm::minimality, uopts);
                UpdateResult mat_res =
                    run_view_update(kb, req, UpdateAlgorithm::materialized, uopts);
                std::set<Transaction> min_set(min_res.transactions.begin(),
                                              min_res.transactions.end());
                std::set<Transaction> mat_set(mat_res.transactions.begin(),
                                              mat_res.transactions.end());
                json out;
                out["minimality"] = result_to_json(min_res, UpdateAlgorithm::minimality);
                out["materialized"] = result_to_json(mat_res, UpdateAlgorithm::materialized);
                json only_mat = json::array();
                for (const auto& t : mat_set)
                    if (!min_set.count(t))
                        only_mat.push_back(
                            json{{"insert", atom_list(t.t_ins)}, {"delete", atom_list(t.t_del)}});
                out["materialized_only"] = only_mat;
                std::cout << out.dump(2) << "\n";
                return min_res.realized() ? kExitOk : kExitNoRealization;
            }

            UpdateAlgorithm algo =
                flags.algo == "mat" ? UpdateAlgorithm::materialized : UpdateAlgorithm::minimality;
            UpdateResult res = run_view_update(kb, req, algo, uopts);

            if (apply_cmd->parsed()) {
                if (solution_index >= res.transactions.size()) {
                    std::cerr << "error: solution index " << solution_index << " out of range ("
                              << res.transactions.size() << " solutions)\n";
                    return kExitInputError;
                }
                // Splice the new EDB into the original file text so the IDB
                // and IC sections stay byte-identical.
                std::string text = read_file(db_path);
                SourceProgram source;
                parse_program(text, &source);
                std::string edb_block = "#EDB\n";
                for (const auto& a : res.new_edb[solution_index])
                    edb_block += to_string(a) + ".\n";
                std::string rebuilt;
                size_t edb_pos = text.find("#EDB");
                size_t edb_end = text.size();
                for (const std::string marker : {"#IDB", "#IC"}) {
                    size_t p = text.find(marker, edb_pos + 4);
                    if (p != std::string::npos && p < edb_end) edb_end = p;
                }
                if (edb_pos == std::string::npos) {
                    rebuilt = text + "\n" + edb_block;
                } else {
                    rebuilt = text.substr(0, edb_pos) + edb_block + text.substr(edb_end);
                }
                std::ofstream out(out_path);
                if (!out.good()) {
                    std::cerr << "error: cannot write " << out_path << "\n";
                    return kExitInputError;
                }
                out << rebuilt;
                return kExitOk;
            }

            if (flags.format == "text")
                print_result_text(res);
            else
                std::cout << result_to_json(res, algo).dump(2) << "\n";
            return res.realized() ? kExitOk : kExitNoRealization;
        }

        if (revise->parsed()) {
            Atom alpha = parse_atom_text(atom_arg);
            RevisionOptions ropts;
            ropts.max_del_repair = flags.max_del_repair;
            ropts.enumerate_all = flags.all;
            auto outcomes = generalized_revision_all(kb, alpha, ropts);
            json out = json::array();
            for (const auto& o : outcomes) {
                json one;
                one["kb_u"] = atom_list(o.kb_prime.kb_u);
                one["added"] = atom_list(o.applied.delta_plus);
                one["removed"] = atom_list(o.applied.delta_minus);
                one["iterations"] = o.iterations;
                out.push_back(std::move(one));
            }
            if (flags.format == "text") {
                for (const auto& o : outcomes)
                    std::cout << "kb_u = " << to_string(o.kb_prime.kb_u) << "\n";
            } else {
                std::cout << (flags.all ? out : out[0]).dump(2) << "\n";
            }
            bool changed_or_present = entails(outcomes.front().kb_prime, alpha) ||
                                      outcomes.front().kb_prime.kb_u.count(alpha);
            return changed_or_present ? kExitOk : kExitNoRealization;
        }

        if (check->parsed()) {
            std::string arg = atom_arg;
            Polarity pol = Polarity::positive;
            if (!arg.empty() && (arg[0] == '+' || arg[0] == '-')) {
                pol = arg[0] == '-' ? Polarity::negative : Polarity::positive;
                arg = arg.substr(1);
            }
            Atom a = parse_atom_text(arg);
            Literal lit{a, pol};

            RevisionOptions ropts;
            ropts.max_del_repair = flags.max_del_repair;
            UpdateOptions upd_opts;
            upd_opts.max_del_repair = flags.max_del_repair;

            KnowledgeBase kb_prime = kb;
            if (lit.positive()) {
                kb_prime = generalized_revision(kb, a, ropts).kb_prime;
            } else {
                UpdateRequest req;
                req.nu_minus.insert(a);
                UpdateResult res = run_view_update(
                    kb, req,
                    flags.algo == "mat" ? UpdateAlgorithm::materialized
                                        : UpdateAlgorithm::minimality,
                    upd_opts);
                if (!res.realized()) return kExitNoRealization;
                kb_prime.kb_u = res.new_edb.front();
            }

            PostulateOptions popts;
            popts.reviser = [&](const KnowledgeBase& base,
                                const Literal& l) -> std::optional<std::vector<AtomSet>> {
                try {
                    if (l.positive())
                        return std::vector<AtomSet>{
                            generalized_revision(base, l.atom, ropts).kb_prime.kb_u};
                    if (!base.view_predicates().count(l.atom.pred)) return std::nullopt;
                    UpdateRequest r;
                    r.nu_minus.insert(l.atom);
                    UpdateResult res = run_view_update(base, r, UpdateAlgorithm::minimality,
                                                       upd_opts);
                    return res.new_edb;
                } catch (const std::runtime_error&) {
                    return std::nullopt;
                }
            };
            auto report = check_postulates(kb, lit, kb_prime, popts);
            std::cout << report_to_json(report) << "\n";
            return report.all_pass_or_skipped() ? kExitOk : kExitNoRealization;
        }
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const semantic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const iteration_cap_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
