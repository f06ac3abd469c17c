// View-update realization: the minimality-test variant (update tableaux with
// strong minimality) and the materialized-view variant (model-transformed
// tableaux, no minimality test), both producing transactions that satisfy the
// request and the integrity constraints.
#pragma once

#include <chrono>

#include "magic.hpp"
#include "tableau.hpp"

namespace hornbase {

struct Transaction {
    AtomSet t_ins;
    AtomSet t_del;
    auto operator<=>(const Transaction&) const = default;
    size_t size() const { return t_ins.size() + t_del.size(); }
};

inline std::string to_string(const Transaction& t) {
    return "(ins " + to_string(t.t_ins) + ", del " + to_string(t.t_del) + ")";
}

struct UpdateStats {
    size_t sld_nodes = 0;
    size_t tableau_branches = 0;
    long long elapsed_ms = 0;
};

struct UpdateResult {
    std::vector<Transaction> transactions;
    std::vector<AtomSet> new_edb;  // parallel to transactions
    UpdateStats stats;
    bool realized() const { return !transactions.empty(); }
};

enum class UpdateAlgorithm { minimality, materialized };

struct UpdateOptions {
    size_t max_del_repair = 4;
    size_t node_cap = tableau_node_cap();
    size_t candidate_cap = 200'000;
    size_t depth_bound = 0;  // 0: |herbrand base| + goal + 1
};

namespace detail {

struct UpdateContext {
    const KnowledgeBase& kb;
    std::set<std::string> extras;
    GroundEngine eng;
    std::vector<std::pair<HornClause, std::vector<int>>> ics;  // ground IC bodies as engine ids
    std::vector<HornClause> ground_ic_list;

    UpdateContext(const KnowledgeBase& kb_, const std::set<std::string>& extras_)
        : kb(kb_), extras(extras_), eng(kb_, extras_) {
        std::set<std::string> universe = kb.constants();
        universe.insert(extras.begin(), extras.end());
        ground_ic_list = ground_ics(kb, universe);
    }

    AtomSet model(const AtomSet& facts) const { return eng.least_model(facts); }

    bool consistent(const AtomSet& facts) const {
        AtomSet m = eng.least_model(facts);
        for (const auto& ic : ground_ic_list) {
            bool violated = true;
            for (const auto& b : ic.body)
                if (!m.count(b)) {
                    violated = false;
                    break;
                }
            if (violated) return false;
        }
        return true;
    }

    std::vector<HornClause> violated(const AtomSet& facts) const {
        AtomSet m = eng.least_model(facts);
        std::vector<HornClause> out;
        for (const auto& ic : ground_ic_list) {
            bool violated_ic = true;
            for (const auto& b : ic.body)
                if (!m.count(b)) {
                    violated_ic = false;
                    break;
                }
            if (violated_ic) out.push_back(ic);
        }
        return out;
    }

    bool satisfied(const AtomSet& facts, const UpdateRequest& req) const {
        AtomSet m = eng.least_model(facts);
        for (const auto& a : req.nu_plus)
            if (!m.count(a)) return false;
        for (const auto& a : req.nu_minus)
            if (m.count(a)) return false;
        return consistent(facts);
    }
};

}  // namespace detail

// Core pipeline shared by both algorithm variants. Per deletion atom the
// update tableau contributes hitting sets, per insertion atom the seed-driven
// support search contributes insertion sets; combinations are completed
// against the request and the constraints by rounds of minimal deletions
// (cuts, repairs) and minimal re-insertions, then verified.
inline UpdateResult run_view_update(const KnowledgeBase& kb, const UpdateRequest& request,
                                    UpdateAlgorithm algo, const UpdateOptions& opts = {}) {
    auto t0 = std::chrono::steady_clock::now();
    bind_request(kb, request);

    std::set<std::string> extras;
    for (const auto& a : request.nu_plus)
        for (const auto& t : a.args) extras.insert(t.name);
    for (const auto& a : request.nu_minus)
        for (const auto& t : a.args) extras.insert(t.name);

    detail::UpdateContext ctx(kb, extras);
    UpdateResult result;

    // True-update precondition.
    for (const auto& a : request.nu_plus)
        if (ctx.eng.entails(kb.kb_u, a))
            throw precondition_error("insertion atom already derivable: " + to_string(a));
    for (const auto& a : request.nu_minus)
        if (!ctx.eng.entails(kb.kb_u, a))
            throw precondition_error("deletion atom not derivable: " + to_string(a));

    if (request.empty()) {
        result.stats.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                      std::chrono::steady_clock::now() - t0)
                                      .count();
        return result;
    }

    const bool minimality = algo == UpdateAlgorithm::minimality;

    // Deletion candidates per request atom, from the update tableau.
    std::vector<SetOfAtomSets> deletion_choices;
    auto program = minimality ? idb_star(kb, extras) : idb_plus(kb, extras);
    for (const auto& d : request.nu_minus) {
        Tableau t = build_update_tableau(
            program, neg(d), minimality ? TableauMode::minimality : TableauMode::materialized,
            opts.node_cap);
        if (minimality) t = strong_minimality_filter(t, kb, d);
        result.stats.tableau_branches += t.branches_created;
        SetOfAtomSets sets;
        for (size_t bi : t.open_branches())
            if (t.branches[bi].finished) sets.insert(branch_hitting_set(t.branches[bi], kb));
        if (sets.empty()) {  // deletion impossible
            result.stats.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::steady_clock::now() - t0)
                                          .count();
            return result;
        }
        deletion_choices.push_back(std::move(sets));
    }

    const size_t tree_bound =
        opts.depth_bound ? opts.depth_bound : default_depth_bound(kb) + 1;

    // Insertion candidates per request atom, from the seeded support search.
    std::vector<SetOfAtomSets> insertion_choices;
    for (const auto& a : request.nu_plus) {
        SldTree tree =
            sld_tree_conjunction(kb, {a}, tree_bound, SldOptions{{}, extras, opts.node_cap});
        result.stats.sld_nodes += tree.node_count();
        SetOfAtomSets sets = missing_support(tree, extras);
        if (sets.empty()) {
            result.stats.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::steady_clock::now() - t0)
                                          .count();
            return result;
        }
        insertion_choices.push_back(std::move(sets));
    }

    // Initial combinations.
    std::set<Transaction> work_seen;
    std::vector<Transaction> work;
    {
        std::vector<Transaction> partial{Transaction{}};
        for (const auto& choices : deletion_choices) {
            std::vector<Transaction> next;
            for (const auto& p : partial)
                for (const auto& d : choices) {
                    Transaction t = p;
                    t.t_del.insert(d.begin(), d.end());
                    next.push_back(std::move(t));
                }
            partial = std::move(next);
            if (partial.size() > opts.candidate_cap)
                throw resource_error("view update: candidate cap exceeded");
        }
        for (const auto& choices : insertion_choices) {
            std::vector<Transaction> next;
            for (const auto& p : partial)
                for (const auto& ins : choices) {
                    Transaction t = p;
                    t.t_ins.insert(ins.begin(), ins.end());
                    next.push_back(std::move(t));
                }
            partial = std::move(next);
            if (partial.size() > opts.candidate_cap)
                throw resource_error("view update: candidate cap exceeded");
        }
        for (auto& t : partial)
            if (work_seen.insert(t).second) work.push_back(t);
    }

    const size_t round_cap = herbrand_base(kb, extras).size() + 2;
    std::set<Transaction> pool;

    // Completion rounds: recheck each candidate against the updated state and
    // extend it by minimal cuts, repairs, or re-insertions until it verifies.
    for (size_t wi = 0; wi < work.size(); ++wi) {
        if (work.size() > opts.candidate_cap)
            throw resource_error("view update: candidate cap exceeded");
        Transaction cand = work[wi];
        // Overlapping insert/delete is contradictory by construction.
        bool overlap = false;
        for (const auto& a : cand.t_ins)
            if (cand.t_del.count(a)) {
                overlap = true;
                break;
            }
        if (overlap) continue;
        if (cand.size() > round_cap * 4) throw iteration_cap_error("view update: IC loop cap");

        AtomSet facts = kb.kb_u;
        for (const auto& d : cand.t_del) facts.erase(d);
        for (const auto& i : cand.t_ins) facts.insert(i);

        if (ctx.satisfied(facts, request)) {
            pool.insert(cand);
            continue;
        }
        AtomSet model = ctx.model(facts);
        KnowledgeBase cur = with_facts(kb, facts);
        auto enqueue = [&](Transaction t) {
            if (work_seen.insert(t).second) work.push_back(std::move(t));
        };

        // Deletions first: cut re-derived deletion atoms, then repair ICs.
        bool progressed = false;
        for (const auto& d : request.nu_minus) {
            if (!model.count(d)) continue;
            SldOptions sopts;
            sopts.extra_constants = extras;
            SldTree tree = sld_tree_conjunction(
                cur, {d}, opts.depth_bound ? opts.depth_bound : default_depth_bound(cur) + 1,
                sopts);
            result.stats.sld_nodes += tree.node_count();
            auto family = branch_explanations(tree);
            auto hs = minimal_hitting_sets(family);
            for (const auto& cut : hs.sets) {
                bool touches_ins = false;
                for (const auto& a : cut)
                    if (cand.t_ins.count(a)) touches_ins = true;
                if (touches_ins || cut.empty()) continue;
                Transaction t = cand;
                t.t_del.insert(cut.begin(), cut.end());
                enqueue(std::move(t));
            }
            progressed = true;
            break;
        }
        if (progressed) continue;

        auto violated = ctx.violated(facts);
        if (!violated.empty()) {
            AtomSet candidate_pool;
            for (const auto& ic : violated)
                for (const auto& b : ic.body) {
                    auto rel = detail::relevant_support_atoms(kb, facts, b, extras);
                    candidate_pool.insert(rel.begin(), rel.end());
                }
            for (const auto& a : cand.t_ins) candidate_pool.erase(a);
            auto valid = [&](const AtomSet& del) {
                AtomSet trial = facts;
                for (const auto& d : del) trial.erase(d);
                return ctx.consistent(trial);
            };
            auto repairs = detail::minimal_deletion_sets(candidate_pool, opts.max_del_repair, valid);
            for (const auto& rep : repairs) {
                if (rep.empty()) continue;
                Transaction t = cand;
                t.t_del.insert(rep.begin(), rep.end());
                enqueue(std::move(t));
            }
            continue;
        }

        // Re-insertions: some nu+ atom lost its support to deletions.
        std::vector<Atom> missing;
        for (const auto& a : request.nu_plus)
            if (!model.count(a)) missing.push_back(a);
        if (!missing.empty()) {
            AtomSet avoid = cand.t_del;
            auto supports =
                minimal_insertion_supports(cur, missing, avoid, extras, opts.node_cap);
            for (const auto& h : supports) {
                if (h.empty()) continue;
                Transaction t = cand;
                t.t_ins.insert(h.begin(), h.end());
                enqueue(std::move(t));
            }
        }
    }

    // Reduce (minimality mode), verify, deduplicate, order.
    std::set<Transaction> final_set;
    for (Transaction t : pool) {
        if (minimality) {
            bool changed = true;
            while (changed) {
                changed = false;
                std::vector<std::pair<bool, Atom>> members;
                for (const auto& a : t.t_ins) members.push_back({true, a});
                for (const auto& a : t.t_del) members.push_back({false, a});
                for (const auto& [is_ins, a] : members) {
                    Transaction trial = t;
                    (is_ins ? trial.t_ins : trial.t_del).erase(a);
                    AtomSet facts = kb.kb_u;
                    for (const auto& d : trial.t_del) facts.erase(d);
                    for (const auto& i : trial.t_ins) facts.insert(i);
                    if (ctx.satisfied(facts, request)) {
                        t = std::move(trial);
                        changed = true;
                        break;
                    }
                }
            }
        }
        final_set.insert(std::move(t));
    }
    if (minimality) {
        // Drop members dominated componentwise by another valid transaction.
        std::set<Transaction> reduced;
        for (const auto& t : final_set) {
            bool dominated = false;
            for (const auto& u : final_set) {
                if (u == t) continue;
                if (std::includes(t.t_ins.begin(), t.t_ins.end(), u.t_ins.begin(),
                                  u.t_ins.end()) &&
                    std::includes(t.t_del.begin(), t.t_del.end(), u.t_del.begin(),
                                  u.t_del.end())) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) reduced.insert(t);
        }
        final_set = std::move(reduced);
    }

    std::vector<Transaction> ordered(final_set.begin(), final_set.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const Transaction& a, const Transaction& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    for (const auto& t : ordered) {
        AtomSet facts = kb.kb_u;
        for (const auto& d : t.t_del) facts.erase(d);
        for (const auto& i : t.t_ins) facts.insert(i);
        result.new_edb.push_back(std::move(facts));
    }
    result.transactions = std::move(ordered);
    result.stats.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
    return result;
}

inline UpdateResult view_update_minimality(const KnowledgeBase& kb, const UpdateRequest& request,
                                           const UpdateOptions& opts = {}) {
    return run_view_update(kb, request, UpdateAlgorithm::minimality, opts);
}

inline UpdateResult view_update_materialized(const KnowledgeBase& kb, const UpdateRequest& request,
                                             const UpdateOptions& opts = {}) {
    return run_view_update(kb, request, UpdateAlgorithm::materialized, opts);
}

}  // namespace hornbase
