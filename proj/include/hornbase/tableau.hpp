// Hyper tableaux calculus over ground disjunctive programs, the IDB
// transformations relative to a reference atom set, update tableaux for
// deletion requests, strong-minimality filtering, and EDB-cut extraction.
//
// Negated atoms are literals of negative polarity; wrt the transformed
// program they are read as positive atoms of a tagged predicate, so a branch
// is inconsistent exactly when it carries both polarities of one atom.
#pragma once

#include <cstdlib>

#include "hitting.hpp"
#include "semantics.hpp"

namespace hornbase {

struct DisjunctiveClause {
    std::set<Literal> head;
    std::set<Literal> body;
    auto operator<=>(const DisjunctiveClause&) const = default;
};

inline std::string to_string(const DisjunctiveClause& c) {
    std::string s;
    bool first = true;
    for (const auto& l : c.head) {
        if (!first) s += " v ";
        s += to_string(l);
        first = false;
    }
    if (c.head.empty()) s += "[]";
    if (!c.body.empty()) {
        s += " <- ";
        first = true;
        for (const auto& l : c.body) {
            if (!first) s += ", ";
            s += to_string(l);
            first = false;
        }
    }
    return s;
}

enum class TableauMode { minimality, materialized };

struct TableauBranch {
    std::vector<Literal> literals;  // in extension order
    bool closed = false;
    bool finished = false;

    bool contains(const Literal& l) const {
        return std::find(literals.begin(), literals.end(), l) != literals.end();
    }
};

struct Tableau {
    std::vector<TableauBranch> branches;  // left-to-right order
    TableauMode mode = TableauMode::minimality;
    size_t branches_created = 0;

    std::vector<size_t> open_branches() const {
        std::vector<size_t> out;
        for (size_t i = 0; i < branches.size(); ++i)
            if (!branches[i].closed) out.push_back(i);
        return out;
    }
};

// Moves every head atom in `s` to the body negated and every body atom in `s`
// to the head negated; other literals stay where they are.
inline std::vector<DisjunctiveClause> transform_idb(const std::vector<HornClause>& ground_idb,
                                                    const AtomSet& s) {
    std::vector<DisjunctiveClause> out;
    for (const auto& c : ground_idb) {
        DisjunctiveClause d;
        if (c.head) {
            if (s.count(*c.head))
                d.body.insert(neg(*c.head));
            else
                d.head.insert(pos(*c.head));
        }
        for (const auto& b : c.body) {
            if (s.count(b))
                d.head.insert(neg(b));
            else
                d.body.insert(pos(b));
        }
        out.push_back(std::move(d));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Transformation wrt S0 = EDB u {all ground view atoms}: no facts remain.
inline std::vector<DisjunctiveClause> idb_star(const KnowledgeBase& kb,
                                               const std::set<std::string>& extra_constants = {}) {
    std::set<std::string> universe = kb.constants();
    universe.insert(extra_constants.begin(), extra_constants.end());
    AtomSet s0 = kb.kb_u;
    auto views = kb.view_predicates();
    for (const auto& a : herbrand_base(kb, extra_constants))
        if (views.count(a.pred)) s0.insert(a);
    return transform_idb(ground_rules(kb, universe), s0);
}

// Transformation wrt the least Herbrand model (the materialized view).
inline std::vector<DisjunctiveClause> idb_plus(const KnowledgeBase& kb,
                                               const std::set<std::string>& extra_constants = {}) {
    std::set<std::string> universe = kb.constants();
    universe.insert(extra_constants.begin(), extra_constants.end());
    detail::GroundEngine eng(kb, extra_constants);
    AtomSet model = eng.least_model(kb.kb_u);
    return transform_idb(ground_rules(kb, universe), model);
}

inline size_t tableau_node_cap() {
    if (const char* env = std::getenv("HORNBASE_NODE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
    }
    return 1'000'000;
}

// Hyper tableau for program u {request <-}: initialization step followed by
// exhaustive hyper extension steps under regularity. A clause is applicable
// to an open branch when its body literals all lie on the branch and none of
// its head literals does; extension splits into one branch per head literal,
// inconsistent branches are closed, and an empty head closes the branch.
// Every surviving open branch is finished.
inline Tableau build_update_tableau(const std::vector<DisjunctiveClause>& program,
                                    const std::optional<Literal>& request,
                                    TableauMode mode = TableauMode::minimality,
                                    size_t node_cap = tableau_node_cap()) {
    std::vector<DisjunctiveClause> clauses = program;
    if (request) clauses.push_back(DisjunctiveClause{{*request}, {}});
    std::sort(clauses.begin(), clauses.end());
    clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());

    Tableau t;
    t.mode = mode;
    t.branches.push_back(TableauBranch{});
    t.branches_created = 1;

    size_t i = 0;
    while (i < t.branches.size()) {
        TableauBranch& b = t.branches[i];
        if (b.closed || b.finished) {
            ++i;
            continue;
        }
        const DisjunctiveClause* applicable = nullptr;
        for (const auto& c : clauses) {
            bool body_ok = true;
            for (const auto& l : c.body)
                if (!b.contains(l)) {
                    body_ok = false;
                    break;
                }
            if (!body_ok) continue;
            bool head_on_branch = false;
            for (const auto& l : c.head)
                if (b.contains(l)) {
                    head_on_branch = true;
                    break;
                }
            if (head_on_branch) continue;  // branch already satisfies the clause
            applicable = &c;
            break;
        }
        if (!applicable) {
            b.finished = true;
            ++i;
            continue;
        }
        std::vector<TableauBranch> children;
        for (const auto& l : applicable->head) {
            TableauBranch child = b;
            child.literals.push_back(l);
            if (child.contains(l.complement())) child.closed = true;
            children.push_back(std::move(child));
        }
        if (children.empty()) {
            TableauBranch child = b;
            child.closed = true;  // empty head: the branch refutes the clause
            children.push_back(std::move(child));
        }
        t.branches_created += children.size();
        if (t.branches_created > node_cap)
            throw resource_error("tableau: branch cap exceeded");
        t.branches.erase(t.branches.begin() + static_cast<long>(i));
        t.branches.insert(t.branches.begin() + static_cast<long>(i),
                          std::make_move_iterator(children.begin()),
                          std::make_move_iterator(children.end()));
    }
    return t;
}

// HS(b) = { A in EDB | not-A on b }.
inline AtomSet branch_hitting_set(const TableauBranch& b, const KnowledgeBase& kb) {
    AtomSet out;
    for (const auto& l : b.literals)
        if (!l.positive() && kb.kb_u.count(l.atom)) out.insert(l.atom);
    return out;
}

// Closes every open finished branch whose hitting set fails the strong
// minimality test: re-adding any single deleted atom must restore the goal.
inline Tableau strong_minimality_filter(const Tableau& t, const KnowledgeBase& kb,
                                        const Atom& goal) {
    std::set<std::string> extras;
    for (const auto& a : goal.args) extras.insert(a.name);
    detail::GroundEngine eng(kb, extras);
    Tableau out = t;
    for (auto& b : out.branches) {
        if (b.closed || !b.finished) continue;
        AtomSet hs = branch_hitting_set(b, kb);
        AtomSet remaining = kb.kb_u;
        for (const auto& a : hs) remaining.erase(a);
        for (const auto& s : hs) {
            AtomSet facts = remaining;
            facts.insert(s);
            if (!eng.entails(facts, goal)) {
                b.closed = true;
                break;
            }
        }
    }
    return out;
}

struct EdbCuts {
    SetFamily family;
    bool no_open_branches = false;
};

// One negated EDB atom chosen from every open branch, all combinations.
inline EdbCuts edb_cuts(const Tableau& t, const KnowledgeBase& kb, size_t cap = 1'000'000) {
    EdbCuts out;
    auto open = t.open_branches();
    if (open.empty()) {
        out.no_open_branches = true;
        return out;
    }
    std::vector<std::vector<Atom>> options;
    for (size_t bi : open) {
        AtomSet hs = branch_hitting_set(t.branches[bi], kb);
        if (hs.empty()) return out;  // no cut through this branch
        options.emplace_back(hs.begin(), hs.end());
    }
    std::vector<size_t> idx(options.size(), 0);
    size_t produced = 0;
    while (true) {
        AtomSet cut;
        for (size_t i = 0; i < options.size(); ++i) cut.insert(options[i][idx[i]]);
        out.family.insert(std::move(cut));
        if (++produced > cap) throw resource_error("edb_cuts: combination cap exceeded");
        size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < options[i].size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) break;
    }
    return out;
}

inline std::string render_tableau(const Tableau& t, const KnowledgeBase& kb) {
    std::string out;
    for (size_t i = 0; i < t.branches.size(); ++i) {
        const auto& b = t.branches[i];
        out += "branch " + std::to_string(i) + " [" +
               (b.closed ? "closed" : (b.finished ? "open,finished" : "open")) + "]:";
        for (const auto& l : b.literals) out += " " + to_string(l);
        if (!b.closed && b.finished) {
            out += "   HS=" + to_string(branch_hitting_set(b, kb));
        }
        out += "\n";
    }
    return out;
}

}  // namespace hornbase
