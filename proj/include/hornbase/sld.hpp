// Complete SLD-tree construction over the ground instantiation of a program,
// with leftmost selection, loop pruning, and bookkeeping of the EDB facts and
// rule instances each branch consumes.
//
// Trees can be built with a hypothetical fact base (absent ground base atoms
// available on demand); the hypotheses actually consumed per branch drive the
// insertion-side candidate search.
#pragma once

#include <deque>

#include "semantics.hpp"
#include "syntax.hpp"

namespace hornbase {

enum class SldStatus { internal, success, failure, bound_cut };

struct SldNode {
    std::vector<Atom> goal;           // remaining subgoals, leftmost selected
    Substitution binding;             // instantiation of the rule applied at this step
    AtomSet used_edb;                 // facts consumed on the path so far
    AtomSet used_hypotheses;          // hypothetical facts consumed on the path so far
    std::set<HornClause> used_rules;  // ground rule instances applied so far
    SldStatus status = SldStatus::internal;
    bool loop_pruned = false;
    int parent = -1;
    int depth = 0;
};

struct SldTree {
    KnowledgeBase kb;
    std::vector<Atom> root_goal;
    size_t depth_bound = 0;
    std::vector<SldNode> nodes;  // nodes[0] is the root
    bool has_bound_cut = false;

    std::vector<int> leaves(SldStatus status) const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
            if (nodes[i].status == status) out.push_back(i);
        return out;
    }
    size_t node_count() const { return nodes.size(); }
};

struct SldOptions {
    AtomSet hypotheses;  // extra ground base atoms available as facts
    std::set<std::string> extra_constants;
    size_t node_cap = 1'000'000;
};

inline size_t default_depth_bound(const KnowledgeBase& kb) {
    return herbrand_base(kb).size() + 2;
}

namespace detail {

// Matches a source clause against one of its ground instances (guards of the
// instance are erased by instantiation).
inline std::optional<Substitution> match_clause(const HornClause& src, const HornClause& inst) {
    if (!src.head || !inst.head || src.body.size() != inst.body.size()) return std::nullopt;
    Substitution s;
    auto absorb = [&](const Atom& pat, const Atom& ground) {
        Atom bound = substitute(s, pat);
        auto u = unify(bound, ground);
        if (!u) return false;
        for (auto& [v, t] : *u) {
            if (!t.is_constant()) return false;
            s[v] = t;
        }
        return true;
    };
    if (!absorb(*src.head, *inst.head)) return std::nullopt;
    for (size_t i = 0; i < src.body.size(); ++i)
        if (!absorb(src.body[i], inst.body[i])) return std::nullopt;
    HornClause check = substitute(s, src);
    check.guards.clear();
    if (!(check.head == inst.head && check.body == inst.body)) return std::nullopt;
    return s;
}

}  // namespace detail

// Builds the complete SLD-tree for a conjunction of ground goals. Resolution
// runs against the ground instantiation; base atoms resolve against facts
// (and hypotheses), view atoms against rule instances in canonical order.
// A branch is pruned as looping when a selected subgoal already occurs among
// the subgoals it descends from.
inline SldTree sld_tree_conjunction(const KnowledgeBase& kb, const std::vector<Atom>& goals,
                                    size_t depth_bound, const SldOptions& opts = {}) {
    if (depth_bound < 1) throw precondition_error("sld_tree: depth_bound must be >= 1");
    for (const auto& g : goals)
        if (!g.ground()) throw precondition_error("sld_tree: goal must be ground");

    std::set<std::string> universe = kb.constants();
    for (const auto& g : goals)
        for (const auto& t : g.args) universe.insert(t.name);
    universe.insert(opts.extra_constants.begin(), opts.extra_constants.end());
    auto rules = ground_rules(kb, universe);

    std::map<Atom, std::vector<const HornClause*>> by_head;
    for (const auto& r : rules) by_head[*r.head].push_back(&r);

    auto views = kb.view_predicates();

    // Ancestry arena: chains of subgoal derivation used for the loop check.
    struct Entry {
        Atom atom;
        int parent_entry;
    };
    std::vector<Entry> arena;
    std::vector<std::vector<int>> goal_entries;  // parallel to nodes

    SldTree tree;
    tree.kb = kb;
    tree.root_goal = goals;
    tree.depth_bound = depth_bound;

    std::vector<int> root_entries;
    for (const auto& g : goals) {
        arena.push_back({g, -1});
        root_entries.push_back(static_cast<int>(arena.size()) - 1);
    }
    tree.nodes.push_back(SldNode{goals, {}, {}, {}, {}, SldStatus::internal, false, -1, 0});
    goal_entries.push_back(root_entries);

    std::deque<int> work{0};
    while (!work.empty()) {
        int ni = work.front();
        work.pop_front();
        if (tree.nodes.size() > opts.node_cap) throw resource_error("sld_tree: node cap exceeded");

        if (tree.nodes[ni].goal.empty()) {
            tree.nodes[ni].status = SldStatus::success;
            continue;
        }
        if (static_cast<size_t>(tree.nodes[ni].depth) >= depth_bound) {
            tree.nodes[ni].status = SldStatus::bound_cut;
            tree.has_bound_cut = true;
            continue;
        }

        const int sel_entry = goal_entries[ni].front();
        const Atom selected = arena[static_cast<size_t>(sel_entry)].atom;

        bool loops = false;
        for (int e = arena[static_cast<size_t>(sel_entry)].parent_entry; e >= 0;
             e = arena[static_cast<size_t>(e)].parent_entry) {
            if (arena[static_cast<size_t>(e)].atom == selected) {
                loops = true;
                break;
            }
        }
        if (loops) {
            tree.nodes[ni].status = SldStatus::failure;
            tree.nodes[ni].loop_pruned = true;
            continue;
        }

        auto make_child = [&](std::vector<int> entries) {
            SldNode child = tree.nodes[ni];
            child.goal.clear();
            for (int e : entries) child.goal.push_back(arena[static_cast<size_t>(e)].atom);
            child.binding.clear();
            child.parent = ni;
            child.depth = tree.nodes[ni].depth + 1;
            child.status = SldStatus::internal;
            return child;
        };

        int n_children = 0;
        if (!views.count(selected.pred)) {
            bool in_edb = kb.kb_u.count(selected) != 0;
            bool in_hyp = !in_edb && opts.hypotheses.count(selected) != 0;
            if (in_edb || in_hyp) {
                std::vector<int> rest(goal_entries[ni].begin() + 1, goal_entries[ni].end());
                SldNode child = make_child(rest);
                if (in_edb)
                    child.used_edb.insert(selected);
                else
                    child.used_hypotheses.insert(selected);
                tree.nodes.push_back(std::move(child));
                goal_entries.push_back(std::move(rest));
                work.push_back(static_cast<int>(tree.nodes.size()) - 1);
                ++n_children;
            }
        } else if (auto it = by_head.find(selected); it != by_head.end()) {
            for (const HornClause* r : it->second) {
                std::vector<int> entries;
                std::set<Atom> seen;
                for (const auto& b : r->body) {
                    if (!seen.insert(b).second) continue;  // duplicate subgoal
                    arena.push_back({b, sel_entry});
                    entries.push_back(static_cast<int>(arena.size()) - 1);
                }
                for (size_t k = 1; k < goal_entries[ni].size(); ++k) {
                    int e = goal_entries[ni][k];
                    if (seen.insert(arena[static_cast<size_t>(e)].atom).second)
                        entries.push_back(e);
                }
                SldNode child = make_child(entries);
                child.used_rules.insert(*r);
                for (const auto& src : kb.kb_i) {
                    if (auto m = detail::match_clause(src, *r)) {
                        child.binding = *m;
                        break;
                    }
                }
                tree.nodes.push_back(std::move(child));
                goal_entries.push_back(std::move(entries));
                work.push_back(static_cast<int>(tree.nodes.size()) - 1);
                ++n_children;
            }
        }
        if (n_children == 0) tree.nodes[ni].status = SldStatus::failure;
    }
    return tree;
}

inline SldTree sld_tree(const KnowledgeBase& kb, const Atom& goal, size_t depth_bound,
                        const SldOptions& opts = {}) {
    return sld_tree_conjunction(kb, {goal}, depth_bound, opts);
}

inline SldTree sld_tree(const KnowledgeBase& kb, const Atom& goal) {
    return sld_tree(kb, goal, default_depth_bound(kb));
}

// EDB supports of the successful branches: one set of consumed facts each.
inline SetOfAtomSets branch_explanations(const SldTree& tree) {
    SetOfAtomSets out;
    for (int i : tree.leaves(SldStatus::success)) out.insert(tree.nodes[i].used_edb);
    return out;
}

namespace detail {

// Drop-one-at-a-time reduction: a subset of hyps that still derives the goal
// together with the EDB, from which no single hypothesis can be removed.
inline AtomSet reduce_hypotheses(const GroundEngine& eng, const AtomSet& edb,
                                 const std::vector<Atom>& goals, AtomSet hyps) {
    auto derives_all = [&](const AtomSet& trial) {
        AtomSet facts = edb;
        facts.insert(trial.begin(), trial.end());
        for (const auto& g : goals)
            if (!eng.entails(facts, g)) return false;
        return true;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& h : AtomSet(hyps)) {
            AtomSet trial = hyps;
            trial.erase(h);
            if (derives_all(trial)) {
                hyps = std::move(trial);
                changed = true;
                break;
            }
        }
    }
    return hyps;
}

inline void minimize_family(SetOfAtomSets& family) {
    SetOfAtomSets out;
    for (const auto& s : family) {
        bool has_proper_subset = false;
        for (const auto& t : family)
            if (t != s && std::includes(s.begin(), s.end(), t.begin(), t.end())) {
                has_proper_subset = true;
                break;
            }
        if (!has_proper_subset) out.insert(s);
    }
    family = std::move(out);
}

}  // namespace detail

// For a tree whose goal is not derivable: the minimal sets of absent ground
// base atoms whose addition to the EDB lets the failed branches' remaining
// goals succeed. Each failed branch is re-run with the base Herbrand atoms
// as hypothetical facts; the hypotheses consumed per completion are reduced
// per branch, then supersets are dropped across branches. A tree with any
// successful branch needs no missing support and yields the empty family.
inline SetOfAtomSets missing_support(const SldTree& tree,
                                     const std::set<std::string>& extra_constants = {}) {
    const KnowledgeBase& kb = tree.kb;
    if (!tree.leaves(SldStatus::success).empty()) return {};

    std::set<std::string> extras = extra_constants;
    for (const auto& g : tree.root_goal)
        for (const auto& t : g.args) extras.insert(t.name);

    AtomSet hypo = base_herbrand_atoms(kb, extras);
    for (const auto& f : kb.kb_u) hypo.erase(f);

    detail::GroundEngine eng(kb, extras);
    SetOfAtomSets out;

    SldOptions opts;
    opts.hypotheses = hypo;
    opts.extra_constants = extras;

    for (int i : tree.leaves(SldStatus::failure)) {
        const SldNode& leaf = tree.nodes[i];
        if (leaf.loop_pruned || leaf.goal.empty()) continue;
        size_t bound = tree.depth_bound + hypo.size() + 1;
        SldTree rerun = sld_tree_conjunction(kb, leaf.goal, bound, opts);
        for (int j : rerun.leaves(SldStatus::success)) {
            AtomSet used = rerun.nodes[j].used_hypotheses;
            used.insert(leaf.used_hypotheses.begin(), leaf.used_hypotheses.end());
            out.insert(detail::reduce_hypotheses(eng, kb.kb_u, tree.root_goal, used));
        }
    }
    detail::minimize_family(out);
    return out;
}

// Complete family of minimal insertion supports for a conjunction of goals:
// all minimal H within the base Herbrand atoms (minus present facts and the
// avoid set) such that EDB u H derives every goal. Derivable goals contribute
// the empty support.
inline SetOfAtomSets minimal_insertion_supports(const KnowledgeBase& kb,
                                                const std::vector<Atom>& goals,
                                                const AtomSet& avoid = {},
                                                const std::set<std::string>& extra_constants = {},
                                                size_t node_cap = 1'000'000) {
    std::set<std::string> extras = extra_constants;
    for (const auto& g : goals)
        for (const auto& t : g.args) extras.insert(t.name);

    AtomSet hypo = base_herbrand_atoms(kb, extras);
    for (const auto& f : kb.kb_u) hypo.erase(f);
    for (const auto& a : avoid) hypo.erase(a);

    SldOptions opts;
    opts.hypotheses = hypo;
    opts.extra_constants = extras;
    opts.node_cap = node_cap;

    size_t bound = default_depth_bound(kb) + hypo.size() + goals.size() + 1;
    SldTree tree = sld_tree_conjunction(kb, goals, bound, opts);

    detail::GroundEngine eng(kb, extras);
    SetOfAtomSets out;
    for (int j : tree.leaves(SldStatus::success))
        out.insert(detail::reduce_hypotheses(eng, kb.kb_u, goals, tree.nodes[j].used_hypotheses));
    detail::minimize_family(out);
    return out;
}

// Indented one-step-per-line rendering for --trace-sld.
inline std::string render_sld_tree(const SldTree& tree) {
    std::string out;
    std::vector<std::vector<int>> children(tree.nodes.size());
    for (size_t i = 1; i < tree.nodes.size(); ++i)
        children[static_cast<size_t>(tree.nodes[i].parent)].push_back(static_cast<int>(i));
    auto label = [&](const SldNode& n) {
        std::string s = "<- ";
        if (n.goal.empty()) s += "[]";
        for (size_t k = 0; k < n.goal.size(); ++k) {
            if (k) s += ", ";
            s += to_string(n.goal[k]);
        }
        switch (n.status) {
            case SldStatus::success: s += "   (success)"; break;
            case SldStatus::failure: s += n.loop_pruned ? "   (loop)" : "   (failure)"; break;
            case SldStatus::bound_cut: s += "   (bound cut)"; break;
            default: break;
        }
        return s;
    };
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [ni, indent] = stack.back();
        stack.pop_back();
        out.append(static_cast<size_t>(indent) * 2, ' ');
        out += label(tree.nodes[static_cast<size_t>(ni)]);
        out += "\n";
        const auto& cs = children[static_cast<size_t>(ni)];
        for (auto it = cs.rbegin(); it != cs.rend(); ++it) stack.push_back({*it, indent + 1});
    }
    return out;
}

}  // namespace hornbase
