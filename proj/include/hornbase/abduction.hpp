// Kernels, locally minimal abductive explanations, and IC-constrained signed
// explanations over the base-atom abducibles.
#pragma once

#include <functional>

#include "hitting.hpp"
#include "sld.hpp"

namespace hornbase {

// Signed explanation: base facts to assume (delta_plus) and to deny
// (delta_minus); disjoint.
struct Explanation {
    AtomSet delta_plus;
    AtomSet delta_minus;
    auto operator<=>(const Explanation&) const = default;
    size_t size() const { return delta_plus.size() + delta_minus.size(); }
};

inline std::string to_string(const Explanation& e) {
    return "(+" + to_string(e.delta_plus) + ", -" + to_string(e.delta_minus) + ")";
}

using Kernel = std::set<HornClause>;

namespace detail {

inline KnowledgeBase kb_from_clauses(const Kernel& clauses) {
    KnowledgeBase kb;
    for (const auto& c : clauses) {
        if (c.is_fact())
            kb.kb_u.insert(*c.head);
        else if (c.head)
            kb.kb_i.push_back(c);
    }
    std::sort(kb.kb_i.begin(), kb.kb_i.end());
    return kb;
}

inline bool clauses_entail(const Kernel& clauses, const Atom& alpha) {
    return entails(kb_from_clauses(clauses), alpha);
}

inline Kernel reduce_kernel(Kernel k, const Atom& alpha) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : Kernel(k)) {
            Kernel trial = k;
            trial.erase(c);
            if (clauses_entail(trial, alpha)) {
                k = std::move(trial);
                changed = true;
                break;
            }
        }
    }
    return k;
}

// Enumerates subsets of `pool` by ascending cardinality up to max_size,
// skipping supersets of already accepted sets; `accept` returns whether the
// subset is valid (and therefore collected and used to prune).
inline SetOfAtomSets bfs_minimal_subsets(const std::vector<Atom>& pool, size_t max_size,
                                         const std::function<bool(const AtomSet&)>& accept) {
    SetOfAtomSets found;
    max_size = std::min(max_size, pool.size());
    std::vector<size_t> comb;
    std::function<void(size_t, size_t)> rec = [&](size_t start, size_t remaining) {
        if (remaining == 0) {
            AtomSet subset;
            for (size_t i : comb) subset.insert(pool[i]);
            for (const auto& f : found)
                if (std::includes(subset.begin(), subset.end(), f.begin(), f.end())) return;
            if (accept(subset)) found.insert(std::move(subset));
            return;
        }
        for (size_t i = start; i + remaining <= pool.size(); ++i) {
            comb.push_back(i);
            rec(i + 1, remaining - 1);
            comb.pop_back();
        }
    };
    for (size_t k = 0; k <= max_size; ++k) rec(0, k);
    return found;
}

}  // namespace detail

// All subset-minimal X within kb_i u kb_u (source-level clauses) with
// X |- alpha, seeded from SLD branch supports and reduced exhaustively.
inline std::set<Kernel> kernels(const KnowledgeBase& kb, const Atom& alpha) {
    if (!alpha.ground()) throw precondition_error("kernels: alpha must be ground");
    SldTree tree = sld_tree(kb, alpha);
    std::set<Kernel> out;
    for (int i : tree.leaves(SldStatus::success)) {
        const SldNode& leaf = tree.nodes[i];
        Kernel k;
        for (const auto& f : leaf.used_edb) k.insert(fact(f));
        for (const auto& inst : leaf.used_rules) {
            bool matched = false;
            for (const auto& src : kb.kb_i)
                if (detail::match_clause(src, inst)) {
                    k.insert(src);
                    matched = true;
                    break;
                }
            if (!matched) k.insert(inst);
        }
        out.insert(detail::reduce_kernel(std::move(k), alpha));
    }
    return out;
}

// KB-closed locally minimal explanations: the updatable parts of the
// alpha-kernels. Empty when alpha is not derivable.
inline std::set<Explanation> locally_minimal_explanations(const KnowledgeBase& kb,
                                                          const Atom& alpha) {
    std::set<Explanation> out;
    for (const auto& k : kernels(kb, alpha)) {
        Explanation e;
        for (const auto& c : k)
            if (c.is_fact() && kb.kb_u.count(*c.head)) e.delta_plus.insert(*c.head);
        out.insert(std::move(e));
    }
    return out;
}

struct RepairOptions {
    size_t max_del_repair = 4;
    size_t node_cap = 1'000'000;
    std::set<std::string> extra_constants;
};

namespace detail {

// Minimal deletion sets D from `pool` (within current facts) such that the
// resulting fact set satisfies `valid`. BFS by cardinality.
inline SetOfAtomSets minimal_deletion_sets(const AtomSet& pool, size_t cap,
                                           const std::function<bool(const AtomSet&)>& valid) {
    std::vector<Atom> vec(pool.begin(), pool.end());
    return bfs_minimal_subsets(vec, cap, valid);
}

// EDB atoms appearing in some explanation of `goal` under the given facts:
// the relevant deletion candidates for blocking or repairing around it.
inline AtomSet relevant_support_atoms(const KnowledgeBase& kb, const AtomSet& facts,
                                      const Atom& goal,
                                      const std::set<std::string>& extra_constants) {
    if (!kb.view_predicates().count(goal.pred)) {
        AtomSet out;
        if (facts.count(goal)) out.insert(goal);
        return out;
    }
    KnowledgeBase cur = with_facts(kb, facts);
    SldOptions opts;
    opts.extra_constants = extra_constants;
    SldTree tree = sld_tree_conjunction(cur, {goal}, default_depth_bound(cur) + 1, opts);
    AtomSet out;
    for (const auto& d : branch_explanations(tree))
        out.insert(d.begin(), d.end());
    return out;
}

}  // namespace detail

// Signed explanations of alpha consistent with the integrity constraints:
// for derivable alpha these are the KB-closed locally minimal explanations;
// otherwise minimal insertion supports, each paired with the minimal deletion
// sets that restore consistency while keeping alpha derivable. Candidates
// that cannot be repaired within the cap are dropped.
inline std::set<Explanation> constrained_explanations(const KnowledgeBase& kb, const Atom& alpha,
                                                      const RepairOptions& opts = {}) {
    if (!alpha.ground()) throw precondition_error("constrained_explanations: alpha must be ground");
    std::set<std::string> extras = opts.extra_constants;
    for (const auto& t : alpha.args) extras.insert(t.name);

    std::set<Explanation> out;
    if (entails(kb, alpha)) {
        if (!ic_consistent(kb, extras)) return out;
        return locally_minimal_explanations(kb, alpha);
    }

    auto supports = minimal_insertion_supports(kb, {alpha}, {}, extras, opts.node_cap);
    for (const auto& dplus : supports) {
        AtomSet grown = kb.kb_u;
        grown.insert(dplus.begin(), dplus.end());
        KnowledgeBase kb_grown = with_facts(kb, grown);

        if (ic_consistent(kb_grown, extras)) {
            out.insert(Explanation{dplus, {}});
            continue;
        }
        // Deletion candidates: EDB supports of the violated instances' bodies.
        AtomSet pool;
        for (const auto& [ic, sub] : violated_constraints(kb_grown, extras)) {
            for (const auto& b : substitute(sub, ic).body) {
                auto rel = detail::relevant_support_atoms(kb, grown, b, extras);
                pool.insert(rel.begin(), rel.end());
            }
        }
        for (const auto& a : dplus) pool.erase(a);  // assumed atoms stay

        auto valid = [&](const AtomSet& del) {
            AtomSet facts = grown;
            for (const auto& d : del) facts.erase(d);
            KnowledgeBase trial = with_facts(kb, facts);
            return ic_consistent(trial, extras) && entails(trial, alpha);
        };
        for (auto& dminus : detail::minimal_deletion_sets(pool, opts.max_del_repair, valid))
            out.insert(Explanation{dplus, dminus});
    }
    return out;
}

}  // namespace hornbase
