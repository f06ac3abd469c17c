// Least-Herbrand-model computation, entailment, and integrity-constraint
// evaluation over ground-instantiated programs.
#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>

#include "syntax.hpp"

namespace hornbase {

struct Model {
    AtomSet atoms;
    bool contains(const Atom& a) const { return atoms.count(a) != 0; }
    auto operator<=>(const Model&) const = default;
};

namespace detail {

// Indexed ground program: atoms interned to ids, rules to id arrays.
// Built once per knowledge base (+ extra constants); the fact set varies
// between queries, so the fixpoint runs on caller-supplied fact bitsets.
class GroundEngine {
public:
    GroundEngine() = default;

    GroundEngine(const KnowledgeBase& kb, const std::set<std::string>& extra_constants = {}) {
        std::set<std::string> universe = kb.constants();
        universe.insert(extra_constants.begin(), extra_constants.end());
        rules_src_ = ground_rules(kb, universe);
        for (const auto& r : rules_src_) {
            Rule rule;
            rule.head = intern(*r.head);
            for (const auto& b : r.body) rule.body.push_back(intern(b));
            rules_.push_back(std::move(rule));
        }
        body_index_.assign(atoms_.size(), {});
        for (size_t ri = 0; ri < rules_.size(); ++ri)
            for (int b : rules_[ri].body) body_index_[static_cast<size_t>(b)].push_back(ri);
    }

    int id_of(const Atom& a) const {
        auto it = ids_.find(to_string(a));
        return it == ids_.end() ? -1 : it->second;
    }

    size_t atom_count() const { return atoms_.size(); }
    const std::vector<HornClause>& rules() const { return rules_src_; }

    // Semi-naive least fixpoint: only newly derived atoms re-fire rules.
    std::vector<bool> model_of(const AtomSet& facts) const {
        std::vector<bool> truth(atoms_.size(), false);
        std::vector<int> unsat;
        unsat.reserve(rules_.size());
        for (const auto& r : rules_) unsat.push_back(static_cast<int>(r.body.size()));

        std::vector<int> queue;
        auto derive = [&](int id) {
            if (id >= 0 && !truth[static_cast<size_t>(id)]) {
                truth[static_cast<size_t>(id)] = true;
                queue.push_back(id);
            }
        };
        for (const auto& f : facts) derive(id_of(f));
        // Interned atoms cover rule heads/bodies; facts outside them are
        // tracked by the caller (they cannot fire anything).
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int a = queue[qi];
            for (size_t ri : body_index_[static_cast<size_t>(a)]) {
                if (--unsat[ri] == 0) derive(rules_[ri].head);
            }
        }
        return truth;
    }

    AtomSet least_model(const AtomSet& facts) const {
        auto truth = model_of(facts);
        AtomSet out = facts;
        for (size_t i = 0; i < truth.size(); ++i)
            if (truth[i]) out.insert(atoms_[i]);
        return out;
    }

    bool entails(const AtomSet& facts, const Atom& goal) const {
        if (facts.count(goal)) return true;
        int g = id_of(goal);
        if (g < 0) return false;
        auto truth = model_of(facts);
        return truth[static_cast<size_t>(g)];
    }

private:
    struct Rule {
        int head = -1;
        std::vector<int> body;
    };

    int intern(const Atom& a) {
        auto key = to_string(a);
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        int id = static_cast<int>(atoms_.size());
        ids_.emplace(std::move(key), id);
        atoms_.push_back(a);
        return id;
    }

    std::vector<Atom> atoms_;
    std::unordered_map<std::string, int> ids_;
    std::vector<Rule> rules_;
    std::vector<HornClause> rules_src_;
    std::vector<std::vector<size_t>> body_index_;
};

}  // namespace detail

inline Model least_model(const KnowledgeBase& kb) {
    detail::GroundEngine eng(kb);
    return Model{eng.least_model(kb.kb_u)};
}

inline bool entails(const KnowledgeBase& kb, const Atom& goal) {
    if (!goal.ground()) throw semantic_error("entails: non-ground goal " + to_string(goal));
    detail::GroundEngine eng(kb);
    return eng.entails(kb.kb_u, goal);
}

// All ground IC instances whose body lies in the least model (guards already
// filtered by instantiation). Pairs each violation with the instantiating
// substitution of its source denial.
inline std::vector<std::pair<HornClause, Substitution>> violated_constraints(
    const KnowledgeBase& kb, const std::set<std::string>& extra_constants = {}) {
    std::set<std::string> universe = kb.constants();
    universe.insert(extra_constants.begin(), extra_constants.end());
    detail::GroundEngine eng(kb, extra_constants);
    AtomSet model = eng.least_model(kb.kb_u);

    std::vector<std::pair<HornClause, Substitution>> out;
    for (const auto& ic : kb.kb_ic) {
        for (const auto& inst : ground_clause(ic, universe)) {
            bool holds = true;
            for (const auto& b : inst.body)
                if (!model.count(b)) {
                    holds = false;
                    break;
                }
            if (!holds) continue;
            // Recover the substitution by matching the instance to its source.
            Substitution s;
            for (size_t i = 0; i < ic.body.size(); ++i) {
                auto u = unify(ic.body[i], inst.body[i]);
                if (u)
                    for (auto& [v, t] : *u) s[v] = t;
            }
            out.emplace_back(ic, std::move(s));
        }
    }
    return out;
}

inline bool ic_consistent(const KnowledgeBase& kb,
                          const std::set<std::string>& extra_constants = {}) {
    return violated_constraints(kb, extra_constants).empty();
}

inline KnowledgeBase with_facts(const KnowledgeBase& kb, AtomSet facts) {
    KnowledgeBase out = kb;
    out.kb_u = std::move(facts);
    return out;
}

}  // namespace hornbase
