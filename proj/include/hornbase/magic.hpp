// Update seeds and the goal-directed insertion-side realization search.
#pragma once

#include "abduction.hpp"
#include "parse.hpp"

namespace hornbase {

struct Seed {
    std::string predicate;
    std::vector<Term> tuple;
    char sign = '+';  // '+' from nu_plus, '-' from nu_minus
    auto operator<=>(const Seed&) const = default;
};

inline std::string to_string(const Seed& s) {
    return std::string(1, s.sign) + to_string(Atom{s.predicate, s.tuple});
}

// One signed seed per ground atom of the request.
inline std::set<Seed> vu_seeds(const UpdateRequest& request) {
    std::set<Seed> out;
    for (const auto& a : request.nu_plus) out.insert(Seed{a.pred, a.args, '+'});
    for (const auto& a : request.nu_minus) out.insert(Seed{a.pred, a.args, '-'});
    return out;
}

// Signed explanations realizing the insertion of an underivable view atom:
// minimal insertion supports seeded from the goal's failed SLD branches,
// IC-repaired, ordered by ascending |delta+|+|delta-| then lexicographically.
inline std::vector<Explanation> insertion_realizations(const KnowledgeBase& kb, const Atom& goal,
                                                       const RepairOptions& opts = {}) {
    if (!goal.ground())
        throw precondition_error("insertion_realizations: goal must be ground");
    if (!kb.view_predicates().count(goal.pred))
        throw precondition_error("insertion_realizations: goal must be a view atom: " +
                                 to_string(goal));
    if (entails(kb, goal))
        throw precondition_error("insertion_realizations: goal already derivable: " +
                                 to_string(goal));

    auto expls = constrained_explanations(kb, goal, opts);
    std::vector<Explanation> out(expls.begin(), expls.end());
    std::stable_sort(out.begin(), out.end(), [](const Explanation& a, const Explanation& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

}  // namespace hornbase
