// Minimal hitting-set enumeration over families of ground-atom sets.
#pragma once

#include "syntax.hpp"

namespace hornbase {

// Raw families are allowed anywhere; normalization drops superset members.
using SetFamily = SetOfAtomSets;

inline SetFamily normalize_family(const SetFamily& family) {
    SetFamily out;
    for (const auto& s : family) {
        bool has_proper_subset = false;
        for (const auto& t : family)
            if (t != s && std::includes(s.begin(), s.end(), t.begin(), t.end())) {
                has_proper_subset = true;
                break;
            }
        if (!has_proper_subset) out.insert(s);
    }
    return out;
}

struct HittingSetResult {
    SetOfAtomSets sets;
    // Some family member is empty, so nothing can hit it.
    bool unhittable = false;
};

inline bool hits_all(const AtomSet& h, const SetFamily& family) {
    for (const auto& m : family) {
        bool hit = false;
        for (const auto& a : m)
            if (h.count(a)) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

// Hitting is monotone upward, so single-element drops decide minimality.
inline bool is_minimal_hitting_set(const AtomSet& h, const SetFamily& family) {
    for (const auto& m : family)
        if (m.empty()) return false;
    if (!hits_all(h, family)) return false;
    for (const auto& a : h) {
        AtomSet smaller = h;
        smaller.erase(a);
        if (hits_all(smaller, family)) return false;
    }
    return true;
}

// All minimal hitting sets, via an HS-tree: branch on the elements of the
// first unhit member, prune revisited selections, minimize the harvest.
inline HittingSetResult minimal_hitting_sets(const SetFamily& raw_family) {
    HittingSetResult result;
    for (const auto& m : raw_family)
        if (m.empty()) {
            result.unhittable = true;
            return result;
        }
    SetFamily family = normalize_family(raw_family);
    if (family.empty()) {
        result.sets.insert(AtomSet{});
        return result;
    }

    std::vector<const AtomSet*> members;
    for (const auto& m : family) members.push_back(&m);

    std::set<AtomSet> visited;
    SetOfAtomSets harvest;

    std::vector<AtomSet> stack{AtomSet{}};
    while (!stack.empty()) {
        AtomSet chosen = std::move(stack.back());
        stack.pop_back();
        if (!visited.insert(chosen).second) continue;

        const AtomSet* unhit = nullptr;
        for (const AtomSet* m : members) {
            bool hit = false;
            for (const auto& a : *m)
                if (chosen.count(a)) {
                    hit = true;
                    break;
                }
            if (!hit) {
                unhit = m;
                break;
            }
        }
        if (!unhit) {
            harvest.insert(std::move(chosen));
            continue;
        }
        for (const auto& a : *unhit) {
            AtomSet next = chosen;
            next.insert(a);
            stack.push_back(std::move(next));
        }
    }

    for (const auto& h : harvest) {
        bool minimal = true;
        for (const auto& other : harvest)
            if (other != h && std::includes(h.begin(), h.end(), other.begin(), other.end())) {
                minimal = false;
                break;
            }
        if (minimal) result.sets.insert(h);
    }
    return result;
}

// Deterministic preference order: ascending cardinality, then lexicographic.
inline std::vector<AtomSet> ordered_hitting_sets(const SetFamily& family) {
    auto res = minimal_hitting_sets(family);
    std::vector<AtomSet> out(res.sets.begin(), res.sets.end());
    std::stable_sort(out.begin(), out.end(), [](const AtomSet& a, const AtomSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

}  // namespace hornbase
