// Seeded random generation of small consistent deductive databases, update
// requests, and set families for the property suites.
#pragma once

#include <cstdint>

#include "parse.hpp"
#include "semantics.hpp"

namespace hornbase {

// splitmix64: tiny, fast, identical across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    size_t below(size_t n) { return n == 0 ? 0 : static_cast<size_t>(next() % n); }
    bool chance(unsigned percent) { return below(100) < percent; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

private:
    uint64_t state_;
};

struct GenProfile {
    size_t max_rules = 6;
    size_t max_facts = 10;
    size_t max_ics = 2;
    size_t max_constants = 3;
    size_t max_base_preds = 3;
    size_t max_view_preds = 2;
    size_t max_body = 3;
};

// A consistent random database: ground rules over a small signature, a fact
// set, and ground denial constraints that hold in the initial state.
inline KnowledgeBase generate_kb(uint64_t seed, const GenProfile& profile = {}) {
    Rng rng(seed);
    KnowledgeBase kb;

    size_t n_const = 1 + rng.below(profile.max_constants);
    size_t n_base = 1 + rng.below(profile.max_base_preds);
    size_t n_view = 1 + rng.below(profile.max_view_preds);

    std::vector<std::string> consts;
    for (size_t i = 0; i < n_const; ++i) consts.push_back("c" + std::to_string(i + 1));

    struct Pred {
        std::string name;
        size_t arity;
    };
    std::vector<Pred> base_preds, view_preds;
    for (size_t i = 0; i < n_base; ++i)
        base_preds.push_back({"b" + std::to_string(i + 1), rng.below(3)});
    for (size_t i = 0; i < n_view; ++i)
        view_preds.push_back({"v" + std::to_string(i + 1), rng.below(3)});

    auto ground_atom = [&](const Pred& p) {
        Atom a{p.name, {}};
        for (size_t i = 0; i < p.arity; ++i) a.args.push_back(Term{rng.pick(consts)});
        return a;
    };

    // Rules: view heads; bodies draw base atoms and lower-numbered view atoms
    // so derivations stay mostly layered (cycles are pruned by the engine's
    // loop check anyway).
    size_t n_rules = 1 + rng.below(profile.max_rules);
    for (size_t r = 0; r < n_rules; ++r) {
        size_t head_idx = rng.below(view_preds.size());
        Atom head = ground_atom(view_preds[head_idx]);
        size_t body_len = 1 + rng.below(profile.max_body);
        std::vector<Atom> body;
        std::set<Atom> seen;
        for (size_t i = 0; i < body_len; ++i) {
            Atom next = (head_idx > 0 && rng.chance(30))
                            ? ground_atom(view_preds[rng.below(head_idx)])
                            : ground_atom(rng.pick(base_preds));
            if (seen.insert(next).second) body.push_back(std::move(next));
        }
        kb.kb_i.push_back(rule(std::move(head), std::move(body)));
    }
    std::sort(kb.kb_i.begin(), kb.kb_i.end());
    kb.kb_i.erase(std::unique(kb.kb_i.begin(), kb.kb_i.end()), kb.kb_i.end());

    size_t n_facts = rng.below(profile.max_facts + 1);
    for (size_t i = 0; i < n_facts; ++i) kb.kb_u.insert(ground_atom(rng.pick(base_preds)));

    // Ground denial ICs that the initial database satisfies; violating
    // candidates are discarded. Bodies mixing one atom inside the model with
    // one outside it put pressure on insertion-time repairs.
    AtomSet model = least_model(kb).atoms;
    size_t n_ics = rng.below(profile.max_ics + 1);
    std::vector<Atom> atom_pool, in_model, off_model;
    {
        auto hb = herbrand_base(kb);
        atom_pool.assign(hb.begin(), hb.end());
        for (const auto& a : hb) (model.count(a) ? in_model : off_model).push_back(a);
    }
    for (size_t i = 0; i < n_ics && !atom_pool.empty(); ++i) {
        std::vector<Atom> body;
        if (!in_model.empty() && !off_model.empty() && rng.chance(60)) {
            body.push_back(rng.pick(in_model));
            body.push_back(rng.pick(off_model));
        } else {
            size_t len = 1 + rng.below(2);
            for (size_t j = 0; j < len; ++j) body.push_back(rng.pick(atom_pool));
        }
        bool violated = true;
        for (const auto& b : body)
            if (!model.count(b)) {
                violated = false;
                break;
            }
        if (violated) continue;
        kb.kb_ic.push_back(denial(std::move(body)));
    }
    std::sort(kb.kb_ic.begin(), kb.kb_ic.end());
    kb.kb_ic.erase(std::unique(kb.kb_ic.begin(), kb.kb_ic.end()), kb.kb_ic.end());

    validate_kb(kb);
    return kb;
}

// A derivable view atom, if any.
inline std::optional<Atom> pick_deletable(const KnowledgeBase& kb, Rng& rng) {
    auto views = kb.view_predicates();
    std::vector<Atom> candidates;
    for (const auto& a : least_model(kb).atoms)
        if (views.count(a.pred)) candidates.push_back(a);
    if (candidates.empty()) return std::nullopt;
    return rng.pick(candidates);
}

// An underivable view atom that occurs as some rule-instance head, if any.
inline std::optional<Atom> pick_insertable(const KnowledgeBase& kb, Rng& rng) {
    AtomSet model = least_model(kb).atoms;
    std::vector<Atom> candidates;
    for (const auto& r : ground_rules(kb, kb.constants()))
        if (!model.count(*r.head)) candidates.push_back(*r.head);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (candidates.empty()) return std::nullopt;
    return rng.pick(candidates);
}

// A random ground base atom (present or absent) for revision requests.
inline std::optional<Atom> pick_base_atom(const KnowledgeBase& kb, Rng& rng) {
    auto base = base_herbrand_atoms(kb);
    if (base.empty()) return std::nullopt;
    std::vector<Atom> pool(base.begin(), base.end());
    return rng.pick(pool);
}

// Random set family over elements e1..e_universe.
inline SetOfAtomSets generate_family(uint64_t seed, size_t max_members, size_t universe) {
    Rng rng(seed);
    std::vector<Atom> elements;
    for (size_t i = 0; i < universe; ++i) elements.push_back(atom("e" + std::to_string(i + 1)));
    SetOfAtomSets family;
    size_t n = rng.below(max_members + 1);
    for (size_t i = 0; i < n; ++i) {
        AtomSet member;
        size_t len = 1 + rng.below(4);
        for (size_t j = 0; j < len; ++j) member.insert(rng.pick(elements));
        family.insert(std::move(member));
    }
    return family;
}

// A pair (S, S') with S a subset of S' where every extra member of S'
// contains some member of S; when bounded_union is set the extra members
// also stay inside the union of S (the materialized-view variant).
inline std::pair<SetOfAtomSets, SetOfAtomSets> generate_family_pair(uint64_t seed,
                                                                    bool bounded_union) {
    Rng rng(seed);
    SetOfAtomSets s = generate_family(rng.next(), 4, 6);
    while (s.empty()) s = generate_family(rng.next(), 4, 6);
    AtomSet pool;
    for (const auto& m : s) pool.insert(m.begin(), m.end());
    std::vector<Atom> pool_vec(pool.begin(), pool.end());
    std::vector<Atom> extras_vec = pool_vec;
    if (!bounded_union)
        for (size_t i = 0; i < 3; ++i) extras_vec.push_back(atom("x" + std::to_string(i + 1)));

    std::vector<AtomSet> members(s.begin(), s.end());
    SetOfAtomSets sp = s;
    size_t n_extra = rng.below(4);
    for (size_t i = 0; i < n_extra; ++i) {
        AtomSet extra = rng.pick(members);  // contains a member of S
        size_t pad = rng.below(3);
        for (size_t j = 0; j < pad; ++j) extra.insert(rng.pick(extras_vec));
        sp.insert(std::move(extra));
    }
    return {std::move(s), std::move(sp)};
}

}  // namespace hornbase
