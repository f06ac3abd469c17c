// Generalized revision (iterated IC repair around an added fact), the kernel
// revision procedure KR, and checkers for the rationality postulates
// KB*1 through KB*7.3 evaluated literally on the finite ground setting.
#pragma once

#include <functional>

#include "magic.hpp"
#include "view_update.hpp"

namespace hornbase {

struct RevisionOutcome {
    KnowledgeBase kb_prime;
    Explanation applied;  // net facts added / removed
    size_t iterations = 0;
};

struct RevisionOptions {
    size_t max_del_repair = 4;
    size_t node_cap = 1'000'000;
    // Facts the incision must never cut (the revised-in support).
    AtomSet protected_facts;
    bool enumerate_all = false;
};

namespace detail {

inline Explanation diff_facts(const AtomSet& before, const AtomSet& after) {
    Explanation e;
    for (const auto& a : after)
        if (!before.count(a)) e.delta_plus.insert(a);
    for (const auto& a : before)
        if (!after.count(a)) e.delta_minus.insert(a);
    return e;
}

// First minimal hitting set (ascending cardinality, then lexicographic) that
// avoids the protected atoms; nullopt when some member is fully protected or
// the family is unhittable.
inline std::optional<AtomSet> incision(const SetFamily& family, const AtomSet& protected_facts) {
    SetFamily trimmed;
    for (const auto& m : family) {
        AtomSet allowed;
        for (const auto& a : m)
            if (!protected_facts.count(a)) allowed.insert(a);
        if (allowed.empty()) return std::nullopt;
        trimmed.insert(std::move(allowed));
    }
    auto ordered = ordered_hitting_sets(trimmed);
    if (ordered.empty()) return std::nullopt;
    return ordered.front();
}

}  // namespace detail

// Procedure KR: iterated hitting-set incision over the explanation families
// of the pending insertions (P) and deletions (N) until both are settled.
inline RevisionOutcome kr(const KnowledgeBase& kb, const AtomSet& dplus, const AtomSet& dminus,
                          const RevisionOptions& opts = {}) {
    for (const auto& a : dplus)
        if (!a.ground()) throw precondition_error("kr: non-ground atom " + to_string(a));
    for (const auto& a : dminus)
        if (!a.ground()) throw precondition_error("kr: non-ground atom " + to_string(a));

    std::set<std::string> extras;
    for (const auto& a : dplus)
        for (const auto& t : a.args) extras.insert(t.name);
    for (const auto& a : dminus)
        for (const auto& t : a.args) extras.insert(t.name);

    const size_t cap = herbrand_base(kb, extras).size() + 1;
    AtomSet facts = kb.kb_u;
    size_t iterations = 0;

    while (true) {
        KnowledgeBase cur = with_facts(kb, facts);
        detail::GroundEngine eng(cur, extras);
        AtomSet pending_ins, pending_del;
        for (const auto& e : dplus)
            if (!eng.entails(facts, e)) pending_ins.insert(e);
        for (const auto& e : dminus)
            if (eng.entails(facts, e)) pending_del.insert(e);
        if (pending_ins.empty() && pending_del.empty()) break;
        if (++iterations > cap) throw iteration_cap_error("kr: iteration cap exceeded");

        SetFamily s1, s2;
        for (const auto& e : pending_ins) {
            auto fam = minimal_insertion_supports(cur, {e}, {}, extras, opts.node_cap);
            if (fam.empty()) throw iteration_cap_error("kr: no support exists for " + to_string(e));
            s1.insert(fam.begin(), fam.end());
        }
        for (const auto& e : pending_del)
            for (const auto& x : locally_minimal_explanations(cur, e)) s2.insert(x.delta_plus);

        auto sigma1 = detail::incision(s1, {});
        auto sigma2 = detail::incision(s2, opts.protected_facts);
        if (!pending_del.empty() && !sigma2)
            throw iteration_cap_error("kr: deletion blocked by protected facts");

        if (pending_del.empty() && !pending_ins.empty()) {
            if (sigma1) facts.insert(sigma1->begin(), sigma1->end());
        } else if (!pending_del.empty() && pending_ins.empty()) {
            if (sigma2)
                for (const auto& a : *sigma2) facts.erase(a);
        } else {
            if (sigma2)
                for (const auto& a : *sigma2) facts.erase(a);
            if (sigma1) facts.insert(sigma1->begin(), sigma1->end());
        }
    }

    RevisionOutcome out;
    out.kb_prime = with_facts(kb, facts);
    out.applied = detail::diff_facts(kb.kb_u, facts);
    out.iterations = iterations;
    return out;
}

namespace detail {

// A fact set violates vacuity-1 when the immutable part together with alpha
// alone (no updatable facts) already breaks some constraint: no deletion can
// ever repair it.
inline bool inconsistent_with_immutable(const KnowledgeBase& kb, const Atom& alpha,
                                        const std::set<std::string>& extras) {
    KnowledgeBase probe = kb;
    probe.kb_u = {alpha};
    return !ic_consistent(probe, extras);
}

}  // namespace detail

// Generalized revision of a ground fact alpha into the knowledge base:
// alpha is added (base predicate) or realized abductively (view predicate),
// then violated constraints are repaired round by round through KR, selecting
// per violated instance the literal whose incision is smallest. With
// enumerate_all every repair choice is explored; the first outcome is the
// deterministic one.
inline std::vector<RevisionOutcome> generalized_revision_all(const KnowledgeBase& kb,
                                                             const Atom& alpha,
                                                             const RevisionOptions& opts = {}) {
    if (!alpha.ground()) throw precondition_error("revision: alpha must be ground");
    std::set<std::string> extras;
    for (const auto& t : alpha.args) extras.insert(t.name);

    RevisionOutcome unchanged;
    unchanged.kb_prime = kb;

    // Vacuity 1: alpha conflicts with the immutable theory alone.
    if (detail::inconsistent_with_immutable(kb, alpha, extras)) return {unchanged};

    bool is_view = kb.view_predicates().count(alpha.pred) != 0;

    std::vector<std::pair<AtomSet, AtomSet>> starts;  // (facts, protected)
    if (!is_view) {
        AtomSet facts = kb.kb_u;
        facts.insert(alpha);
        starts.push_back({std::move(facts), AtomSet{alpha}});
    } else if (entails(kb, alpha)) {
        starts.push_back({kb.kb_u, AtomSet{}});
    } else {
        RepairOptions ropts;
        ropts.max_del_repair = opts.max_del_repair;
        ropts.node_cap = opts.node_cap;
        ropts.extra_constants = extras;
        auto realizations = insertion_realizations(kb, alpha, ropts);
        if (realizations.empty()) return {unchanged};
        size_t take = opts.enumerate_all ? realizations.size() : 1;
        for (size_t i = 0; i < take; ++i) {
            AtomSet facts = kb.kb_u;
            for (const auto& d : realizations[i].delta_minus) facts.erase(d);
            AtomSet prot = realizations[i].delta_plus;
            facts.insert(prot.begin(), prot.end());
            starts.push_back({std::move(facts), std::move(prot)});
        }
    }

    const size_t round_cap = herbrand_base(kb, extras).size() + 1;
    std::vector<RevisionOutcome> outcomes;
    std::set<AtomSet> seen_states;

    struct State {
        AtomSet facts;
        AtomSet protect;
        size_t rounds;
    };
    std::vector<State> work;
    for (auto& [f, p] : starts) work.push_back({f, p, 0});

    while (!work.empty()) {
        State st = std::move(work.back());
        work.pop_back();
        KnowledgeBase cur = with_facts(kb, st.facts);
        auto violated = violated_constraints(cur, extras);
        if (violated.empty()) {
            if (seen_states.insert(st.facts).second) {
                RevisionOutcome out;
                out.kb_prime = cur;
                out.applied = detail::diff_facts(kb.kb_u, st.facts);
                out.iterations = st.rounds;
                outcomes.push_back(std::move(out));
            }
            if (!opts.enumerate_all && !outcomes.empty()) break;
            continue;
        }
        if (st.rounds >= round_cap) throw iteration_cap_error("revision: IC loop cap exceeded");

        // Per violated instance: candidate body literals whose incision would
        // falsify it, ordered by (removal size, removal, literal).
        struct Choice {
            AtomSet removal;
            Atom literal;
        };
        auto instance_choices = [&](const HornClause& inst) {
            std::vector<Choice> choices;
            for (const auto& b : inst.body) {
                AtomSet pool = detail::relevant_support_atoms(kb, st.facts, b, extras);
                for (const auto& p : st.protect) pool.erase(p);
                auto blocked = [&](const AtomSet& del) {
                    AtomSet trial = st.facts;
                    for (const auto& d : del) trial.erase(d);
                    return !entails(with_facts(kb, trial), b);
                };
                for (auto& rem : detail::minimal_deletion_sets(pool, opts.max_del_repair, blocked))
                    if (!rem.empty()) choices.push_back({rem, b});
            }
            std::sort(choices.begin(), choices.end(), [](const Choice& x, const Choice& y) {
                if (x.removal.size() != y.removal.size()) return x.removal.size() < y.removal.size();
                if (x.removal != y.removal) return x.removal < y.removal;
                return x.literal < y.literal;
            });
            return choices;
        };

        auto step_with = [&](const AtomSet& removals_literals) {
            RevisionOptions kropts = opts;
            kropts.protected_facts = st.protect;
            KnowledgeBase snap = with_facts(kb, st.facts);
            RevisionOutcome step = kr(snap, {}, removals_literals, kropts);
            work.push_back({step.kb_prime.kb_u, st.protect, st.rounds + 1});
        };

        if (!opts.enumerate_all) {
            // Every violated instance is processed this round.
            AtomSet chosen_literals;
            bool unrepairable = false;
            for (const auto& [ic, sub] : violated) {
                auto choices = instance_choices(substitute(sub, ic));
                if (choices.empty()) {
                    unrepairable = true;
                    break;
                }
                chosen_literals.insert(choices.front().literal);
            }
            if (unrepairable) {
                if (seen_states.insert(kb.kb_u).second) outcomes.push_back(unchanged);
                break;
            }
            step_with(chosen_literals);
        } else {
            // Branch over every incision choice of the first instance; later
            // rounds handle the remaining instances.
            const auto& [ic, sub] = violated.front();
            auto choices = instance_choices(substitute(sub, ic));
            if (choices.empty()) {
                if (seen_states.insert(kb.kb_u).second) outcomes.push_back(unchanged);
                continue;
            }
            for (const auto& c : choices) {
                AtomSet next = st.facts;
                for (const auto& d : c.removal) next.erase(d);
                work.push_back({std::move(next), st.protect, st.rounds + 1});
            }
        }
    }

    if (outcomes.empty()) outcomes.push_back(unchanged);
    std::sort(outcomes.begin(), outcomes.end(),
              [](const RevisionOutcome& a, const RevisionOutcome& b) {
                  if (a.applied.size() != b.applied.size()) return a.applied.size() < b.applied.size();
                  return a.applied < b.applied;
              });
    return outcomes;
}

inline RevisionOutcome generalized_revision(const KnowledgeBase& kb, const Atom& alpha,
                                            const RevisionOptions& opts = {}) {
    return generalized_revision_all(kb, alpha, opts).front();
}

// ---------------------------------------------------------------------------
// Rationality postulates

enum class Verdict { pass, fail, skipped };

struct PostulateReport {
    struct Entry {
        std::string name;
        Verdict verdict = Verdict::pass;
        std::string reason;  // set for skipped verdicts
    };
    std::vector<Entry> entries;

    Verdict verdict(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return e.verdict;
        throw semantic_error("unknown postulate: " + name);
    }
    bool all_pass_or_skipped() const {
        for (const auto& e : entries)
            if (e.verdict == Verdict::fail) return false;
        return true;
    }
};

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "skipped";
    }
}

// Re-runs the revision operator for the preservation check: maps a signed
// request literal to the set of resulting fact states, or nullopt when the
// request lies outside the operator's domain.
using Reviser =
    std::function<std::optional<std::vector<AtomSet>>(const KnowledgeBase&, const Literal&)>;

struct PostulateOptions {
    size_t kb6_universe_cap = 12;
    size_t witness_universe_cap = 16;
    Reviser reviser;  // optional; KB*6 is skipped without it
};

namespace detail {

struct PostulateContext {
    const KnowledgeBase& kb;
    std::set<std::string> extras;
    GroundEngine eng;
    // IC bodies as (interned id, atom) pairs; uninterned atoms fall back to
    // direct fact membership.
    std::vector<std::vector<std::pair<int, Atom>>> ic_bodies;

    PostulateContext(const KnowledgeBase& kb_, const Literal& alpha) : kb(kb_), eng{} {
        for (const auto& t : alpha.atom.args) extras.insert(t.name);
        eng = GroundEngine(kb, extras);
        std::set<std::string> universe = kb.constants();
        universe.insert(extras.begin(), extras.end());
        for (const auto& ic : ground_ics(kb, universe)) {
            std::vector<std::pair<int, Atom>> body;
            for (const auto& b : ic.body) body.emplace_back(eng.id_of(b), b);
            ic_bodies.push_back(std::move(body));
        }
    }

    bool holds(const std::vector<bool>& truth, const AtomSet& facts,
               const std::pair<int, Atom>& entry) const {
        if (entry.first >= 0) return truth[static_cast<size_t>(entry.first)];
        return facts.count(entry.second) != 0;
    }

    bool consistent_truth(const std::vector<bool>& truth, const AtomSet& facts) const {
        for (const auto& body : ic_bodies) {
            bool violated = true;
            for (const auto& entry : body)
                if (!holds(truth, facts, entry)) {
                    violated = false;
                    break;
                }
            if (violated) return false;
        }
        return true;
    }

    bool consistent(const AtomSet& facts) const {
        return consistent_truth(eng.model_of(facts), facts);
    }

    bool derives(const AtomSet& facts, const Atom& a) const { return eng.entails(facts, a); }

    // "E is consistent with alpha wrt KB_I u KB_IC".
    bool compatible(const AtomSet& facts, const Literal& alpha) const {
        if (alpha.positive()) {
            AtomSet with = facts;
            with.insert(alpha.atom);
            return consistent(with);
        }
        auto truth = eng.model_of(facts);
        if (!consistent_truth(truth, facts)) return false;
        int id = eng.id_of(alpha.atom);
        bool derived = id >= 0 ? truth[static_cast<size_t>(id)] : facts.count(alpha.atom) != 0;
        return !derived;
    }
};

}  // namespace detail

// Evaluates KB*1 - KB*7.3 for a revision of `alpha` (positive literal:
// insertion; negative literal: deletion) that produced kb_prime from kb.
inline PostulateReport check_postulates(const KnowledgeBase& kb, const Literal& alpha,
                                        const KnowledgeBase& kb_prime,
                                        const PostulateOptions& opts = {}) {
    detail::PostulateContext ctx(kb, alpha);
    PostulateReport report;
    auto add = [&](const std::string& name, Verdict v, std::string reason = "") {
        report.entries.push_back({name, v, std::move(reason)});
    };
    auto as_verdict = [](bool ok) { return ok ? Verdict::pass : Verdict::fail; };

    const Atom& a = alpha.atom;
    const bool alpha_ok_immutable = ctx.compatible({}, alpha);
    const AtomSet cn_before = ctx.eng.least_model(kb.kb_u);
    const AtomSet cn_after = ctx.eng.least_model(kb_prime.kb_u);

    // KB*1 Closure: the result is a well-formed knowledge base over the same
    // immutable part and constraints.
    {
        bool ok = kb_prime.kb_i == kb.kb_i && kb_prime.kb_ic == kb.kb_ic;
        if (ok) {
            try {
                validate_kb(kb_prime);
            } catch (const semantic_error&) {
                ok = false;
            }
        }
        add("KB*1", as_verdict(ok));
    }

    // KB*2 Weak success.
    {
        bool ok = true;
        if (alpha_ok_immutable)
            ok = alpha.positive() ? cn_after.count(a) != 0 : cn_after.count(a) == 0;
        add("KB*2", as_verdict(ok));
    }

    // KB*3.1 Inclusion: nothing appears beyond KB u alpha.
    {
        bool ok;
        if (alpha.positive()) {
            AtomSet grown = kb.kb_u;
            grown.insert(a);
            ok = std::includes(grown.begin(), grown.end(), kb_prime.kb_u.begin(),
                               kb_prime.kb_u.end());
            if (ok) {
                AtomSet cn_grown = ctx.eng.least_model(grown);
                ok = std::includes(cn_grown.begin(), cn_grown.end(), cn_after.begin(),
                                   cn_after.end());
            }
        } else {
            ok = std::includes(kb.kb_u.begin(), kb.kb_u.end(), kb_prime.kb_u.begin(),
                               kb_prime.kb_u.end());
        }
        add("KB*3.1", as_verdict(ok));
    }

    // KB*3.2 Immutable inclusion.
    add("KB*3.2", as_verdict(kb_prime.kb_i == kb.kb_i));

    // KB*4.1 Vacuity 1.
    {
        bool ok = true;
        if (!alpha_ok_immutable) ok = kb_prime.kb_u == kb.kb_u;
        add("KB*4.1", as_verdict(ok));
    }

    // KB*4.2 Vacuity 2: no conflict means plain expansion.
    {
        bool ok = true;
        if (alpha.positive()) {
            AtomSet grown = kb.kb_u;
            bool base_pred = kb.view_predicates().count(a.pred) == 0;
            if (base_pred) grown.insert(a);
            bool no_conflict = base_pred ? ctx.consistent(grown)
                                         : (cn_before.count(a) != 0 && ctx.consistent(kb.kb_u));
            if (no_conflict) ok = kb_prime.kb_u == grown;
        } else {
            if (cn_before.count(a) == 0) ok = kb_prime.kb_u == kb.kb_u;
        }
        add("KB*4.2", as_verdict(ok));
    }

    // KB*5 Consistency.
    {
        bool ok = true;
        if (alpha_ok_immutable) ok = ctx.consistent(kb_prime.kb_u);
        add("KB*5", as_verdict(ok));
    }

    // KB*6 Preservation: KB-equivalent requests give equivalent results.
    {
        AtomSet universe = base_herbrand_atoms(kb, ctx.extras);
        if (alpha.positive() && !kb.view_predicates().count(a.pred)) universe.insert(a);
        if (!opts.reviser) {
            add("KB*6", Verdict::skipped, "no revision operator supplied");
        } else if (universe.size() > opts.kb6_universe_cap) {
            add("KB*6", Verdict::skipped,
                "updatable Herbrand base exceeds " + std::to_string(opts.kb6_universe_cap) +
                    " atoms");
        } else {
            // Derivability signature of every candidate atom across all
            // subsets of the updatable base; equal signatures mean
            // KB-equivalence.
            std::vector<Atom> uni(universe.begin(), universe.end());
            AtomSet hb = herbrand_base(kb, ctx.extras);
            hb.insert(a);
            std::vector<Atom> candidates(hb.begin(), hb.end());
            std::map<Atom, std::vector<bool>> signature;
            for (const auto& c : candidates) signature[c] = {};
            for (size_t mask = 0; mask < (size_t{1} << uni.size()); ++mask) {
                AtomSet e;
                for (size_t i = 0; i < uni.size(); ++i)
                    if (mask & (size_t{1} << i)) e.insert(uni[i]);
                auto truth = ctx.eng.model_of(e);
                for (const auto& c : candidates) {
                    int id = ctx.eng.id_of(c);
                    bool derived =
                        id >= 0 ? truth[static_cast<size_t>(id)] : e.count(c) != 0;
                    signature[c].push_back(derived);
                }
            }
            auto canonical_outcomes =
                [&](const Literal& lit) -> std::optional<std::set<AtomSet>> {
                auto res = opts.reviser(kb, lit);
                if (!res) return std::nullopt;
                std::set<AtomSet> models;
                for (const auto& facts : *res) models.insert(ctx.eng.least_model(facts));
                return models;
            };
            bool ok = true;
            auto mine = canonical_outcomes(alpha);
            if (!mine) {
                add("KB*6", Verdict::skipped, "request outside operator domain");
            } else {
                auto sig_alpha = signature.find(a);
                for (const auto& b : candidates) {
                    if (b == a) continue;
                    if (sig_alpha != signature.end() && signature[b] != sig_alpha->second)
                        continue;
                    auto theirs = canonical_outcomes(Literal{b, alpha.pol});
                    if (theirs && *theirs != *mine) {
                        ok = false;
                        break;
                    }
                }
                add("KB*6", as_verdict(ok));
            }
        }
    }

    // KB*7.1 Strong relevance: success whenever the immutable part allows it.
    {
        bool ok = true;
        if (alpha_ok_immutable)
            ok = alpha.positive() ? cn_after.count(a) != 0 : cn_after.count(a) == 0;
        add("KB*7.1", as_verdict(ok));
    }

    // KB*7.2 Relevance and KB*7.3 Weak relevance: every removed fact has a
    // witness KB' below KB u alpha that is compatible with alpha but stops
    // being so when the fact returns. KB*7.2 pins the witness above KB*alpha
    // (so it keeps the whole immutable part); KB*7.3 follows core-retainment,
    // where the witness may also drop rules.
    {
        AtomSet removed;
        for (const auto& f : kb.kb_u)
            if (!kb_prime.kb_u.count(f)) removed.insert(f);

        AtomSet witness_universe = kb.kb_u;
        if (alpha.positive() && kb.view_predicates().count(a.pred) == 0)
            witness_universe.insert(a);

        if (witness_universe.size() > opts.witness_universe_cap ||
            kb.kb_i.size() > opts.witness_universe_cap) {
            add("KB*7.2", Verdict::skipped, "witness universe too large");
            add("KB*7.3", Verdict::skipped, "witness universe too large");
        } else if (removed.empty()) {
            add("KB*7.2", Verdict::pass);
            add("KB*7.3", Verdict::pass);
        } else {
            std::vector<Atom> uni(witness_universe.begin(), witness_universe.end());

            bool ok_72 = true;
            for (const auto& beta : removed) {
                bool witness_72 = false;
                for (size_t mask = 0; mask < (size_t{1} << uni.size()) && !witness_72; ++mask) {
                    AtomSet e;
                    for (size_t i = 0; i < uni.size(); ++i)
                        if (mask & (size_t{1} << i)) e.insert(uni[i]);
                    if (e.count(beta)) continue;
                    if (!std::includes(e.begin(), e.end(), kb_prime.kb_u.begin(),
                                       kb_prime.kb_u.end()))
                        continue;
                    if (!ctx.compatible(e, alpha)) continue;
                    AtomSet with_beta = e;
                    with_beta.insert(beta);
                    if (!ctx.compatible(with_beta, alpha)) witness_72 = true;
                }
                ok_72 = ok_72 && witness_72;
            }
            add("KB*7.2", as_verdict(ok_72));

            // Witness search over rule subsets times fact subsets.
            AtomSet pending = removed;
            for (size_t rmask = 0; rmask < (size_t{1} << kb.kb_i.size()) && !pending.empty();
                 ++rmask) {
                KnowledgeBase sub = kb;
                sub.kb_i.clear();
                for (size_t i = 0; i < kb.kb_i.size(); ++i)
                    if (rmask & (size_t{1} << i)) sub.kb_i.push_back(kb.kb_i[i]);
                detail::PostulateContext sub_ctx(sub, alpha);
                for (size_t mask = 0; mask < (size_t{1} << uni.size()) && !pending.empty();
                     ++mask) {
                    AtomSet e;
                    for (size_t i = 0; i < uni.size(); ++i)
                        if (mask & (size_t{1} << i)) e.insert(uni[i]);
                    if (!sub_ctx.compatible(e, alpha)) continue;
                    for (const auto& beta : AtomSet(pending)) {
                        if (e.count(beta)) continue;
                        AtomSet with_beta = e;
                        with_beta.insert(beta);
                        if (!sub_ctx.compatible(with_beta, alpha)) pending.erase(beta);
                    }
                }
            }
            add("KB*7.3", as_verdict(pending.empty()));
        }
    }
    return report;
}

inline std::string report_to_json(const PostulateReport& report) {
    std::string out = "{";
    bool first = true;
    for (const auto& e : report.entries) {
        if (!first) out += ",";
        out += "\"" + e.name + "\":\"" + to_string(e.verdict);
        if (e.verdict == Verdict::skipped && !e.reason.empty()) out += "(" + e.reason + ")";
        out += "\"";
        first = false;
    }
    return out + "}";
}

}  // namespace hornbase
