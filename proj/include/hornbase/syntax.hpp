// Logical syntax for function-free Horn programs: terms, atoms, literals,
// clauses, knowledge bases, substitutions, unification, ground instantiation.
#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hornbase {

// ---------------------------------------------------------------------------
// Errors

struct semantic_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct iteration_cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Terms

// Variables start with an uppercase letter, constants with anything else
// (Prolog convention). No function symbols exist.
struct Term {
    std::string name;

    bool is_variable() const { return !name.empty() && name[0] >= 'A' && name[0] <= 'Z'; }
    bool is_constant() const { return !is_variable(); }

    auto operator<=>(const Term&) const = default;
};

inline Term constant(std::string name) {
    Term t{std::move(name)};
    if (t.is_variable()) throw semantic_error("constant must not start uppercase: " + t.name);
    return t;
}

inline Term variable(std::string name) {
    Term t{std::move(name)};
    if (!t.is_variable()) throw semantic_error("variable must start uppercase: " + t.name);
    return t;
}

// ---------------------------------------------------------------------------
// Atoms and literals

struct Atom {
    std::string pred;
    std::vector<Term> args;

    bool ground() const {
        return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_constant(); });
    }
    size_t arity() const { return args.size(); }

    auto operator<=>(const Atom&) const = default;
};

inline Atom atom(std::string pred, std::vector<std::string> names = {}) {
    Atom a{std::move(pred), {}};
    a.args.reserve(names.size());
    for (auto& n : names) a.args.push_back(Term{std::move(n)});
    return a;
}

enum class Polarity { positive, negative };

struct Literal {
    Atom atom;
    Polarity pol = Polarity::positive;

    bool positive() const { return pol == Polarity::positive; }
    Literal complement() const {
        return Literal{atom, positive() ? Polarity::negative : Polarity::positive};
    }
    auto operator<=>(const Literal&) const = default;
};

inline Literal pos(Atom a) { return Literal{std::move(a), Polarity::positive}; }
inline Literal neg(Atom a) { return Literal{std::move(a), Polarity::negative}; }

// ---------------------------------------------------------------------------
// Clauses

// Built-in disequation guard t1 != t2.
struct Disequation {
    Term lhs, rhs;
    auto operator<=>(const Disequation&) const = default;
};

// head absent  => integrity constraint (denial)
// empty body and ground head => fact
struct HornClause {
    std::optional<Atom> head;
    std::vector<Atom> body;
    std::vector<Disequation> guards;

    bool is_denial() const { return !head.has_value(); }
    bool is_fact() const { return head && body.empty() && guards.empty() && head->ground(); }
    bool is_rule() const { return head && !body.empty(); }
    bool ground() const {
        if (head && !head->ground()) return false;
        for (const auto& b : body)
            if (!b.ground()) return false;
        for (const auto& g : guards)
            if (g.lhs.is_variable() || g.rhs.is_variable()) return false;
        return true;
    }

    auto operator<=>(const HornClause&) const = default;
};

inline HornClause fact(Atom a) { return HornClause{std::move(a), {}, {}}; }
inline HornClause rule(Atom head, std::vector<Atom> body, std::vector<Disequation> guards = {}) {
    return HornClause{std::move(head), std::move(body), std::move(guards)};
}
inline HornClause denial(std::vector<Atom> body, std::vector<Disequation> guards = {}) {
    return HornClause{std::nullopt, std::move(body), std::move(guards)};
}

using AtomSet = std::set<Atom>;
using SetOfAtomSets = std::set<AtomSet>;

// ---------------------------------------------------------------------------
// Printing

inline std::string to_string(const Term& t) { return t.name; }

inline std::string to_string(const Atom& a) {
    if (a.args.empty()) return a.pred;
    std::string s = a.pred + "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
        if (i) s += ",";
        s += a.args[i].name;
    }
    return s + ")";
}

inline std::string to_string(const Literal& l) {
    return l.positive() ? to_string(l.atom) : "-" + to_string(l.atom);
}

inline std::string to_string(const HornClause& c) {
    std::string s;
    if (c.head) s += to_string(*c.head);
    if (!c.body.empty() || !c.guards.empty()) {
        s += c.head ? " :- " : ":- ";
        bool first = true;
        for (const auto& b : c.body) {
            if (!first) s += ", ";
            s += to_string(b);
            first = false;
        }
        for (const auto& g : c.guards) {
            if (!first) s += ", ";
            s += g.lhs.name + " != " + g.rhs.name;
            first = false;
        }
    }
    return s + ".";
}

inline std::string to_string(const AtomSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& a : s) {
        if (!first) out += ", ";
        out += to_string(a);
        first = false;
    }
    return out + "}";
}

// ---------------------------------------------------------------------------
// Knowledge base

// KB = immutable rules (kb_i), updatable ground facts (kb_u), denials (kb_ic).
// View predicates are those defined by rule heads, base predicates those in
// kb_u; no predicate may be both.
struct KnowledgeBase {
    std::vector<HornClause> kb_i;
    AtomSet kb_u;
    std::vector<HornClause> kb_ic;

    auto operator<=>(const KnowledgeBase&) const = default;

    std::set<std::string> view_predicates() const {
        std::set<std::string> v;
        for (const auto& c : kb_i)
            if (c.head) v.insert(c.head->pred);
        return v;
    }
    std::set<std::string> base_predicates() const {
        std::set<std::string> b;
        auto views = view_predicates();
        for (const auto& a : kb_u) b.insert(a.pred);
        // Base predicates also show up only in rule/IC bodies.
        auto scan = [&](const HornClause& c) {
            for (const auto& a : c.body)
                if (!views.count(a.pred)) b.insert(a.pred);
        };
        for (const auto& c : kb_i) scan(c);
        for (const auto& c : kb_ic) scan(c);
        return b;
    }

    std::set<std::string> constants() const {
        std::set<std::string> cs;
        auto scan_atom = [&](const Atom& a) {
            for (const auto& t : a.args)
                if (t.is_constant()) cs.insert(t.name);
        };
        auto scan = [&](const HornClause& c) {
            if (c.head) scan_atom(*c.head);
            for (const auto& a : c.body) scan_atom(a);
            for (const auto& g : c.guards) {
                if (g.lhs.is_constant()) cs.insert(g.lhs.name);
                if (g.rhs.is_constant()) cs.insert(g.rhs.name);
            }
        };
        for (const auto& c : kb_i) scan(c);
        for (const auto& a : kb_u) scan_atom(a);
        for (const auto& c : kb_ic) scan(c);
        return cs;
    }

    // First occurrence fixes the arity of each predicate.
    std::map<std::string, size_t> arities() const {
        std::map<std::string, size_t> ar;
        auto note = [&](const Atom& a) {
            auto [it, inserted] = ar.emplace(a.pred, a.arity());
            if (!inserted && it->second != a.arity())
                throw semantic_error("arity conflict for predicate " + a.pred);
        };
        for (const auto& c : kb_i) {
            if (c.head) note(*c.head);
            for (const auto& a : c.body) note(a);
        }
        for (const auto& a : kb_u) note(a);
        for (const auto& c : kb_ic)
            for (const auto& a : c.body) note(a);
        return ar;
    }
};

// Checks Def-1 style well-formedness; throws semantic_error on violation.
inline void validate_kb(const KnowledgeBase& kb) {
    kb.arities();
    auto views = kb.view_predicates();
    for (const auto& c : kb.kb_i) {
        if (!c.is_rule()) throw semantic_error("kb_i clause is not a rule: " + to_string(c));
        std::set<std::string> body_vars;
        for (const auto& a : c.body)
            for (const auto& t : a.args)
                if (t.is_variable()) body_vars.insert(t.name);
        for (const auto& t : c.head->args)
            if (t.is_variable() && !body_vars.count(t.name))
                throw semantic_error("unsafe clause (head variable " + t.name +
                                     " not in body): " + to_string(c));
        for (const auto& g : c.guards)
            for (const Term* t : {&g.lhs, &g.rhs})
                if (t->is_variable() && !body_vars.count(t->name))
                    throw semantic_error("unsafe guard variable " + t->name + " in " + to_string(c));
    }
    for (const auto& a : kb.kb_u) {
        if (!a.ground()) throw semantic_error("non-ground EDB fact: " + to_string(a));
        if (views.count(a.pred))
            throw semantic_error("predicate is both view and base: " + a.pred);
    }
    for (const auto& c : kb.kb_ic) {
        if (!c.is_denial()) throw semantic_error("kb_ic clause is not a denial: " + to_string(c));
        std::set<std::string> body_vars;
        for (const auto& a : c.body)
            for (const auto& t : a.args)
                if (t.is_variable()) body_vars.insert(t.name);
        for (const auto& g : c.guards)
            for (const Term* t : {&g.lhs, &g.rhs})
                if (t->is_variable() && !body_vars.count(t->name))
                    throw semantic_error("unsafe guard variable " + t->name + " in " + to_string(c));
    }
}

// ---------------------------------------------------------------------------
// Substitutions and unification

// Variable name -> term. Engine-produced bindings map to constants only;
// unification of two non-ground atoms may bind variable to variable.
using Substitution = std::map<std::string, Term>;

inline Term substitute(const Substitution& s, const Term& t) {
    if (t.is_variable()) {
        auto it = s.find(t.name);
        if (it != s.end()) return it->second;
    }
    return t;
}

inline Atom substitute(const Substitution& s, const Atom& a) {
    Atom out{a.pred, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(substitute(s, t));
    return out;
}

inline HornClause substitute(const Substitution& s, const HornClause& c) {
    HornClause out;
    if (c.head) out.head = substitute(s, *c.head);
    for (const auto& a : c.body) out.body.push_back(substitute(s, a));
    for (const auto& g : c.guards) out.guards.push_back({substitute(s, g.lhs), substitute(s, g.rhs)});
    return out;
}

// Positional most-general unifier for function-free atoms.
inline std::optional<Substitution> unify(const Atom& a1, const Atom& a2) {
    if (a1.pred != a2.pred) return std::nullopt;
    if (a1.args.size() != a2.args.size())
        throw semantic_error("arity mismatch unifying " + to_string(a1) + " and " + to_string(a2));
    Substitution s;
    auto walk = [&](Term t) {
        while (t.is_variable()) {
            auto it = s.find(t.name);
            if (it == s.end()) break;
            t = it->second;
        }
        return t;
    };
    for (size_t i = 0; i < a1.args.size(); ++i) {
        Term x = walk(a1.args[i]);
        Term y = walk(a2.args[i]);
        if (x == y) continue;
        if (x.is_variable())
            s[x.name] = y;
        else if (y.is_variable())
            s[y.name] = x;
        else
            return std::nullopt;  // constant clash
    }
    // Resolve chains so the substitution is idempotent.
    for (auto& [v, t] : s) t = walk(t);
    return s;
}

// ---------------------------------------------------------------------------
// Ground instantiation and Herbrand base

inline bool guards_hold(const HornClause& ground_clause) {
    for (const auto& g : ground_clause.guards)
        if (g.lhs == g.rhs) return false;
    return true;
}

inline std::vector<std::string> clause_variables(const HornClause& c) {
    std::set<std::string> vars;
    auto scan_atom = [&](const Atom& a) {
        for (const auto& t : a.args)
            if (t.is_variable()) vars.insert(t.name);
    };
    if (c.head) scan_atom(*c.head);
    for (const auto& a : c.body) scan_atom(a);
    for (const auto& g : c.guards) {
        if (g.lhs.is_variable()) vars.insert(g.lhs.name);
        if (g.rhs.is_variable()) vars.insert(g.rhs.name);
    }
    return {vars.begin(), vars.end()};
}

// All instances of one clause over the given constants; guard-violating
// instances (t != t) are dropped, satisfied ground guards are erased.
inline std::vector<HornClause> ground_clause(const HornClause& c,
                                             const std::set<std::string>& universe) {
    auto vars = clause_variables(c);
    std::vector<HornClause> out;
    if (vars.empty()) {
        if (guards_hold(c)) {
            HornClause g = c;
            g.guards.clear();
            out.push_back(std::move(g));
        }
        return out;
    }
    if (universe.empty()) return out;  // no instances exist
    std::vector<std::string> consts(universe.begin(), universe.end());
    std::vector<size_t> idx(vars.size(), 0);
    while (true) {
        Substitution s;
        for (size_t i = 0; i < vars.size(); ++i) s[vars[i]] = Term{consts[idx[i]]};
        HornClause inst = substitute(s, c);
        if (guards_hold(inst)) {
            inst.guards.clear();
            out.push_back(std::move(inst));
        }
        size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < consts.size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) break;
    }
    return out;
}

inline std::vector<HornClause> ground_rules(const KnowledgeBase& kb,
                                            const std::set<std::string>& universe) {
    std::vector<HornClause> out;
    for (const auto& c : kb.kb_i)
        for (auto& g : ground_clause(c, universe)) out.push_back(std::move(g));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::vector<HornClause> ground_ics(const KnowledgeBase& kb,
                                          const std::set<std::string>& universe) {
    std::vector<HornClause> out;
    for (const auto& c : kb.kb_ic)
        for (auto& g : ground_clause(c, universe)) out.push_back(std::move(g));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// IDB_G ∪ EDB ∪ IC_G over the constants of kb.
inline std::vector<HornClause> ground_instantiation(const KnowledgeBase& kb) {
    auto universe = kb.constants();
    std::vector<HornClause> out = ground_rules(kb, universe);
    for (const auto& a : kb.kb_u) out.push_back(fact(a));
    for (auto& c : ground_ics(kb, universe)) out.push_back(std::move(c));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline AtomSet herbrand_base(const KnowledgeBase& kb,
                             const std::set<std::string>& extra_constants = {}) {
    std::set<std::string> universe = kb.constants();
    universe.insert(extra_constants.begin(), extra_constants.end());
    std::vector<std::string> consts(universe.begin(), universe.end());
    AtomSet out;
    for (const auto& [pred, arity] : kb.arities()) {
        if (arity == 0) {
            out.insert(Atom{pred, {}});
            continue;
        }
        if (consts.empty()) continue;
        std::vector<size_t> idx(arity, 0);
        while (true) {
            Atom a{pred, {}};
            for (size_t i = 0; i < arity; ++i) a.args.push_back(Term{consts[idx[i]]});
            out.insert(std::move(a));
            size_t i = 0;
            for (; i < idx.size(); ++i) {
                if (++idx[i] < consts.size()) break;
                idx[i] = 0;
            }
            if (i == idx.size()) break;
        }
    }
    return out;
}

// Ground base-predicate atoms: the abducible universe.
inline AtomSet base_herbrand_atoms(const KnowledgeBase& kb,
                                   const std::set<std::string>& extra_constants = {}) {
    auto base = kb.base_predicates();
    AtomSet out;
    for (auto& a : herbrand_base(kb, extra_constants))
        if (base.count(a.pred)) out.insert(a);
    return out;
}

}  // namespace hornbase
