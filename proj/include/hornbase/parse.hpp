// Parser and serializer for the .ddb database format and update requests.
//
// program  := section+
// section  := "#IDB" clause* | "#EDB" fact* | "#IC" denial*
// clause   := atom ":-" literals "." | atom "."
// denial   := ":-" literals "."
// literals := (atom | term "!=" term) ("," ...)*
// ident    := [a-z][A-Za-z0-9_]*   (constants, predicates)
//             [A-Z][A-Za-z0-9_]*   (variables)
// "%" starts a line comment.
//
// Request files: lines of ("+"|"-") SP atom "."
#pragma once

#include <cctype>
#include <sstream>
#include <string>

#include "syntax.hpp"

namespace hornbase {

struct parse_error : std::runtime_error {
    int line, column;
    parse_error(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " +
                             std::to_string(col_)),
          line(line_),
          column(col_) {}
};

// Facts to be inserted (nu_plus) and deleted (nu_minus); view atoms only,
// disjoint, ground.
struct UpdateRequest {
    AtomSet nu_plus;
    AtomSet nu_minus;

    bool empty() const { return nu_plus.empty() && nu_minus.empty(); }
    auto operator<=>(const UpdateRequest&) const = default;
};

// Raw clause text with source spans, one entry per clause, by section.
struct SourceProgram {
    struct Span {
        int line = 0, column = 0;
        std::string text;
    };
    std::vector<Span> idb_section, edb_section, ic_section;
};

namespace detail {

class Scanner {
public:
    explicit Scanner(const std::string& text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else {
                break;
            }
        }
    }

    bool eof() {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    bool try_consume(const std::string& tok) {
        skip_ws();
        if (text_.compare(pos_, tok.size(), tok) == 0) {
            advance(tok.size());
            return true;
        }
        return false;
    }

    void expect(const std::string& tok) {
        skip_ws();
        if (!try_consume(tok)) fail("expected '" + tok + "'");
    }

    std::string identifier() {
        skip_ws();
        if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(peek())))
            fail("expected identifier");
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            advance(1);
        return text_.substr(start, pos_ - start);
    }

    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, line_, col_); }

    int line() {
        skip_ws();
        return line_;
    }
    int column() {
        skip_ws();
        return col_;
    }
    size_t offset() {
        skip_ws();
        return pos_;
    }
    size_t raw_offset() const { return pos_; }

private:
    void advance(size_t n) {
        for (size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

inline Atom parse_atom(Scanner& sc) {
    Atom a;
    a.pred = sc.identifier();
    if (a.pred[0] >= 'A' && a.pred[0] <= 'Z') sc.fail("predicate must start lowercase");
    if (sc.try_consume("(")) {
        if (!sc.try_consume(")")) {
            do {
                a.args.push_back(Term{sc.identifier()});
            } while (sc.try_consume(","));
            sc.expect(")");
        }
    }
    return a;
}

// Body element: either an atom or a guard  t1 != t2.
inline void parse_body(Scanner& sc, HornClause& c) {
    do {
        std::string first = sc.identifier();
        if (sc.try_consume("!=")) {
            Term lhs{first};
            Term rhs{sc.identifier()};
            c.guards.push_back({lhs, rhs});
        } else {
            if (first[0] >= 'A' && first[0] <= 'Z') sc.fail("predicate must start lowercase");
            Atom a{first, {}};
            if (sc.try_consume("(")) {
                if (!sc.try_consume(")")) {
                    do {
                        a.args.push_back(Term{sc.identifier()});
                    } while (sc.try_consume(","));
                    sc.expect(")");
                }
            }
            c.body.push_back(std::move(a));
        }
    } while (sc.try_consume(","));
}

}  // namespace detail

// Parses and validates a .ddb program. Section order is free; sections may
// repeat. Throws parse_error (syntax) or semantic_error (well-formedness).
inline KnowledgeBase parse_program(const std::string& text, SourceProgram* source = nullptr) {
    detail::Scanner sc(text);
    KnowledgeBase kb;
    enum class Section { none, idb, edb, ic } section = Section::none;

    while (!sc.eof()) {
        if (sc.try_consume("#IDB")) {
            section = Section::idb;
            continue;
        }
        if (sc.try_consume("#EDB")) {
            section = Section::edb;
            continue;
        }
        if (sc.try_consume("#IC")) {
            section = Section::ic;
            continue;
        }
        if (section == Section::none) sc.fail("expected a section marker (#IDB, #EDB or #IC)");

        int line = sc.line(), col = sc.column();
        size_t start = sc.offset();
        HornClause c;
        if (section == Section::ic) {
            sc.expect(":-");
            detail::parse_body(sc, c);
        } else {
            c.head = detail::parse_atom(sc);
            if (sc.try_consume(":-")) detail::parse_body(sc, c);
        }
        sc.expect(".");
        std::string raw = text.substr(start, sc.raw_offset() - start);

        switch (section) {
            case Section::idb:
                if (!c.is_rule()) throw parse_error("IDB clause must be a rule (non-unit)", line, col);
                kb.kb_i.push_back(c);
                if (source) source->idb_section.push_back({line, col, raw});
                break;
            case Section::edb:
                if (!c.body.empty() || !c.guards.empty())
                    throw parse_error("EDB entry must be a fact", line, col);
                if (!c.head->ground()) throw parse_error("non-ground EDB fact", line, col);
                kb.kb_u.insert(*c.head);
                if (source) source->edb_section.push_back({line, col, raw});
                break;
            default:
                kb.kb_ic.push_back(c);
                if (source) source->ic_section.push_back({line, col, raw});
                break;
        }
    }
    std::sort(kb.kb_i.begin(), kb.kb_i.end());
    kb.kb_i.erase(std::unique(kb.kb_i.begin(), kb.kb_i.end()), kb.kb_i.end());
    std::sort(kb.kb_ic.begin(), kb.kb_ic.end());
    kb.kb_ic.erase(std::unique(kb.kb_ic.begin(), kb.kb_ic.end()), kb.kb_ic.end());
    validate_kb(kb);
    return kb;
}

// Canonical serialization: clauses sorted lexicographically within section.
inline std::string serialize_program(const KnowledgeBase& kb) {
    std::ostringstream out;
    auto sorted_strings = [](auto begin, auto end) {
        std::vector<std::string> v;
        for (auto it = begin; it != end; ++it) v.push_back(to_string(*it));
        std::sort(v.begin(), v.end());
        return v;
    };
    out << "#IDB\n";
    for (const auto& s : sorted_strings(kb.kb_i.begin(), kb.kb_i.end())) out << s << "\n";
    out << "#EDB\n";
    for (const auto& a : kb.kb_u) out << to_string(a) << ".\n";
    out << "#IC\n";
    for (const auto& s : sorted_strings(kb.kb_ic.begin(), kb.kb_ic.end())) out << s << "\n";
    return out.str();
}

// Parses an update request; checks groundness and nu+/nu- disjointness.
// Predicate-level checks need a knowledge base: see bind_request.
inline UpdateRequest parse_request(const std::string& text) {
    detail::Scanner sc(text);
    UpdateRequest req;
    while (!sc.eof()) {
        bool insert;
        if (sc.try_consume("+"))
            insert = true;
        else if (sc.try_consume("-"))
            insert = false;
        else
            sc.fail("expected '+' or '-'");
        int line = sc.line(), col = sc.column();
        Atom a = detail::parse_atom(sc);
        sc.expect(".");
        if (!a.ground()) throw parse_error("request atom must be ground: " + to_string(a), line, col);
        auto& mine = insert ? req.nu_plus : req.nu_minus;
        auto& other = insert ? req.nu_minus : req.nu_plus;
        if (other.count(a))
            throw parse_error("atom appears in both insertions and deletions: " + to_string(a),
                              line, col);
        mine.insert(a);
    }
    return req;
}

// Context-sensitive request validation: known predicates, view-only, arity.
inline void bind_request(const KnowledgeBase& kb, const UpdateRequest& req) {
    auto views = kb.view_predicates();
    auto arities = kb.arities();
    auto check = [&](const Atom& a) {
        auto it = arities.find(a.pred);
        if (it == arities.end()) throw semantic_error("unknown predicate: " + a.pred);
        if (it->second != a.arity())
            throw semantic_error("arity conflict for predicate " + a.pred);
        if (!views.count(a.pred))
            throw semantic_error("update request must use view predicates only: " + to_string(a));
    };
    for (const auto& a : req.nu_plus) check(a);
    for (const auto& a : req.nu_minus) check(a);
}

inline std::string serialize_request(const UpdateRequest& req) {
    std::ostringstream out;
    for (const auto& a : req.nu_plus) out << "+ " << to_string(a) << ".\n";
    for (const auto& a : req.nu_minus) out << "- " << to_string(a) << ".\n";
    return out.str();
}

}  // namespace hornbase
