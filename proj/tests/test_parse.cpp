#include <catch2/catch_amalgamated.hpp>
#include <fstream>
#include <sstream>

#include "hornbase/generate.hpp"
#include "hornbase/parse.hpp"

using namespace hornbase;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("parse: Example 1 database file", "[parse]") {
    KnowledgeBase kb = parse_program(read_file(std::string(HORNBASE_DATA_DIR) + "/example1.ddb"));
    CHECK(kb.kb_i.size() == 1);
    CHECK(kb.kb_u.size() == 4);
    CHECK(kb.kb_ic.size() == 2);
    CHECK(kb.view_predicates() == std::set<std::string>{"staff_chair"});
    CHECK(kb.kb_u.count(atom("staff_group", {"aravindan", "infor1"})) == 1);
}

TEST_CASE("parse: non-ground EDB fact is rejected", "[parse]") {
    CHECK_THROWS_AS(parse_program("#EDB\np(X).\n"), parse_error);
}

TEST_CASE("parse: errors carry line and column", "[parse]") {
    try {
        parse_program("#IDB\np(X) :- q(X).\n#EDB\nq(a)\nq(b).\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 5);  // the missing period is noticed at the next token
    }
}

TEST_CASE("parse: semantic validation errors", "[parse]") {
    CHECK_THROWS_AS(parse_program("#IDB\np(X) :- q(Y).\n"), semantic_error);  // unsafe
    CHECK_THROWS_AS(parse_program("#IDB\np(X) :- q(X).\n#EDB\np(a).\nq(a).\n"),
                    semantic_error);  // view and base
    CHECK_THROWS_AS(parse_program("#EDB\np(a).\np(a,b).\n"), semantic_error);  // arity
    CHECK_THROWS_AS(parse_program("#IDB\np(a).\n"), parse_error);  // unit clause in IDB
}

TEST_CASE("parse: comments and zero-arity atoms", "[parse]") {
    KnowledgeBase kb = parse_program("% chain\n#IDB\np1 :- p0.\n#EDB\np0.\n");
    CHECK(kb.kb_u.count(atom("p0")) == 1);
    CHECK(kb.kb_i.front() == rule(atom("p1"), {atom("p0")}));
}

TEST_CASE("serialize then parse is the identity", "[parse][property]") {
    std::vector<KnowledgeBase> kbs;
    kbs.push_back(parse_program(read_file(std::string(HORNBASE_DATA_DIR) + "/example1.ddb")));
    for (uint64_t seed = 1; seed <= 25; ++seed) kbs.push_back(generate_kb(seed));
    for (const auto& kb : kbs) {
        KnowledgeBase back = parse_program(serialize_program(kb));
        CHECK(back == kb);
        // Canonical form is a fixpoint.
        CHECK(serialize_program(back) == serialize_program(kb));
    }
}

TEST_CASE("parse_request: single insertion", "[parse]") {
    UpdateRequest req = parse_request("+ staff_chair(aravindan,gerhard).");
    CHECK(req.nu_plus == AtomSet{atom("staff_chair", {"aravindan", "gerhard"})});
    CHECK(req.nu_minus.empty());
}

TEST_CASE("parse_request: overlap is rejected", "[parse]") {
    CHECK_THROWS_AS(parse_request("+ p(a).\n- p(a).\n"), parse_error);
}

TEST_CASE("parse_request: empty text", "[parse]") {
    UpdateRequest req = parse_request("");
    CHECK(req.empty());
}

TEST_CASE("parse_request: non-ground atom is rejected", "[parse]") {
    CHECK_THROWS_AS(parse_request("+ p(X)."), parse_error);
}

TEST_CASE("bind_request: unknown predicate and non-view atoms", "[parse]") {
    KnowledgeBase kb = parse_program("#IDB\np(X) :- q(X).\n#EDB\nq(a).\n");
    CHECK_THROWS_AS(bind_request(kb, parse_request("+ r(a).")), semantic_error);
    CHECK_THROWS_AS(bind_request(kb, parse_request("+ q(b).")), semantic_error);
    CHECK_NOTHROW(bind_request(kb, parse_request("+ p(b).")));
}

TEST_CASE("request round trip", "[parse]") {
    UpdateRequest req = parse_request("+ p(a).\n- p(b).\n");
    CHECK(parse_request(serialize_request(req)) == req);
}
