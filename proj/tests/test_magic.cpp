#include <catch2/catch_amalgamated.hpp>

#include "hornbase/generate.hpp"
#include "hornbase/magic.hpp"
#include "hornbase/sld.hpp"
#include "oracle.hpp"

using namespace hornbase;

namespace {

KnowledgeBase example1() {
    return parse_program(R"(
#IDB
staff_chair(X,Y) :- staff_group(X,Z), group_chair(Z,Y).
#EDB
group_chair(infor1,matthias).
group_chair(infor2,gerhard).
staff_group(delhibabu,infor1).
staff_group(aravindan,infor1).
#IC
:- group_chair(G,C1), group_chair(G,C2), C1 != C2.
:- group_chair(G1,C), group_chair(G2,C), G1 != G2.
)");
}

}  // namespace

TEST_CASE("vu_seeds: one signed seed per request atom", "[magic]") {
    UpdateRequest req;
    req.nu_plus.insert(atom("staff_chair", {"aravindan", "gerhard"}));
    auto seeds = vu_seeds(req);
    CHECK(seeds == std::set<Seed>{
                       Seed{"staff_chair", {Term{"aravindan"}, Term{"gerhard"}}, '+'}});

    CHECK(vu_seeds(UpdateRequest{}).empty());

    UpdateRequest mixed;
    mixed.nu_plus.insert(atom("p", {"a"}));
    mixed.nu_minus.insert(atom("q", {"b"}));
    CHECK(vu_seeds(mixed) == std::set<Seed>{Seed{"p", {Term{"a"}}, '+'},
                                            Seed{"q", {Term{"b"}}, '-'}});
}

TEST_CASE("insertion_realizations: Example 1", "[magic]") {
    KnowledgeBase kb = example1();
    auto realizations = insertion_realizations(kb, atom("staff_chair", {"aravindan", "gerhard"}));
    REQUIRE_FALSE(realizations.empty());

    // Ordered by total size: the single-insertion case comes first.
    CHECK(realizations.front() ==
          Explanation{{atom("staff_group", {"aravindan", "infor2"})}, {}});

    Explanation case1{{atom("group_chair", {"infor1", "gerhard"})},
                      {atom("group_chair", {"infor1", "matthias"}),
                       atom("group_chair", {"infor2", "gerhard"})}};
    CHECK(std::find(realizations.begin(), realizations.end(), case1) != realizations.end());

    // Induced-update contract.
    for (const auto& ex : realizations) {
        KnowledgeBase changed = kb;
        for (const auto& d : ex.delta_minus) changed.kb_u.erase(d);
        changed.kb_u.insert(ex.delta_plus.begin(), ex.delta_plus.end());
        CHECK(entails(changed, atom("staff_chair", {"aravindan", "gerhard"})));
        CHECK(violated_constraints(changed).empty());
    }
}

TEST_CASE("insertion_realizations: derivable goal violates the precondition", "[magic]") {
    KnowledgeBase kb = example1();
    CHECK_THROWS_AS(insertion_realizations(kb, atom("staff_chair", {"delhibabu", "matthias"})),
                    precondition_error);
}

TEST_CASE("insertion_realizations: single missing fact", "[magic]") {
    KnowledgeBase kb = parse_program("#IDB\np :- a.\n#EDB\nb.\n");
    auto realizations = insertion_realizations(kb, atom("p"));
    REQUIRE(realizations.size() == 1);
    CHECK(realizations.front() == Explanation{{atom("a")}, {}});
}

TEST_CASE("realizations only touch atoms relevant to the goal", "[magic][property]") {
    for (uint64_t seed = 1; seed <= 30; ++seed) {
        KnowledgeBase kb = generate_kb(seed);
        Rng rng(seed * 41 + 3);
        auto goal = pick_insertable(kb, rng);
        if (!goal) continue;

        // Atoms mentioned in the goal's hypothetical SLD search.
        AtomSet mentioned;
        {
            AtomSet hypo = base_herbrand_atoms(kb);
            for (const auto& f : kb.kb_u) hypo.erase(f);
            SldOptions opts;
            opts.hypotheses = hypo;
            SldTree tree =
                sld_tree_conjunction(kb, {*goal}, default_depth_bound(kb) + hypo.size() + 2, opts);
            for (const auto& n : tree.nodes) {
                mentioned.insert(n.used_edb.begin(), n.used_edb.end());
                mentioned.insert(n.used_hypotheses.begin(), n.used_hypotheses.end());
            }
        }
        std::vector<Explanation> realizations;
        try {
            realizations = insertion_realizations(kb, *goal);
        } catch (const precondition_error&) {
            continue;
        }
        for (const auto& ex : realizations) {
            for (const auto& a : ex.delta_plus) CHECK(mentioned.count(a) == 1);
            // Deletions repair constraint instances triggered by the insertion.
            KnowledgeBase grown = kb;
            grown.kb_u.insert(ex.delta_plus.begin(), ex.delta_plus.end());
            AtomSet triggered;
            for (const auto& [ic, sub] : violated_constraints(grown))
                for (const auto& b : substitute(sub, ic).body) {
                    auto rel = detail::relevant_support_atoms(kb, grown.kb_u, b, {});
                    triggered.insert(rel.begin(), rel.end());
                }
            for (const auto& a : ex.delta_minus) CHECK(triggered.count(a) == 1);
            // Induced-update contract.
            KnowledgeBase changed = grown;
            for (const auto& a : ex.delta_minus) changed.kb_u.erase(a);
            CHECK(oracle::naive_entails(changed, *goal));
            CHECK(violated_constraints(changed).empty());
        }
    }
}
