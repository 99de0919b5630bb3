#include <doctest.h>

#include "schoolchoice/deferred_acceptance.hpp"
#include "schoolchoice/oracle.hpp"
#include "support.hpp"

using namespace schoolchoice;
using namespace testsupport;

TEST_CASE("student-proposing on the examples") {
    auto ex1 = fixture("ex1.inst");
    CHECK(gs_student(ex1) == named(ex1, {{"1", "B"}, {"2", "A"}, {"3", "C"}}));
    auto ex5 = fixture("ex5.inst");
    CHECK(gs_student(ex5) == named(ex5, {{"a1", "b3"}, {"a2", "b2"}, {"a3", "b4"}, {"a4", "b1"}}));
    auto ex3 = fixture("ex3.inst");
    auto m0 = named(ex3, {{"a1", "b2"}, {"a2", "b2"}, {"a3", "b1"}, {"a4", "b1"}, {"a5", "b3"}, {"a6", "b3"}});
    CHECK(gs_student(ex3) == m0);
    CHECK(gs_school(ex3) == m0);
    auto ex4 = fixture("ex4.inst");
    CHECK(gs_student(ex4) == named(ex4, {{"a1", "b4"}, {"a2", "b3"}, {"a3", "b2"}, {"a4", "b1"}, {"a5", "b5"}}));
}

TEST_CASE("trace of ex5") {
    auto inst = fixture("ex5.inst");
    auto r = gs_student_traced(inst);
    CHECK(r.assignment == gs_student(inst));
    CHECK(r.trace.num_rounds == 6);
    const auto expect = R"(1 a2 b1 accepted
1 a1 b1 rejected
1 a4 b3 accepted
1 a3 b3 rejected
2 a3 b2 accepted
2 a1 b2 rejected
3 a1 b3 accepted
3 a4 b3 displaced
4 a4 b1 accepted
4 a2 b1 displaced
5 a2 b2 accepted
5 a3 b2 displaced
6 a3 b4 accepted
)";
    CHECK(format_trace(inst, r.trace) == expect);

    auto ip = interrupting_pairs(r.trace);
    std::vector<InterruptingPair> want{{2, 1, 5}, {1, 0, 4}, {3, 2, 3}};
    CHECK(ip == want);

    EdgeMask mask(inst);
    mask.remove_edge(inst, 1, 0);
    auto r2 = gs_student_traced(inst, &mask);
    CHECK(interrupting_pairs(r2.trace).empty());
    CHECK(r2.assignment == named(inst, {{"a1", "b1"}, {"a2", "b2"}, {"a3", "b4"}, {"a4", "b3"}}));
    CHECK(r2.trace.num_rounds == 3);
}

TEST_CASE("third simplified iteration on ex5 is a single round") {
    auto inst = fixture("ex5.inst");
    EdgeMask mask(inst);
    for (auto [a, b] : std::vector<std::pair<int, int>>{{2, 2}, {2, 1}, {0, 1}, {3, 1}, {1, 2}, {1, 0}})
        mask.remove_edge(inst, a, b);
    auto r = gs_student_traced(inst, &mask);
    CHECK(r.trace.num_rounds == 1);
    for (const auto& e : r.trace.events) CHECK(e.outcome == Outcome::Accepted);
    CHECK(r.assignment == named(inst, {{"a1", "b1"}, {"a2", "b2"}, {"a3", "b4"}, {"a4", "b3"}}));
}

TEST_CASE("a student who runs out of schools leaves no event") {
    auto inst = parse_instance("instance v1\nstudents: a1 a2\nschools: b1\na1: b1\na2: b1\nb1: a1 a2\n");
    auto r = gs_student_traced(inst);
    CHECK(r.trace.num_rounds == 1);
    CHECK(r.trace.events.size() == 2);
    CHECK(r.assignment[1] == kNone);
    CHECK(interrupting_pairs(r.trace).empty());
}

TEST_CASE("deferred acceptance gives the lattice extremes") {
    SplitMix64 rng(11);
    for (int it = 0; it < 200; ++it) {
        auto inst = random_small(rng);
        DaCounters c;
        auto ms = gs_student(inst, &c);
        auto mb = gs_school(inst);
        REQUIRE(is_stable(inst, ms));
        REQUIRE(is_stable(inst, mb));
        CHECK(c.scans <= 3 * inst.num_edges() + inst.num_students() + inst.num_schools());
        for (const auto& m : enumerate_stable(inst)) {
            CHECK(dominates(inst, ms, m));
            CHECK(dominates(inst, m, mb));
        }
        CHECK(gs_student_traced(inst).assignment == ms);

        EdgeMask mask(inst);
        for (std::int64_t e = 0; e < inst.num_edges(); ++e)
            if (rng.below(3) == 0) mask.remove(e);
        auto sub = mask.restrict(inst);
        CHECK(gs_student(inst, nullptr, &mask) == gs_student(sub));
        CHECK(gs_school(inst, nullptr, &mask) == gs_school(sub));
        CHECK(gs_student_traced(inst, &mask).assignment == gs_student(sub));
    }
}
