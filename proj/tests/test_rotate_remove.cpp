#include <doctest.h>

#include <set>

#include "schoolchoice/oracle.hpp"
#include "schoolchoice/rotate_remove.hpp"
#include "support.hpp"

using namespace schoolchoice;
using namespace testsupport;

TEST_CASE("ex3, both sides") {
    auto inst = fixture("ex3.inst");
    using Edges = std::vector<std::pair<StudentId, SchoolId>>;

    RotateRemoveOptions opt;
    opt.check_invariants = true;
    auto st = rotate_remove(inst, Side::Students, opt);
    CHECK(st.assignment ==
          named(inst, {{"a1", "b1"}, {"a2", "b2"}, {"a3", "b2"}, {"a4", "b1"}, {"a5", "b3"}, {"a6", "b3"}}));
    CHECK(st.removed == Edges{{0, 2}});
    CHECK(st.rotations.size() == 1);

    auto sc = rotate_remove(inst, Side::Schools, opt);
    CHECK(sc.assignment ==
          named(inst, {{"a1", "b2"}, {"a2", "b2"}, {"a3", "b3"}, {"a4", "b1"}, {"a5", "b3"}, {"a6", "b1"}}));
    CHECK(sc.removed == Edges{{1, 0}});
    CHECK(sc.rotations.size() == 1);

    for (bool naive : {false, true}) {
        RotateRemoveOptions o;
        o.naive = naive;
        CHECK(rotate_remove(inst, Side::Students, o).removed == st.removed);
        CHECK(rotate_remove(inst, Side::Schools, o).removed == sc.removed);
    }
}

TEST_CASE("ex4 ends at (1,2,3,4,5)") {
    auto inst = fixture("ex4.inst");
    RotateRemoveOptions opt;
    opt.check_invariants = true;
    auto r = rotate_remove(inst, Side::Schools, opt);
    CHECK(r.assignment == Assignment(std::vector<SchoolId>{0, 1, 2, 3, 4}));
    // Assignment updates in the table: (3.0), (6.0), (7.0), (8.0), (9.0), (12.0).
    CHECK(r.rotations.size() == 6);
    CHECK(student_optimal_legal(inst) == r.assignment);
    CHECK(school_optimal_legal(inst) == Assignment(std::vector<SchoolId>{3, 2, 1, 0, 4}));
}

TEST_CASE("ex1 legal extremes and subinstance") {
    auto inst = fixture("ex1.inst");
    auto m1 = named(inst, {{"1", "B"}, {"2", "A"}, {"3", "C"}});
    auto m2 = named(inst, {{"1", "A"}, {"2", "B"}, {"3", "C"}});
    CHECK(student_optimal_legal(inst) == m2);
    CHECK(school_optimal_legal(inst) == m1);

    auto rep = legal_subinstance(inst);
    std::set<std::pair<StudentId, SchoolId>> legal(rep.legal_edges.begin(), rep.legal_edges.end());
    CHECK(legal == std::set<std::pair<StudentId, SchoolId>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 2}});
    CHECK(rep.illegal_edges.size() == 2);
    auto sub = rep.mask(inst).restrict(inst);
    CHECK(sorted(enumerate_stable(sub)) == sorted({m1, m2}));
}

TEST_CASE("Latin instances keep every edge") {
    auto inst = fixture("ex9.inst");
    auto rep = legal_subinstance(inst);
    CHECK(rep.legal_edges.size() == 16);
    CHECK(rep.illegal_edges.empty());
}

TEST_CASE("auxiliary instance: student-optimal legal gives every man his favourite") {
    auto aux = fixture("ex4.inst");
    CHECK(student_optimal_legal(aux) ==
          named(aux, {{"a1", "b1"}, {"a2", "b2"}, {"a3", "b3"}, {"a4", "b4"}, {"a5", "b5"}}));
    auto rep = legal_subinstance(aux);
    auto sub = rep.mask(aux).restrict(aux);
    CHECK(enumerate_stable(sub).size() == 10);
}

TEST_CASE("legal report text") {
    auto inst = fixture("ex3.inst");
    auto text = format_legal_report(inst, legal_subinstance(inst));
    CHECK(text.find("a1 b3 student-rotate-remove\n") != std::string::npos);
    CHECK(text.find("a2 b1 school-rotate-remove\n") != std::string::npos);
    CHECK(text.rfind("legal_edges:\n", 0) == 0);
}

TEST_CASE("fast, naive and shuffled runs agree with invariants checked") {
    SplitMix64 rng(31);
    for (int it = 0; it < 300; ++it) {
        auto inst = random_small(rng);
        for (Side side : {Side::Students, Side::Schools}) {
            RotateRemoveOptions base;
            base.check_invariants = true;
            auto ref = rotate_remove(inst, side, base);
            std::set<std::pair<StudentId, SchoolId>> removed(ref.removed.begin(), ref.removed.end());
            CHECK(removed.size() == ref.removed.size());
            for (int s = 0; s < 4; ++s) {
                RotateRemoveOptions o;
                o.seed = rng.next();
                o.naive = s % 2 == 1;
                o.check_invariants = !o.naive;
                CHECK(rotate_remove(inst, side, o).assignment == ref.assignment);
            }
        }
    }
}
