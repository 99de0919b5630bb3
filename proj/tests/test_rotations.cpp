#include <doctest.h>

#include <set>

#include "schoolchoice/deferred_acceptance.hpp"
#include "schoolchoice/latin.hpp"
#include "schoolchoice/oracle.hpp"
#include "schoolchoice/rotations.hpp"
#include "support.hpp"

using namespace schoolchoice;
using namespace testsupport;

namespace {

using ArcSet = std::set<std::pair<std::string, std::string>>;

ArcSet arc_set(const Instance& inst, const RotationDigraph& d) {
    auto arcs = d.arcs(inst);
    return {arcs.begin(), arcs.end()};
}

struct Ex3 {
    Instance inst = fixture("ex3.inst");
    Assignment m0 = named(inst, {{"a1", "b2"}, {"a2", "b2"}, {"a3", "b1"}, {"a4", "b1"}, {"a5", "b3"}, {"a6", "b3"}});
    int a(int i) const { return i - 1; }
    int b(int i) const { return i - 1; }
};

}  // namespace

TEST_CASE("successor and next on ex3") {
    Ex3 ex;
    CHECK(successor(ex.inst, ex.m0, ex.a(1), Side::Students) == ex.b(3));
    CHECK(successor(ex.inst, ex.m0, ex.b(1), Side::Schools) == ex.a(2));
    CHECK(next_agent(ex.inst, ex.m0, ex.a(1), Side::Students) == ex.a(5));
    CHECK(next_agent(ex.inst, ex.m0, ex.b(1), Side::Schools) == ex.b(2));
    CHECK_FALSE(successor(ex.inst, ex.m0, ex.a(2), Side::Students).has_value());
    CHECK_FALSE(successor(ex.inst, ex.m0, ex.b(2), Side::Schools).has_value());
}

TEST_CASE("rotation digraphs of ex3") {
    Ex3 ex;
    auto ds = build_rotation_digraph(ex.inst, ex.m0, Side::Students);
    CHECK(arc_set(ex.inst, ds) == ArcSet{{"a6", "b2"}, {"a3", "b2"}, {"b2", "a1"}, {"a1", "b3"}, {"b3", "a5"}});
    CHECK(exposed_rotations(ex.inst, ds).empty());

    auto db = build_rotation_digraph(ex.inst, ex.m0, Side::Schools);
    CHECK(arc_set(ex.inst, db) == ArcSet{{"b3", "a3"}, {"a3", "b1"}, {"b1", "a2"}, {"a2", "b2"}});

    EdgeMask ms(ex.inst);
    ms.remove_edge(ex.inst, ex.a(1), ex.b(3));
    auto ds1 = build_rotation_digraph(ex.inst, ex.m0, Side::Students, &ms);
    CHECK(arc_set(ex.inst, ds1) == ArcSet{{"a6", "b2"}, {"a3", "b2"}, {"b2", "a1"}, {"a1", "b1"}, {"b1", "a3"}});
    auto rho = Rotation::from_sequence(Side::Students, {ex.b(2), ex.a(1), ex.b(1), ex.a(3)});
    CHECK(exposed_rotations(ex.inst, ex.m0, Side::Students, &ms) == std::vector<Rotation>{rho});
    CHECK(eliminate(ex.inst, ex.m0, rho, &ms) ==
          named(ex.inst, {{"a1", "b1"}, {"a2", "b2"}, {"a3", "b2"}, {"a4", "b1"}, {"a5", "b3"}, {"a6", "b3"}}));
    CHECK(format_rotation(ex.inst, rho) == "students: (a1 b2) (a3 b1)");

    EdgeMask mb(ex.inst);
    mb.remove_edge(ex.inst, ex.a(2), ex.b(1));
    auto srho = Rotation::from_sequence(Side::Schools, {ex.a(6), ex.b(3), ex.a(3), ex.b(1)});
    CHECK(exposed_rotations(ex.inst, ex.m0, Side::Schools, &mb) == std::vector<Rotation>{srho});
    CHECK(eliminate(ex.inst, ex.m0, srho, &mb) ==
          named(ex.inst, {{"a1", "b2"}, {"a2", "b2"}, {"a3", "b3"}, {"a4", "b1"}, {"a5", "b3"}, {"a6", "b1"}}));

    // Without the removal the rotation is not exposed.
    CHECK_THROWS_AS(eliminate(ex.inst, ex.m0, rho), NotExposed);
}

TEST_CASE("sigma re-threads ex3's rotation") {
    Ex3 ex;
    auto rho = Rotation::from_sequence(Side::Students, {ex.b(2), ex.a(1), ex.b(1), ex.a(3)});
    auto want = Rotation::from_sequence(Side::Schools, {ex.a(1), ex.b(1), ex.a(3), ex.b(2)});
    CHECK(sigma(rho) == want);
    CHECK(sigma_inverse(want) == rho);
}

TEST_CASE("digraph construction rejects unstable input") {
    auto inst = fixture("ex1.inst");
    auto m2 = named(inst, {{"1", "A"}, {"2", "B"}, {"3", "C"}});
    CHECK_THROWS_AS(build_rotation_digraph(inst, m2, Side::Students), NotStable);
}

TEST_CASE("single stable matching means no rotations") {
    auto aux = fixture("ex4.inst");
    auto m = gs_student(aux);
    CHECK(exposed_rotations(aux, m, Side::Students).empty());
    CHECK(all_rotations(aux, Side::Students).empty());
    CHECK(all_rotations(aux, Side::Schools).empty());
}

TEST_CASE("rotations of the Latin example") {
    auto inst = fixture("ex9.inst");
    auto rs = all_rotations(inst, Side::Students);
    auto rb = all_rotations(inst, Side::Schools);
    CHECK(rs.size() == rb.size());
    auto naive = all_rotations_naive(inst, Side::Students);
    CHECK(std::set<Rotation>(rs.begin(), rs.end()) == std::set<Rotation>(naive.begin(), naive.end()));
    CHECK(enumerate_stable(inst).size() == 10);
}

TEST_CASE("all rotations match the lattice found by enumeration") {
    SplitMix64 rng(21);
    for (int it = 0; it < 300; ++it) {
        auto inst = random_small(rng);
        auto stable = enumerate_stable(inst);
        for (Side side : {Side::Students, Side::Schools}) {
            std::set<Rotation> exposed;
            for (const auto& m : stable)
                for (auto& r : exposed_rotations(inst, m, side)) {
                    auto next = eliminate(inst, m, r);
                    CHECK(std::find(stable.begin(), stable.end(), next) != stable.end());
                    exposed.insert(r);
                }
            auto fast = all_rotations(inst, side);
            auto naive = all_rotations_naive(inst, side);
            CHECK(std::set<Rotation>(fast.begin(), fast.end()) == exposed);
            CHECK(std::set<Rotation>(naive.begin(), naive.end()) == exposed);
            CHECK(fast.size() == exposed.size());
        }
    }
}
