#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "ornlab/io.hpp"
#include "ornlab/rng.hpp"
#include "ornlab/schedule.hpp"

using namespace ornlab;

TEST_CASE("orn timestep decompose/compose") {
    std::uint64_t p = 5;
    int g = 2, c = 1;
    auto ts0 = decompose_orn(0, p, g, c);
    CHECK(ts0.x == 0);
    CHECK(ts0.s == 1);
    long t = static_cast<long>(c) * (g + 1) * static_cast<long>(p - 1);
    auto last = decompose_orn(t - 1, p, g, c);
    CHECK(last.x == c * (g + 1) - 1);
    CHECK(last.s == p - 1);
    CHECK_THROWS_AS(decompose_orn(t, p, g, c), OutOfPeriod);
    CHECK_THROWS_AS(decompose_orn(-1, p, g, c), OutOfPeriod);
    for (long k = 0; k < t; ++k) CHECK(compose_orn(decompose_orn(k, p, g, c), p) == k);
}

TEST_CASE("sorn timestep decompose/compose") {
    std::uint64_t p = 5;
    int g = 2, c = 1;
    auto ts = decompose_sorn(12, p, g, c);  // one frame is C(g+1)(p-1) = 12 steps
    CHECK(ts.f == 1);
    CHECK(ts.x == 0);
    CHECK(ts.s == 1);
    SornSchedule s(p, g, c);
    for (long k = 0; k < s.period(); ++k)
        CHECK(compose_sorn(decompose_sorn(k, p, g, c), p, g, c) == k);
    CHECK_THROWS_AS(decompose_sorn(s.period(), p, g, c), OutOfPeriod);
}

TEST_CASE("orn permutation") {
    OrnSchedule s(5, 2, 1);
    CHECK(s.period() == 12);
    CHECK(s.node_count() == 25);

    SUBCASE("first step moves along v(0)") {
        CHECK(s.perm(0, node_to_index(make_node({0, 0}, 5))) == node_to_index(make_node({1, 0}, 5)));
    }
    SUBCASE("per-phase motion stays on the phase line") {
        for (long k = 0; k < s.period(); ++k) {
            auto ts = decompose_orn(k, 5, 2, 1);
            for (std::uint64_t a = 0; a < 25; ++a) {
                NodeVec diff = sub(index_to_node(s.perm(k, a), 5, 2), index_to_node(a, 5, 2));
                CHECK(diff == scale(ts.s, s.phase_vector(ts.x)));
            }
        }
    }
    SUBCASE("bijective per timestep") {
        for (long k = 0; k < s.period(); ++k) {
            std::set<std::uint64_t> img;
            for (std::uint64_t a = 0; a < 25; ++a) img.insert(s.perm(k, a));
            CHECK(img.size() == 25);
            for (std::uint64_t a = 0; a < 25; ++a) CHECK(s.perm_inv(k, s.perm(k, a)) == a);
        }
    }
    SUBCASE("periodicity") {
        for (long k = 0; k < s.period(); ++k)
            for (std::uint64_t a = 0; a < 25; a += 7) CHECK(s.perm(k + s.period(), a) == s.perm(k, a));
    }
    SUBCASE("identity relabel changes nothing") {
        Permutation id(25);
        for (std::uint32_t i = 0; i < 25; ++i) id[i] = i;
        OrnSchedule rel(5, 2, 1, id);
        for (long k = 0; k < s.period(); ++k)
            for (std::uint64_t a = 0; a < 25; ++a) CHECK(rel.perm(k, a) == s.perm(k, a));
    }
}

TEST_CASE("round robin within a phase") {
    // within one phase, node a connects to each a + s v(x), s = 1..p-1, exactly once
    OrnSchedule s(7, 2, 2);
    for (int x = 0; x < s.num_phases(); ++x) {
        for (std::uint64_t a = 0; a < s.node_count(); a += 11) {
            std::set<std::uint64_t> targets;
            for (std::uint64_t sc = 1; sc < 7; ++sc) {
                long k = compose_orn({x, sc, 0}, 7);
                targets.insert(s.perm(k, a));
            }
            CHECK(targets.size() == 6);
            CHECK(targets.count(a) == 0);
        }
    }
}

TEST_CASE("sorn permutation") {
    SornSchedule s(5, 2, 1);
    CHECK(s.num_frames() == 4);
    CHECK(s.period() == 48);

    SUBCASE("frame 0 uses the base constellation directly") {
        // family member 0 is the identity matrix
        for (long k = 0; k < s.frame_len(); ++k) {
            auto ts = decompose_sorn(k, 5, 2, 1);
            NodeVec dir = s.base_constellation().vectors[static_cast<std::size_t>(ts.x)];
            std::uint64_t a = 7;
            NodeVec expect = add(index_to_node(a, 5, 2), scale(ts.s, dir));
            CHECK(s.perm(k, a) == node_to_index(expect));
        }
    }
    SUBCASE("diagonal action example") {
        // A = diag(1,2), v = (1,1), s = 3, a = (0,0) -> (3, 1)
        long f = 0;
        bool found = false;
        for (long i = 0; i < s.num_frames(); ++i) {
            if (s.family()[static_cast<std::size_t>(i)].diag[1].v == 2) {
                f = i;
                found = true;
            }
        }
        REQUIRE(found);
        int x = 0;  // base vector v(1) = (1,1)
        REQUIRE(s.base_constellation().vectors[0] == make_node({1, 1}, 5));
        long k = compose_sorn({f, x, 3, 0}, 5, 2, 1);
        CHECK(s.perm(k, node_to_index(make_node({0, 0}, 5))) == node_to_index(make_node({3, 1}, 5)));
    }
    SUBCASE("bijective per timestep") {
        Rng rng(3);
        for (int trial = 0; trial < 12; ++trial) {
            long k = static_cast<long>(rng.below(static_cast<std::uint64_t>(s.period())));
            std::set<std::uint64_t> img;
            for (std::uint64_t a = 0; a < 25; ++a) img.insert(s.perm(k, a));
            CHECK(img.size() == 25);
        }
    }
    SUBCASE("g = 1 unsupported") { CHECK_THROWS_AS(SornSchedule(5, 1, 1), UnsupportedDesign); }
}

TEST_CASE("sorn coverage: all-non-zero differences appear exactly C(g+1) times per period") {
    SornSchedule s(5, 2, 1);
    std::vector<long> count(25, 0);
    for (long k = 0; k < s.period(); ++k) {
        auto ts = decompose_sorn(k, 5, 2, 1);
        NodeVec dir = scale(ts.s, s.frame_vector(ts.f, ts.x));
        ++count[node_to_index(dir)];
    }
    for (std::uint64_t d = 0; d < 25; ++d) {
        NodeVec dv = index_to_node(d, 5, 2);
        if (all_nonzero(dv))
            CHECK(count[d] == 3);  // C(g+1)
        else
            CHECK(count[d] == 0);
    }
}

TEST_CASE("diagonal family") {
    auto f3 = diagonal_family(3, 2);
    REQUIRE(f3.size() == 2);
    CHECK(f3[0].diag == make_node({1, 1}, 3));
    CHECK(f3[1].diag == make_node({1, 2}, 3));

    auto f5 = diagonal_family(5, 2);
    REQUIRE(f5.size() == 4);
    for (std::uint64_t d = 1; d <= 4; ++d) CHECK(f5[d - 1].diag == make_node({1, d}, 5));

    CHECK(diagonal_family(7, 1).size() == 1);

    auto f53 = diagonal_family(5, 3);
    CHECK(f53.size() == 16);
    for (const auto& m : f53) CHECK(m.diag[0].v == 1);
}

TEST_CASE("reachable_set") {
    Schedule s = OrnSchedule(5, 2, 1);
    SUBCASE("no hops reaches nothing") {
        CHECK(reachable_set(s, 3, 0, 10, 0).empty());
    }
    SUBCASE("one phase of one round robin") {
        auto r = reachable_set(s, node_to_index(make_node({2, 3}, 5)), 0, 4, 1);
        REQUIRE(r.size() == 4);
        for (auto b : r) {
            NodeVec diff = sub(index_to_node(b, 5, 2), make_node({2, 3}, 5));
            CHECK(diff[1].v == 0);  // multiples of v(0) = (1,0)
            CHECK(diff[0].v != 0);
        }
    }
    SUBCASE("excludes the start node") {
        auto r = reachable_set(s, 0, 0, 48, 4);
        CHECK(std::find(r.begin(), r.end(), 0) == r.end());
    }
}

TEST_CASE("virtual topology edges") {
    Schedule s = OrnSchedule(5, 2, 1);
    SUBCASE("counts per step") {
        auto edges = virtual_topology_edges(s, 0, 1);
        long virt = 0, phys = 0;
        for (const auto& e : edges) (e.physical ? phys : virt)++;
        CHECK(virt == 25);
        CHECK(phys == 25);
    }
    SUBCASE("physical edges form a perfect matching per layer") {
        auto edges = virtual_topology_edges(s, 5, 1);
        std::set<std::uint64_t> heads;
        for (const auto& e : edges)
            if (e.physical) heads.insert(e.head);
        CHECK(heads.size() == 25);
    }
    SUBCASE("distinct physical edges per period") {
        auto edges = virtual_topology_edges(s, 0, sched_period(s));
        std::set<std::pair<std::uint64_t, long>> distinct;
        for (const auto& e : edges)
            if (e.physical) distinct.insert({e.tail, e.t % sched_period(s)});
        CHECK(distinct.size() == 25 * 12);
    }
    SUBCASE("window cap") {
        CHECK_THROWS_AS(virtual_topology_edges(s, 0, 100, 10), WindowTooLarge);
    }
}

TEST_CASE("relabeled schedule is edge-isomorphic to the unlabeled one") {
    Rng rng(11);
    auto tau = rng.permutation(25);
    OrnSchedule base(5, 2, 1);
    OrnSchedule rel(5, 2, 1, tau);
    for (long k = 0; k < base.period(); ++k) {
        for (std::uint64_t a = 0; a < 25; ++a) {
            std::uint64_t b = rel.perm(k, a);
            CHECK(base.perm(k, tau[a]) == tau[b]);
        }
    }
}

#ifndef ORNLAB_FIXTURE_DIR
#define ORNLAB_FIXTURE_DIR "."
#endif

TEST_CASE("schedule json round trip and golden files") {
    Schedule orn = OrnSchedule(5, 2, 1);
    std::string j = schedule_to_json(orn);
    Schedule back = schedule_from_json(j);
    CHECK(schedule_to_json(back) == j);

    Rng rng(4);
    Schedule sorn = SornSchedule(5, 2, 1, rng.permutation(25));
    std::string js = schedule_to_json(sorn);
    CHECK(schedule_to_json(schedule_from_json(js)) == js);

    std::string golden_path = std::string(ORNLAB_FIXTURE_DIR) + "/orn_p5_g2_c1.json";
    CHECK(io::read_file(golden_path) == j);

    std::string golden_sorn = std::string(ORNLAB_FIXTURE_DIR) + "/sorn_p7_g2_c1.json";
    CHECK(io::read_file(golden_sorn) == schedule_to_json(Schedule(SornSchedule(7, 2, 1))));
}
