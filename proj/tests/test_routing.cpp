#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "ornlab/rng.hpp"
#include "ornlab/routing.hpp"

using namespace ornlab;

namespace {

// exhaustive oracle: all coefficient tuples over the g+1 chosen phases
long count_paths_by_search(const OrnSchedule& s, std::uint64_t a, std::uint64_t b, long t,
                           std::set<std::vector<std::uint64_t>>* tuples = nullptr) {
    const std::uint64_t p = s.p();
    const int g = s.g();
    NodeVec d = sub(index_to_node(b, p, g), index_to_node(a, p, g));
    long b0 = next_multiple(t, s.block_len()) / s.block_len();
    long count = 0;
    // iterate every phase tuple and every coefficient tuple
    std::vector<int> off(static_cast<std::size_t>(g + 1), 0);
    while (true) {
        std::vector<int> xs(static_cast<std::size_t>(g + 1));
        for (int i = 1; i <= g + 1; ++i)
            xs[static_cast<std::size_t>(i - 1)] =
                static_cast<int>((b0 + i - 1) % (g + 1)) * s.C() + off[static_cast<std::size_t>(i - 1)];
        std::vector<std::uint64_t> alpha(static_cast<std::size_t>(g + 1), 0);
        while (true) {
            if (alpha.front() != 0 && alpha.back() != 0) {
                NodeVec sum = make_node(std::vector<std::uint64_t>(static_cast<std::size_t>(g), 0), p);
                for (int i = 0; i <= g; ++i)
                    sum = add(sum, scale(alpha[static_cast<std::size_t>(i)],
                                         s.phase_vector(xs[static_cast<std::size_t>(i)])));
                if (node_to_index(sum) == node_to_index(d)) {
                    ++count;
                    if (tuples) tuples->insert(alpha);
                }
            }
            int i = g;
            while (i >= 0 && alpha[static_cast<std::size_t>(i)] == p - 1) {
                alpha[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
            ++alpha[static_cast<std::size_t>(i)];
        }
        int i = g;
        while (i >= 0 && off[static_cast<std::size_t>(i)] == s.C() - 1) {
            off[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++off[static_cast<std::size_t>(i)];
    }
    return count;
}

Rat conservation_oracle(const OrnSchedule& s, const PermDemand& d) {
    // independent identity: sum over (a, t, pseudo-path) of weight * physical hops
    Rat total = 0;
    for (std::uint64_t a = 0; a < s.node_count(); ++a) {
        for (long t = 0; t < s.period(); ++t) {
            auto pps = enumerate_pseudopaths(s, a, d.sigma[a], t);
            long hops = 0;
            for (const auto& pp : pps)
                for (const auto& h : pp.hops) hops += h.alpha != 0 ? 1 : 0;
            total += d.rate * Rat(hops) / Rat(static_cast<long>(pps.size()));
        }
    }
    return total;
}

}  // namespace

TEST_CASE("pseudo-path enumeration, p=5 g=2 C=1") {
    OrnSchedule s(5, 2, 1);
    std::uint64_t a = node_to_index(make_node({0, 0}, 5));
    std::uint64_t b = node_to_index(make_node({1, 1}, 5));

    SUBCASE("coefficient family (c, 1-2c, c)") {
        auto pps = enumerate_pseudopaths(s, a, b, 0);
        REQUIRE(pps.size() == 4);
        std::set<std::vector<std::uint64_t>> got;
        for (const auto& pp : pps) {
            REQUIRE(pp.hops.size() == 3);
            CHECK(pp.hops[0].x == 0);
            CHECK(pp.hops[1].x == 1);
            CHECK(pp.hops[2].x == 2);
            got.insert({pp.hops[0].alpha, pp.hops[1].alpha, pp.hops[2].alpha});
        }
        std::set<std::vector<std::uint64_t>> expect;
        for (std::uint64_t c = 1; c < 5; ++c) expect.insert({c, (1 + 5 - 2 * c % 5) % 5, c});
        CHECK(got == expect);

        std::set<std::vector<std::uint64_t>> oracle;
        CHECK(count_paths_by_search(s, a, b, 0, &oracle) == 4);
        CHECK(got == oracle);
    }
    SUBCASE("fixed-point pair uses the kernel") {
        auto pps = enumerate_pseudopaths(s, a, a, 0);
        CHECK(pps.size() == 4);
        CHECK(count_paths_by_search(s, a, a, 0) == 4);
    }
    SUBCASE("hops occupy consecutive blocks from the first complete block") {
        // t = 2 sits inside block 0, so routing starts at block 1
        auto pps = enumerate_pseudopaths(s, a, b, 2);
        REQUIRE(!pps.empty());
        for (const auto& pp : pps) {
            CHECK(pp.first_block == 1);
            CHECK(pp.hops[0].x == 1);
            CHECK(pp.hops[1].x == 2);
            CHECK(pp.hops[2].x == 0);  // block 3 wraps to phase block 0 of the next period
            RoutePath rp = realize(s, pp);
            CHECK(rp.phys.front().t >= 4);
        }
        // a start exactly on a block boundary departs in that block
        auto at_boundary = enumerate_pseudopaths(s, a, b, 4);
        for (const auto& pp : at_boundary) CHECK(pp.first_block == 1);
    }
    SUBCASE("soundness: coefficients recombine to dst - src") {
        Rng rng(5);
        for (int trial = 0; trial < 40; ++trial) {
            std::uint64_t x = rng.below(25), y = rng.below(25);
            long t = static_cast<long>(rng.below(24));
            for (const auto& pp : enumerate_pseudopaths(s, x, y, t)) {
                NodeVec sum = make_node({0, 0}, 5);
                for (const auto& h : pp.hops) sum = add(sum, scale(h.alpha, s.phase_vector(h.x)));
                CHECK(node_to_index(sum) ==
                      node_to_index(sub(index_to_node(y, 5, 2), index_to_node(x, 5, 2))));
                CHECK(pp.hops.front().alpha != 0);
                CHECK(pp.hops.back().alpha != 0);
            }
        }
    }
}

TEST_CASE("pseudo-path count bracket, sampled at p=7 g=2 C=2") {
    OrnSchedule s(7, 2, 2);
    Rng rng(9);
    for (int trial = 0; trial < 25; ++trial) {
        std::uint64_t a = rng.below(49), b = rng.below(49);
        long t = static_cast<long>(rng.below(static_cast<std::uint64_t>(s.period())));
        long n = static_cast<long>(enumerate_pseudopaths(s, a, b, t).size());
        CHECK(n >= 40);
        CHECK(n <= 48);
        CHECK(n == count_paths_by_search(s, a, b, t));
    }
}

TEST_CASE("realized paths are consistent and within the latency bound") {
    OrnSchedule s(5, 2, 1);
    Rng rng(17);
    long bound = orn_primary_latency_bound(s);
    CHECK(bound == 16);
    for (int trial = 0; trial < 30; ++trial) {
        std::uint64_t a = rng.below(25), b = rng.below(25);
        long t = static_cast<long>(rng.below(30));
        for (const auto& pp : enumerate_pseudopaths(s, a, b, t)) {
            RoutePath rp = realize(s, pp);
            CHECK(rp.latency() <= bound);
            CHECK(rp.latency() > 0);
            // hops chain: head of each hop is the tail of the next
            std::uint64_t cur = a;
            for (const auto& h : rp.phys) {
                CHECK(h.tail == cur);
                CHECK(h.t >= rp.start);
                cur = s.perm(h.t, h.tail);
            }
            CHECK(cur == b);
            CHECK(rp.end == rp.phys.back().t + 1);
        }
    }
}

TEST_CASE("rho counting functions") {
    OrnSchedule s(7, 2, 2);
    const std::uint64_t n = s.node_count();

    SUBCASE("q = 0 is the indicator of the endpoint") {
        PhysEdge e{5, 9};
        CHECK(pseudopath_count_rho(s, RhoKind::Minus, 0, 5, e) == 1);
        CHECK(pseudopath_count_rho(s, RhoKind::Minus, 0, 6, e) == 0);
        std::uint64_t head = s.perm(9, 5);
        CHECK(pseudopath_count_rho(s, RhoKind::Plus, 0, head, e) == 1);
    }

    SUBCASE("total mass: sum_i rho^-_q(i,e) = (p-1) p^{q-1} C^q") {
        Rng rng(23);
        for (int trial = 0; trial < 6; ++trial) {
            PhysEdge e{rng.below(n), static_cast<long>(rng.below(static_cast<std::uint64_t>(s.period())))};
            for (int q = 1; q <= 2; ++q) {
                long sum = 0;
                for (std::uint64_t i = 0; i < n; ++i) sum += pseudopath_count_rho(s, RhoKind::Minus, q, i, e);
                long expect = 6 * (q == 1 ? 1 : 7) * (q == 1 ? 2 : 4);
                CHECK(sum == expect);
            }
        }
    }

    SUBCASE("half-range bound rho^-_q <= C^{q-1}") {
        Rng rng(29);
        for (int trial = 0; trial < 4; ++trial) {
            PhysEdge e{rng.below(n), static_cast<long>(rng.below(static_cast<std::uint64_t>(s.period())))};
            for (std::uint64_t i = 0; i < n; ++i) {
                CHECK(pseudopath_count_rho(s, RhoKind::Minus, 1, i, e) <= 1);
                CHECK(pseudopath_count_rho(s, RhoKind::Plus, 1, i, e) <= 1);
            }
        }
    }

    SUBCASE("full-path factorization through an edge") {
        // paths from i to j (start t=0) whose hop q+1 traverses e factor as
        // rho^-_q(i,e) * rho^+_{g-q}(e,j)
        OrnSchedule small(5, 2, 1);
        Rng rng(31);
        for (int trial = 0; trial < 10; ++trial) {
            std::uint64_t i = rng.below(25), j = rng.below(25);
            for (int q = 0; q <= 2; ++q) {
                // e in block q relative to a start at t = 0
                int x = q;  // C = 1: block q holds phase q
                std::uint64_t sc = 1 + rng.below(4);
                std::uint64_t tail = rng.below(25);
                PhysEdge e{tail, compose_orn({x, sc, 0}, 5)};
                long through = 0;
                for (const auto& pp : enumerate_pseudopaths(small, i, j, 0)) {
                    NodeVec cum = index_to_node(i, 5, 2);
                    for (int idx = 0; idx <= 2; ++idx) {
                        const auto& h = pp.hops[static_cast<std::size_t>(idx)];
                        if (idx == q && h.x == x && h.alpha == sc && node_to_index(cum) == tail) ++through;
                        cum = add(cum, scale(h.alpha, small.phase_vector(h.x)));
                    }
                }
                long lhs = pseudopath_count_rho(small, RhoKind::Minus, q, i, e) *
                           pseudopath_count_rho(small, RhoKind::Plus, 2 - q, j, e);
                CHECK(through == lhs);
            }
        }
    }
}

TEST_CASE("oblivious load, ORN") {
    OrnSchedule s(7, 2, 2);

    SUBCASE("zero rate gives a zero load map") {
        auto load = induced_load_oblivious(s, random_perm_demand(49, Rat(0), 3));
        CHECK(load.load.total() == 0);
        CHECK(is_feasible(load.load));
    }

    SUBCASE("per-source rate splits exactly") {
        Rat r = make_rat(3, 10);
        auto pps = enumerate_pseudopaths(s, 11, 30, 5);
        Rat sum = 0;
        for (std::size_t i = 0; i < pps.size(); ++i) sum += r / Rat(static_cast<long>(pps.size()));
        CHECK(sum == r);
    }

    SUBCASE("hop bounds, conservation, latency for sampled permutations") {
        const Rat r = make_rat(3, 10);
        const Rat hop_bound = r * Rat(6) / Rat(5);  // (p-1)/(p-2) r
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            PermDemand d = random_perm_demand(49, r, seed);
            auto res = induced_load_oblivious(s, d);
            Rat max_first = 0, max_last = 0;
            for (std::uint64_t tail = 0; tail < 49; ++tail) {
                for (long k = 0; k < s.period(); ++k) {
                    max_first = std::max(max_first, res.hop_flow[0].at(tail, k));
                    max_last = std::max(max_last, res.hop_flow[2].at(tail, k));
                    Rat sum_hops = 0;
                    for (const auto& hf : res.hop_flow) sum_hops += hf.at(tail, k);
                    CHECK(sum_hops == res.load.at(tail, k));
                }
            }
            CHECK(max_first <= hop_bound);
            CHECK(max_last <= hop_bound);
            CHECK(res.load.total() == conservation_oracle(s, d));
            CHECK(res.max_latency <= orn_primary_latency_bound(s));
        }
    }
}

TEST_CASE("relabeled load is the conjugated base load") {
    Rng rng(41);
    auto tau = rng.permutation(25);
    OrnSchedule base(5, 2, 1);
    OrnSchedule rel(5, 2, 1, tau);
    PermDemand d = random_perm_demand(25, make_rat(1, 4), 8);
    auto lr = induced_load_oblivious(rel, d);

    // conjugate sigma into base names: sigma0 = tau . sigma . tau^{-1}
    Permutation tau_inv(25);
    for (std::uint32_t i = 0; i < 25; ++i) tau_inv[tau[i]] = i;
    Permutation sigma0(25);
    for (std::uint32_t i = 0; i < 25; ++i) sigma0[i] = tau[d.sigma[tau_inv[i]]];
    auto lb = induced_load_oblivious(base, {sigma0, d.rate});

    for (std::uint64_t tail = 0; tail < 25; ++tail)
        for (long k = 0; k < base.period(); ++k) CHECK(lr.load.at(tail, k) == lb.load.at(tau[tail], k));
}

TEST_CASE("oblivious load, SORN") {
    SornSchedule s(7, 2, 1);
    PermDemand d = random_perm_demand(49, make_rat(2, 7), 5);
    auto res = induced_load_oblivious(s, d);

    SUBCASE("edges carry flow of a single hop position") {
        for (std::uint64_t tail = 0; tail < 49; ++tail) {
            for (long k = 0; k < s.period(); ++k) {
                int nonzero = 0;
                for (const auto& hf : res.hop_flow) nonzero += hf.at(tail, k) != 0 ? 1 : 0;
                CHECK(nonzero <= 1);
            }
        }
    }
    SUBCASE("first/last hop bound (p-1)/(p-2) (g+1) r") {
        Rat bound = d.rate * Rat(6 * 3) / Rat(5);
        CHECK(max_load(res.hop_flow.front()).value <= bound);
        CHECK(max_load(res.hop_flow.back()).value <= bound);
    }
    SUBCASE("latency bound 2C(g+1)(p-1)") {
        CHECK(res.max_latency <= sorn_primary_latency_bound(s));
        CHECK(sorn_primary_latency_bound(s) == 36);
    }
}

TEST_CASE("failover paths") {
    SornSchedule s(5, 2, 1);
    std::uint64_t a = node_to_index(make_node({0, 0}, 5));
    std::uint64_t b = node_to_index(make_node({1, 1}, 5));
    auto opts = failover_paths(s, a, b);

    SUBCASE("intermediate count at least (p-2)^g") {
        std::set<std::uint64_t> mids;
        for (const auto& o : opts) mids.insert(o.mid);
        CHECK(mids.size() == 9);
        CHECK(opts.size() == 9 * 9);
    }

    SUBCASE("decomposition uniqueness against exhaustive search") {
        // d = (2,3), v = v(1) = (1,1): the only (A, s) with s A v = d
        NodeVec dvec = make_node({2, 3}, 5);
        long hits = 0;
        long hit_f = -1;
        std::uint64_t hit_s = 0;
        for (long f = 0; f < s.num_frames(); ++f) {
            for (std::uint64_t sc = 1; sc < 5; ++sc) {
                if (node_to_index(scale(sc, s.frame_vector(f, 0))) == node_to_index(dvec)) {
                    ++hits;
                    hit_f = f;
                    hit_s = sc;
                }
            }
        }
        CHECK(hits == 1);
        CHECK(s.family()[static_cast<std::size_t>(hit_f)].diag == make_node({1, 4}, 5));
        CHECK(hit_s == 2);
    }

    SUBCASE("hop timesteps reference real edges") {
        for (const auto& o : opts) {
            CHECK(s.perm(o.k1, a) == o.mid);
            CHECK(s.perm(o.k2, o.mid) == b);
        }
    }
}

TEST_CASE("failover load bounds, p=7 g=2 C=1") {
    SornSchedule s(7, 2, 1);
    const Rat r = make_rat(2, 7);
    PermDemand d = random_perm_demand(49, r, 12);
    auto res = induced_load_failover(s, d);

    // per-hop bound r (g+1) (p-1)^g / (p-2)^g
    Rat bound = r * Rat(3 * 36) / Rat(25);
    auto m1 = max_load(res.hop1);
    auto m2 = max_load(res.hop2);
    CHECK(m1.value <= bound);
    CHECK(m2.value <= bound);

    // sharper oracle: max first-hop load is r (p-1)^g / n_min over valid pairs
    long n_min = 1 << 30;
    for (std::uint64_t a = 0; a < 49; ++a) {
        auto opts = failover_paths(s, a, d.sigma[a]);
        n_min = std::min(n_min, static_cast<long>(opts.size()) / 9);
    }
    CHECK(m1.value == r * Rat(36) / Rat(n_min));

    CHECK(res.max_latency <= sorn_failover_latency_bound(s));
    CHECK(sorn_failover_latency_bound(s) == 2 * s.period() + 18);

    // conservation: every pair ships r*T per period over 2 hops
    CHECK(res.load.total() == r * Rat(s.period()) * Rat(49) * 2);
}

TEST_CASE("semi-oblivious routing decision") {
    SornSchedule s(5, 2, 1);

    SUBCASE("tiny rate keeps the primary mode") {
        PermDemand d = random_perm_demand(25, make_rat(1, 100), 3);
        auto dec = semi_oblivious_route(s, d);
        CHECK(dec.mode == RouteMode::GPlusOneHop);
        CHECK(dec.overloaded_edges.empty());
    }

    SUBCASE("overload forces the failover mode") {
        // searched instance: max rate with some edge above 1 under primary routing
        bool found = false;
        for (std::uint64_t seed = 0; seed < 40 && !found; ++seed) {
            PermDemand d = random_perm_demand(25, make_rat(1, 2), seed);
            auto primary = induced_load_oblivious(s, d);
            if (max_load(primary.load).value > 1) {
                auto dec = semi_oblivious_route(s, d);
                CHECK(dec.mode == RouteMode::TwoHopFailover);
                CHECK(!dec.overloaded_edges.empty());
                found = true;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("contentious constellations and the mixed scheme") {
    SornSchedule s(7, 2, 1);

    SUBCASE("zero rate marks nothing") {
        auto rep = contentious_constellations(s, random_perm_demand(49, Rat(0), 1));
        CHECK(rep.contentious.empty());
    }

    SUBCASE("threshold and budget formulas") {
        const Rat r = make_rat(7, 24);  // eps = 4/7
        auto rep = contentious_constellations(s, random_perm_demand(49, r, 1));
        // delta' = (1 - 4/7)/6 = 1/14; threshold = (15/14) * 3 * 7/24
        CHECK(rep.threshold == make_rat(15, 16));
        // floor((3/7) * 25 / 24) = 0
        CHECK(rep.k_max == 0);
    }

    SUBCASE("mixed loads respect the combined bound") {
        const Rat r = make_rat(7, 24);
        for (std::uint64_t seed : {2ULL, 9ULL}) {
            PermDemand d = random_perm_demand(49, r, seed);
            auto rep = contentious_constellations(s, d);
            auto mixed = mixed_load(s, d, rep.contentious);
            Rat k = Rat(static_cast<long>(rep.contentious.size()));
            Rat bound = rep.threshold + 2 * r * k * Rat(6) / Rat(25);
            auto m = max_load(mixed);
            CHECK(m.value <= bound);
        }
    }
}

TEST_CASE("feasibility predicates") {
    LoadMap l(2, 2);
    CHECK(is_feasible(l));
    CHECK(max_load(l).value == 0);
    l.at(0, 1) = 1;
    CHECK(is_feasible(l));  // non-strict comparison
    l.at(1, 0) = Rat(BigInt(1000000001), BigInt(1000000000));
    CHECK_FALSE(is_feasible(l));
    auto m = max_load(l);
    CHECK(m.edge.tail == 1);
    CHECK(m.edge.k == 0);
}
