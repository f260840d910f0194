#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ornlab/ff.hpp"

using namespace ornlab;

namespace {

// exhaustive oracle: all coefficient tuples over F_p^g recombined against the basis
std::vector<std::vector<std::uint64_t>> solve_by_search(const std::vector<NodeVec>& basis,
                                                        const NodeVec& target, std::uint64_t p) {
    const int g = static_cast<int>(basis.size());
    std::vector<std::vector<std::uint64_t>> hits;
    std::vector<std::uint64_t> alpha(static_cast<std::size_t>(g), 0);
    while (true) {
        NodeVec sum = make_node(std::vector<std::uint64_t>(target.size(), 0), p);
        for (int i = 0; i < g; ++i) sum = add(sum, scale(alpha[static_cast<std::size_t>(i)], basis[static_cast<std::size_t>(i)]));
        if (node_to_index(sum) == node_to_index(target)) hits.push_back(alpha);
        int i = g - 1;
        while (i >= 0 && alpha[static_cast<std::size_t>(i)] == p - 1) {
            alpha[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++alpha[static_cast<std::size_t>(i)];
    }
    return hits;
}

}  // namespace

TEST_CASE("prime field construction") {
    CHECK_NOTHROW(PrimeField(2));
    CHECK_NOTHROW(PrimeField(13));
    CHECK_THROWS_AS(PrimeField(1), Error);
    CHECK_THROWS_AS(PrimeField(9), Error);
    PrimeField f(7);
    for (std::uint64_t a = 1; a < 7; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
}

TEST_CASE("vandermonde vectors") {
    CHECK(vandermonde(Fp(0, 5), 3) == make_node({1, 0, 0}, 5));
    CHECK(vandermonde(Fp(1, 7), 4) == make_node({1, 1, 1, 1}, 7));
    CHECK(vandermonde(Fp(2, 5), 3) == make_node({1, 2, 4}, 5));
}

TEST_CASE("solve_coeffs") {
    SUBCASE("standard basis") {
        auto a = solve_coeffs({make_node({1, 0}, 5), make_node({0, 1}, 5)}, make_node({3, 4}, 5));
        CHECK(a[0].v == 3);
        CHECK(a[1].v == 4);
    }
    SUBCASE("zero target") {
        auto a = solve_coeffs({make_node({1, 1}, 5), make_node({1, 2}, 5)}, make_node({0, 0}, 5));
        CHECK(a[0].v == 0);
        CHECK(a[1].v == 0);
    }
    SUBCASE("oracle-derived pair") {
        std::vector<NodeVec> basis{make_node({1, 1}, 5), make_node({1, 2}, 5)};
        NodeVec target = make_node({1, 0}, 5);
        auto hits = solve_by_search(basis, target, 5);
        REQUIRE(hits.size() == 1);
        CHECK(hits[0] == std::vector<std::uint64_t>{2, 4});
        auto a = solve_coeffs(basis, target);
        CHECK(a[0].v == hits[0][0]);
        CHECK(a[1].v == hits[0][1]);
    }
    SUBCASE("dependent basis") {
        CHECK_THROWS_AS(solve_coeffs({make_node({1, 0}, 5), make_node({2, 0}, 5)}, make_node({0, 1}, 5)),
                        SingularBasis);
    }
}

TEST_CASE("solve then recombine, exhaustive p<=7 g=2") {
    for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
        std::vector<NodeVec> basis{vandermonde(Fp(1, p), 2), vandermonde(Fp(2, p), 2)};
        for (std::uint64_t i = 0; i < p * p; ++i) {
            NodeVec target = index_to_node(i, p, 2);
            auto a = solve_coeffs(basis, target);
            NodeVec back = add(scale(a[0].v, basis[0]), scale(a[1].v, basis[1]));
            CHECK(node_to_index(back) == i);
        }
    }
}

TEST_CASE("is_constellation") {
    std::uint64_t p = 5;
    std::vector<NodeVec> vdm{vandermonde(Fp(0, p), 2), vandermonde(Fp(1, p), 2), vandermonde(Fp(2, p), 2)};
    CHECK(is_constellation(vdm, 2));
    CHECK_FALSE(is_constellation({make_node({1, 0}, p), make_node({2, 0}, p), make_node({0, 1}, p)}, 2));
    CHECK_FALSE(is_constellation({make_node({1, 1}, p), make_node({1, 1}, p), make_node({0, 1}, p)}, 2));
}

TEST_CASE("distinct vandermonde vectors always form constellations") {
    // all subsets of distinct Vandermonde vectors of size g+1, small sweep
    for (std::uint64_t p : {5ULL, 7ULL}) {
        for (int g : {2, 3}) {
            if (p < static_cast<std::uint64_t>(g) + 1) continue;
            std::vector<NodeVec> all;
            for (std::uint64_t x = 0; x < p; ++x) all.push_back(vandermonde(Fp(x, p), g));
            // take consecutive windows of size g+1
            for (std::uint64_t start = 0; start + g + 1 <= p; ++start) {
                std::vector<NodeVec> window(all.begin() + static_cast<long>(start),
                                            all.begin() + static_cast<long>(start + g + 1));
                CHECK(is_constellation(window, g));
            }
        }
    }
}

TEST_CASE("twist") {
    std::uint64_t p = 5;
    Constellation cons;
    cons.block_size = 1;
    cons.vectors = {make_node({1, 0}, p), make_node({1, 1}, p), make_node({1, 2}, p)};

    SUBCASE("identity") {
        auto out = twist(make_diag({1, 1}, p), cons);
        CHECK(out.vectors == cons.vectors);
    }
    SUBCASE("componentwise products") {
        auto out = twist(make_diag({2, 3}, p), cons);
        CHECK(out.vectors[0] == make_node({2, 0}, p));
        CHECK(out.vectors[1] == make_node({2, 3}, p));
        CHECK(out.vectors[2] == make_node({2, 1}, p));
    }
    SUBCASE("preserves the constellation property, exhaustive p<=7 g=2") {
        for (std::uint64_t q : {3ULL, 5ULL, 7ULL}) {
            Constellation base;
            base.block_size = 1;
            for (std::uint64_t x = 1; x <= 3 && x < q; ++x) base.vectors.push_back(vandermonde(Fp(x, q), 2));
            if (base.vectors.size() < 3) continue;
            REQUIRE(is_constellation(base.vectors, 2));
            for (std::uint64_t d = 1; d < q; ++d) {
                auto out = twist(make_diag({1, d}, q), base);
                CHECK(is_constellation(out.vectors, 2));
            }
        }
    }
}

TEST_CASE("node index bijection") {
    CHECK(node_to_index(make_node({0, 0, 0}, 5)) == 0);
    CHECK(node_to_index(make_node({1, 0}, 5)) == 1);  // little-endian anchor
    for (std::uint64_t i = 0; i < 25; ++i) CHECK(node_to_index(index_to_node(i, 5, 2)) == i);
    CHECK_THROWS_AS(index_to_node(25, 5, 2), IndexOutOfRange);
}

TEST_CASE("diag matrix requires invertible entries") {
    CHECK_THROWS_AS(make_diag({1, 0}, 5), Error);
    CHECK_NOTHROW(make_diag({1, 4}, 5));
}
