#pragma once

#include <cstdint>
#include <vector>

#include "ornlab/rational.hpp"
#include "ornlab/schedule.hpp"

namespace ornlab {

/// One hop of a pseudo-path: phase id and scalar coefficient. A zero
/// coefficient means no physical hop is taken in that phase block.
struct PseudoPathHop {
    int x = 0;
    std::uint64_t alpha = 0;
};

/// (phase, coefficient) encoding of a routing path: one hop per consecutive
/// phase block starting with the first complete block at or after the start
/// time. Non-degenerate means first and last coefficients are non-zero.
/// For constellation-rotating schedules, first_block is the absolute frame
/// index and all hops live inside that frame; x is the phase within the frame.
struct PseudoPath {
    std::uint64_t src = 0;
    std::uint64_t dst = 0;
    long start = 0;
    long first_block = 0;
    std::vector<PseudoPathHop> hops;
};

struct RouteHop {
    std::uint64_t tail = 0;
    long t = 0;
};

/// Realized path in the virtual topology; latency counts both virtual and
/// physical edges, i.e. elapsed timesteps.
struct RoutePath {
    long start = 0;
    long end = 0;
    std::vector<RouteHop> phys;
    long latency() const { return end - start; }
};

/// All non-degenerate (g+1)-hop pseudo-paths from a to b starting at t.
/// The count lies in [(p-2)C^{g+1}, (p-1)C^{g+1}].
std::vector<PseudoPath> enumerate_pseudopaths(const OrnSchedule& s, std::uint64_t a, std::uint64_t b,
                                              long t);
std::vector<PseudoPath> enumerate_pseudopaths(const SornSchedule& s, std::uint64_t a, std::uint64_t b,
                                              long t);

RoutePath realize(const OrnSchedule& s, const PseudoPath& pp);
RoutePath realize(const SornSchedule& s, const PseudoPath& pp);

enum class RhoKind { Minus, Plus };

/// rho^-_q(i, e): q-hop pseudo-paths from i to tail(e) with non-zero first
/// coefficient, drawn from the q phase blocks preceding e's block.
/// rho^+_q(e, j): q-hop pseudo-paths from head(e) to j with non-zero last
/// coefficient, drawn from the q blocks following e's block.
/// Exact count by enumeration.
long pseudopath_count_rho(const OrnSchedule& s, RhoKind kind, int q, std::uint64_t node, PhysEdge e);

/// rho_{g+1}(i, j) at start time t: the non-degenerate (g+1)-hop count.
long pseudopath_count_full(const OrnSchedule& s, std::uint64_t i, std::uint64_t j, long t);

/// Exact per-physical-edge flow over one period, indexed (tail, k).
struct LoadMap {
    std::uint64_t N = 0;
    long T = 0;
    std::vector<Rat> v;

    LoadMap() = default;
    LoadMap(std::uint64_t n, long t) : N(n), T(t), v(static_cast<std::size_t>(n) * static_cast<std::size_t>(t)) {}

    Rat& at(std::uint64_t tail, long k) { return v[static_cast<std::size_t>(tail) * static_cast<std::size_t>(T) + static_cast<std::size_t>(k)]; }
    const Rat& at(std::uint64_t tail, long k) const { return v[static_cast<std::size_t>(tail) * static_cast<std::size_t>(T) + static_cast<std::size_t>(k)]; }

    Rat total() const {
        Rat s = 0;
        for (const auto& x : v) s += x;
        return s;
    }
};

/// Stationary demand sending `rate` from each a to sigma(a) per timestep.
struct PermDemand {
    Permutation sigma;
    Rat rate;
};

PermDemand make_perm_demand(Permutation sigma, Rat rate);
PermDemand random_perm_demand(std::uint64_t n, Rat rate, std::uint64_t seed);

/// Load of the uniform pseudo-path distribution, with the per-edge split by
/// hop position (hop_flow[q] = flow whose phase-block-(q+1) hop is the edge).
struct OblivLoad {
    LoadMap load;
    std::vector<LoadMap> hop_flow;
    long max_latency = 0;
};

OblivLoad induced_load_oblivious(const OrnSchedule& s, const PermDemand& d);
OblivLoad induced_load_oblivious(const SornSchedule& s, const PermDemand& d);

/// hop-position flow decomposition for a single edge; entries sum to load(e).
std::vector<Rat> hop_flow_decomposition(const OrnSchedule& s, const PermDemand& d, PhysEdge e);
std::vector<Rat> hop_flow_decomposition(const SornSchedule& s, const PermDemand& d, PhysEdge e);

/// One two-hop option: intermediate node, constellation-vector pair, and the
/// unique (frame, scale) decompositions of both differences; k1/k2 are the
/// timestep classes of the two hops.
struct TwoHopOption {
    std::uint64_t mid = 0;
    int va = 0, vb = 0;
    long fa = 0, fb = 0;
    std::uint64_t sa = 1, sb = 1;
    long k1 = 0, k2 = 0;
};

/// Support of the failover distribution from a to b: uniform over valid
/// intermediates (both differences all-non-zero) and vector pairs.
/// Throws NoIntermediate when no valid intermediate exists.
std::vector<TwoHopOption> failover_paths(const SornSchedule& s, std::uint64_t a, std::uint64_t b);

struct FailoverLoad {
    LoadMap load;
    LoadMap hop1, hop2;
    long max_latency = 0;
};

FailoverLoad induced_load_failover(const SornSchedule& s, const PermDemand& d);

enum class RouteMode { GPlusOneHop, TwoHopFailover };

struct RoutingDecision {
    RouteMode mode = RouteMode::GPlusOneHop;
    LoadMap load;
    std::vector<PhysEdge> overloaded_edges;
    long max_latency = 0;
};

/// Route on (g+1)-hop paths unless that would overload some edge; in that
/// case route everything on two-hop paths.
RoutingDecision semi_oblivious_route(const SornSchedule& s, const PermDemand& d);

struct ContentiousReport {
    std::vector<long> contentious;  // frame indices
    long k_max = 0;
    Rat threshold;
};

/// Frames containing an edge whose (g+1)-hop load exceeds (1+delta')(g+1)r,
/// delta' = (1-eps)/(2(g+1)), and the frame budget
/// k_max = floor((1-eps)(p-2)^g / (4(p-1))).
ContentiousReport contentious_constellations(const SornSchedule& s, const PermDemand& d);

/// Per-constellation fallback: starts routed in a contentious frame go on
/// two-hop paths, all other starts on (g+1)-hop paths.
LoadMap mixed_load(const SornSchedule& s, const PermDemand& d, const std::vector<long>& contentious);

bool is_feasible(const LoadMap& load);

struct MaxLoad {
    Rat value;
    PhysEdge edge;
};

MaxLoad max_load(const LoadMap& load);

long orn_primary_latency_bound(const OrnSchedule& s);    // C(g+2)(p-1)
long sorn_primary_latency_bound(const SornSchedule& s);  // 2C(g+1)(p-1)
long sorn_failover_latency_bound(const SornSchedule& s); // 2T + C(g+1)(p-1)

}  // namespace ornlab
