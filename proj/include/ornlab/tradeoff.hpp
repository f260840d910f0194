#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ornlab/rational.hpp"
#include "ornlab/schedule.hpp"

namespace ornlab {

enum class DesignMode { Orn, Sorn };

struct HypothesisCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Scalar parameters tying schedule, routing and analysis together for a
/// target throughput r at prime p: g = floor(1/r - 1), eps = g + 2 - 1/r,
/// h = floor(1/(2r)), eps_o = h + 1 - 1/(2r), theta = floor(1/r), N = p^g,
/// gamma per family, C = ceil(loglog N / gamma^2 * ln N).
struct DesignParams {
    Rat r;
    std::uint64_t p = 0;
    int g = 0;
    Rat eps;
    int h = 0;
    Rat eps_o;
    int theta = 0;
    BigInt N;
    double gamma_orn = 0;   // NaN when g < 2
    double gamma_sorn = 0;
    double delta_sorn = 0;  // (g+1)^{1/g} / (g+2-eps)^{1/g}
    long C = 0;             // for the requested mode; -1 when gamma is unusable
    DesignMode mode = DesignMode::Orn;
    std::vector<HypothesisCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Strict: throws EpsilonOne when 1/r is an integer, UnsupportedDesign when
/// the theorem parameter path needs g >= 2, and PrimeTooSmall naming every
/// violated prime lower bound.
DesignParams derive_params(const Rat& r, std::uint64_t p, DesignMode mode);

/// Same computation, but violated prime bounds are only reported as failed
/// checks. Still throws EpsilonOne (every formula degenerates there).
DesignParams derive_params_report(const Rat& r, std::uint64_t p, DesignMode mode);

enum class CurveKind { Lupp, Llow, Lobl, Lsem, VlbLine };

/// Closed-form tradeoff curves: L_upp = g N^{1/g},
/// L_low = g((eps N)^{1/g} + N^{1/(g+1)}), L_obl = eps_o (eps_o N)^{1/h} + N^{1/(h+1)},
/// L_sem = eps (eps N)^{1/g} + N^{1/(g+1)}, and the guaranteed-throughput
/// two-hop reference line h N^{1/h} with h = floor(1/(2r)).
double curve(const Rat& r, double n, CurveKind kind);

struct CurvePoint {
    double r = 0;
    int g = 0;
    double eps = 0;
    double l_upp = 0, l_low = 0, l_obl = 0, l_sem = 0, vlb = 0;
};

CurvePoint curve_point(const Rat& r, double n);
std::vector<CurvePoint> sweep_curves(double n, const std::vector<Rat>& grid);

struct CountingBound {
    BigInt value;
    bool asserted = false;  // h <= L/3, the Lemma's validity range
};

/// 2 * binomial(L, h), exact.
CountingBound counting_bound(long l, long h);

/// Exact value of the constructed dual solution: beta = theta+1 on edges lying
/// on a <= theta-physical-hop, <= L-latency path between some sigma-matched
/// pair, 1 elsewhere; value = sum(beta) / (N* T (theta+1)) with N* the number
/// of non-fixed points of sigma. Upper-bounds the best throughput any routing
/// of sigma's pairs with latency cap L can achieve on this schedule.
Rat dual_throughput_bound(const Schedule& s, const Permutation& sigma, int theta, long l);

struct DualParts {
    long matched = 0;
    long edges = 0;
    long nonfixed = 0;
};

DualParts dual_edge_classification(const Schedule& s, const Permutation& sigma, int theta, long l);

struct DualEstimate {
    double mean = 0;
    double ci_halfwidth = 0;
    double closed_form = 0;  // (1 + (4 theta / N) binom(2L, theta-1)) / (theta+1)
    std::uint64_t trials = 0;
};

DualEstimate expected_dual_bound(const Schedule& s, int theta, long l, std::uint64_t trials,
                                 std::uint64_t seed);

/// Pre-asymptotic maximum-latency lower bound at degree d:
/// (theta-1)/(2e) N^{1/(theta-1)} [ ((N^d-1)/N^d r - 1/(theta+1)) sqrt(2 pi (theta-1)) / (4 theta) ]^{1/(theta-1)}
/// with theta = floor(1/r); 0 when the bracket is non-positive.
double maxlat_lowerbound(const Rat& r, double n, int d);

}  // namespace ornlab
