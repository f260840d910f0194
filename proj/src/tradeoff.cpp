#include "ornlab/tradeoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ornlab/rng.hpp"

namespace ornlab {

namespace {

BigInt rat_floor_pos(const Rat& r) { return numerator(r) / denominator(r); }

DesignParams derive_impl(const Rat& r, std::uint64_t p, DesignMode mode, bool strict) {
    if (r <= 0 || r > make_rat(1, 2)) throw Error("derive_params: r must lie in (0, 1/2]");
    PrimeField field(p);

    const Rat inv_r = Rat(1) / r;
    if (is_integer(inv_r)) throw EpsilonOne("derive_params: 1/r is an integer, eps = 1");

    DesignParams d;
    d.r = r;
    d.p = p;
    d.mode = mode;
    d.g = static_cast<int>(rat_floor_pos(inv_r - 1).convert_to<long>());
    d.eps = Rat(d.g + 2) - inv_r;
    const Rat inv_2r = inv_r / 2;
    d.h = static_cast<int>(rat_floor_pos(inv_2r).convert_to<long>());
    d.eps_o = Rat(d.h + 1) - inv_2r;
    d.theta = static_cast<int>(rat_floor_pos(inv_r).convert_to<long>());
    d.N = bigint_pow(BigInt(p), static_cast<unsigned>(d.g));

    const double eps = rat_to_double(d.eps);
    const double pd = static_cast<double>(p);
    if (d.g >= 2) {
        double arg = (d.g - eps - 2.0 / (pd - 2.0)) / (d.g - 1.0);
        d.gamma_orn = arg > 0 ? std::log(arg) : std::numeric_limits<double>::quiet_NaN();
    } else {
        d.gamma_orn = std::numeric_limits<double>::quiet_NaN();
    }
    d.gamma_sorn = std::log((d.g + 2 - eps) / (d.g + 1));
    d.delta_sorn = std::pow(d.g + 1.0, 1.0 / d.g) / std::pow(d.g + 2.0 - eps, 1.0 / d.g);

    const double ln_n = d.g * std::log(pd);
    const double loglog_n = std::log(ln_n);
    double gamma = mode == DesignMode::Orn ? d.gamma_orn : d.gamma_sorn;
    if (std::isnan(gamma) || gamma <= 0) {
        d.C = -1;
    } else {
        d.C = std::max(1L, static_cast<long>(std::ceil(loglog_n * ln_n / (gamma * gamma))));
    }

    auto check = [&](const std::string& name, bool pass, const std::string& detail) {
        d.checks.push_back({name, pass, detail});
    };

    if (mode == DesignMode::Orn) {
        check("g >= 2", d.g >= 2, "gamma formula divides by g - 1");
        const Rat bound = Rat(2) + Rat(2) / (Rat(1) - d.eps);
        check("p > 2 + 2/(1-eps)", Rat(static_cast<long>(p)) > bound, "required " + rat_to_string(bound));
        check("p >= C(g+1)", d.C > 0 && static_cast<long>(p) >= d.C * (d.g + 1),
              d.C > 0 ? "C(g+1) = " + std::to_string(d.C * (d.g + 1)) : "C undefined");
    } else {
        check("g >= 2", d.g >= 2, "constellation family needs g >= 2");
        const Rat bound1 = Rat(2) + Rat(2) / (Rat(1) - d.eps);
        check("p > 2 + 2/(1-eps)", Rat(static_cast<long>(p)) > bound1, "required " + rat_to_string(bound1));
        const Rat bound2 = Rat(d.g + 3) / d.eps - 2;
        check("p > (g+3)/eps - 2", Rat(static_cast<long>(p)) > bound2, "required " + rat_to_string(bound2));
        const double bound3 = (2.0 - d.delta_sorn) / (1.0 - d.delta_sorn);
        check("p > (2-delta)/(1-delta)", d.delta_sorn < 1 && pd > bound3,
              "required " + std::to_string(bound3));
        check("p > C(g+1)", d.C > 0 && static_cast<long>(p) > d.C * (d.g + 1),
              d.C > 0 ? "C(g+1) = " + std::to_string(d.C * (d.g + 1)) : "C undefined");
    }

    if (strict) {
        if (d.g < 2) throw UnsupportedDesign("derive_params: theorem parameter path needs g >= 2");
        std::string violated;
        for (const auto& c : d.checks) {
            if (!c.pass) violated += (violated.empty() ? "" : "; ") + c.name + " (" + c.detail + ")";
        }
        if (!violated.empty()) throw PrimeTooSmall("derive_params: violated: " + violated);
    }
    return d;
}

}  // namespace

DesignParams derive_params(const Rat& r, std::uint64_t p, DesignMode mode) {
    return derive_impl(r, p, mode, true);
}

DesignParams derive_params_report(const Rat& r, std::uint64_t p, DesignMode mode) {
    return derive_impl(r, p, mode, false);
}

double curve(const Rat& r, double n, CurveKind kind) {
    if (r <= 0 || r > make_rat(1, 2)) throw Error("curve: r must lie in (0, 1/2]");
    const Rat inv_r = Rat(1) / r;
    const Rat inv_2r = inv_r / 2;
    const long h = rat_floor_pos(inv_2r).convert_to<long>();
    if (kind == CurveKind::VlbLine) {
        double hd = static_cast<double>(h);
        return hd * std::pow(n, 1.0 / hd);
    }
    if (is_integer(inv_r)) throw EpsilonOne("curve: 1/r is an integer");
    const long g = rat_floor_pos(inv_r - 1).convert_to<long>();
    const double eps = rat_to_double(Rat(g + 2) - inv_r);
    const double eps_o = rat_to_double(Rat(h + 1) - inv_2r);
    const double gd = static_cast<double>(g), hd = static_cast<double>(h);
    switch (kind) {
        case CurveKind::Lupp:
            return gd * std::pow(n, 1.0 / gd);
        case CurveKind::Llow:
            return gd * (std::pow(eps * n, 1.0 / gd) + std::pow(n, 1.0 / (gd + 1.0)));
        case CurveKind::Lobl:
            return eps_o * std::pow(eps_o * n, 1.0 / hd) + std::pow(n, 1.0 / (hd + 1.0));
        case CurveKind::Lsem:
            return eps * std::pow(eps * n, 1.0 / gd) + std::pow(n, 1.0 / (gd + 1.0));
        default:
            throw Error("curve: unknown kind");
    }
}

CurvePoint curve_point(const Rat& r, double n) {
    CurvePoint cp;
    cp.r = rat_to_double(r);
    const Rat inv_r = Rat(1) / r;
    cp.g = static_cast<int>(rat_floor_pos(inv_r - 1).convert_to<long>());
    cp.eps = rat_to_double(Rat(cp.g + 2) - inv_r);
    cp.l_upp = curve(r, n, CurveKind::Lupp);
    cp.l_low = curve(r, n, CurveKind::Llow);
    cp.l_obl = curve(r, n, CurveKind::Lobl);
    cp.l_sem = curve(r, n, CurveKind::Lsem);
    cp.vlb = curve(r, n, CurveKind::VlbLine);
    return cp;
}

std::vector<CurvePoint> sweep_curves(double n, const std::vector<Rat>& grid) {
    std::vector<CurvePoint> out;
    out.reserve(grid.size());
    for (const auto& r : grid) out.push_back(curve_point(r, n));
    return out;
}

CountingBound counting_bound(long l, long h) {
    if (l < 0 || h < 0) throw Error("counting_bound: negative arguments");
    CountingBound b;
    b.value = 2 * binomial(static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(h));
    b.asserted = 3 * h <= l;
    return b;
}

namespace {

// Min latency from each (node, hops) to/from an anchor vertex of the
// time-expanded graph; -1 where unreachable within depth.
struct ReachTable {
    int theta;
    std::vector<long> d;  // node * theta + hops

    long& at(std::uint64_t node, int m) { return d[node * static_cast<std::uint64_t>(theta) + static_cast<std::uint64_t>(m)]; }
    long at(std::uint64_t node, int m) const { return d[node * static_cast<std::uint64_t>(theta) + static_cast<std::uint64_t>(m)]; }
};

// Backward: min d such that `node` departing at time k-d reaches tail at time
// k using m physical hops.
ReachTable backward_reach(const Schedule& s, std::uint64_t tail, long k, int theta, long depth) {
    const std::uint64_t n = sched_nodes(s);
    ReachTable rt{theta, std::vector<long>(n * static_cast<std::uint64_t>(theta), -1)};
    std::vector<std::uint8_t> cur(n * static_cast<std::uint64_t>(theta), 0), nxt;
    rt.at(tail, 0) = 0;
    cur[tail * static_cast<std::uint64_t>(theta)] = 1;
    nxt = cur;
    for (long d = 1; d <= depth; ++d) {
        std::fill(nxt.begin(), nxt.end(), 0);
        const long t = k - d;  // transitions over timestep t: (u, t) -> (v, t+1)
        bool any = false;
        for (std::uint64_t v = 0; v < n; ++v) {
            for (int m = 0; m < theta; ++m) {
                if (!cur[v * static_cast<std::uint64_t>(theta) + static_cast<std::uint64_t>(m)]) continue;
                // wait at v
                auto touch = [&](std::uint64_t node, int hops) {
                    nxt[node * static_cast<std::uint64_t>(theta) + static_cast<std::uint64_t>(hops)] = 1;
                    if (rt.at(node, hops) < 0) rt.at(node, hops) = d;
                    any = true;
                };
                touch(v, m);
                if (m + 1 < theta) touch(sched_perm_inv(s, t, v), m + 1);
            }
        }
        std::swap(cur, nxt);
        if (!any) break;
    }
    return rt;
}

// Forward: min d such that from (head, k+1), `node` is reached at time k+1+d
// using m physical hops. When `stop_at` is set, the search exits as soon as
// that node is reached (any depth reached within the cap already satisfies
// the latency budget of the caller's shortcut check).
ReachTable forward_reach(const Schedule& s, std::uint64_t head, long k, int theta, long depth,
                         const std::uint64_t* stop_at = nullptr, bool* stopped = nullptr) {
    const std::uint64_t n = sched_nodes(s);
    ReachTable rt{theta, std::vector<long>(n * static_cast<std::uint64_t>(theta), -1)};
    std::vector<std::uint8_t> cur(n * static_cast<std::uint64_t>(theta), 0), nxt;
    rt.at(head, 0) = 0;
    cur[head * static_cast<std::uint64_t>(theta)] = 1;
    nxt = cur;
    if (stop_at && *stop_at == head) {
        if (stopped) *stopped = true;
        return rt;
    }
    for (long d = 1; d <= depth; ++d) {
        std::fill(nxt.begin(), nxt.end(), 0);
        const long t = k + d;  // transitions over timestep t: (u, t) -> (v, t+1)
        bool any = false;
        for (std::uint64_t v = 0; v < n; ++v) {
            for (int m = 0; m < theta; ++m) {
                if (!cur[v * static_cast<std::uint64_t>(theta) + static_cast<std::uint64_t>(m)]) continue;
                auto touch = [&](std::uint64_t node, int hops) {
                    nxt[node * static_cast<std::uint64_t>(theta) + static_cast<std::uint64_t>(hops)] = 1;
                    if (rt.at(node, hops) < 0) rt.at(node, hops) = d;
                    any = true;
                };
                touch(v, m);
                if (m + 1 < theta) touch(sched_perm(s, t, v), m + 1);
            }
        }
        std::swap(cur, nxt);
        if (stop_at) {
            for (int m = 0; m < theta; ++m) {
                if (rt.at(*stop_at, m) >= 0) {
                    if (stopped) *stopped = true;
                    return rt;
                }
            }
        }
        if (!any) break;
    }
    return rt;
}

bool edge_matched(const Schedule& s, const Permutation& sigma, int theta, long l, std::uint64_t tail,
                  long k) {
    const std::uint64_t head = sched_perm(s, k, tail);
    // shortcut: paths starting with the edge itself; any forward reach of
    // sigma(tail) within depth l-1 gives total latency 1 + d <= l
    bool stopped = false;
    const std::uint64_t target = sigma[tail];
    const std::uint64_t* stop = target != tail ? &target : nullptr;
    ReachTable fwd = forward_reach(s, head, k, theta, l - 1, stop, &stopped);
    if (stopped) return true;
    ReachTable bwd = backward_reach(s, tail, k, theta, l - 1);
    const std::uint64_t n = sched_nodes(s);
    for (std::uint64_t u = 0; u < n; ++u) {
        if (sigma[u] == u) continue;
        for (int m1 = 0; m1 < theta; ++m1) {
            long db = bwd.at(u, m1);
            if (db < 0) continue;
            for (int m2 = 0; m1 + m2 < theta; ++m2) {
                long df = fwd.at(sigma[u], m2);
                if (df >= 0 && db + 1 + df <= l) return true;
            }
        }
    }
    return false;
}

}  // namespace

DualParts dual_edge_classification(const Schedule& s, const Permutation& sigma, int theta, long l) {
    if (theta < 1 || l < 1) throw Error("dual bound: theta >= 1 and L >= 1 required");
    const std::uint64_t n = sched_nodes(s);
    const long t = sched_period(s);
    if (sigma.size() != n) throw Error("dual bound: sigma size mismatch");

    DualParts parts;
    parts.edges = static_cast<long>(n) * t;
    for (std::uint64_t u = 0; u < n; ++u)
        if (sigma[u] != u) ++parts.nonfixed;
    for (long k = 0; k < t; ++k)
        for (std::uint64_t tail = 0; tail < n; ++tail)
            if (edge_matched(s, sigma, theta, l, tail, k)) ++parts.matched;
    return parts;
}

Rat dual_throughput_bound(const Schedule& s, const Permutation& sigma, int theta, long l) {
    DualParts parts = dual_edge_classification(s, sigma, theta, l);
    if (parts.nonfixed == 0) throw Error("dual_throughput_bound: identity demand is unconstrained");
    const long t = sched_period(s);
    BigInt beta_sum = BigInt(parts.edges) + BigInt(theta) * parts.matched;
    return Rat(beta_sum, BigInt(parts.nonfixed) * t * (theta + 1));
}

DualEstimate expected_dual_bound(const Schedule& s, int theta, long l, std::uint64_t trials,
                                 std::uint64_t seed) {
    if (trials < 1) throw Error("expected_dual_bound: trials must be >= 1");
    const std::uint64_t n = sched_nodes(s);

    DualEstimate est;
    est.trials = trials;
    double sum = 0, sum2 = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        Permutation sigma = rng.permutation(n);
        bool identity = true;
        for (std::uint64_t i = 0; i < n && identity; ++i) identity = sigma[i] == i;
        if (identity) sigma = rng.permutation(n);  // resample; still deterministic
        double val = rat_to_double(dual_throughput_bound(s, sigma, theta, l));
        sum += val;
        sum2 += val * val;
    }
    double m = static_cast<double>(trials);
    est.mean = sum / m;
    double var = std::max(0.0, sum2 / m - est.mean * est.mean);
    est.ci_halfwidth = 3.0 * std::sqrt(var / m);
    double nd = static_cast<double>(n);
    double binom2l = binomial(static_cast<std::uint64_t>(2 * l), static_cast<std::uint64_t>(theta - 1))
                         .convert_to<double>();
    est.closed_form = (1.0 + 4.0 * theta / nd * binom2l) / (theta + 1.0);
    return est;
}

double maxlat_lowerbound(const Rat& r, double n, int d) {
    if (r <= 0 || r > make_rat(1, 2)) throw Error("maxlat_lowerbound: r must lie in (0, 1/2]");
    const Rat inv_r = Rat(1) / r;
    if (is_integer(inv_r)) throw EpsilonOne("maxlat_lowerbound: 1/r is an integer");
    if (d < 1) throw Error("maxlat_lowerbound: d >= 1 required");
    const long theta = rat_floor_pos(inv_r).convert_to<long>();
    const double td = static_cast<double>(theta);
    const double rd = rat_to_double(r);
    const double shrink = 1.0 - std::pow(n, -static_cast<double>(d));  // (N^d - 1) / N^d
    const double bracket = (shrink * rd - 1.0 / (td + 1.0)) * std::sqrt(2.0 * M_PI * (td - 1.0)) / (4.0 * td);
    if (bracket <= 0) return 0.0;
    return (td - 1.0) / (2.0 * std::exp(1.0)) * std::pow(n, 1.0 / (td - 1.0)) *
           std::pow(bracket, 1.0 / (td - 1.0));
}

}  // namespace ornlab
