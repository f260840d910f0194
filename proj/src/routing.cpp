#include "ornlab/routing.hpp"

#include <algorithm>
#include <unordered_map>

#include "ornlab/rng.hpp"

namespace ornlab {

namespace {

long mod_t(long k, long t) { return ((k % t) + t) % t; }

/// Digit-wise node-index arithmetic in little-endian base p.
struct NodeIndexer {
    std::uint64_t p;
    int g;

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t out = 0, mul = 1;
        for (int i = 0; i < g; ++i) {
            out += ((a % p + b % p) % p) * mul;
            a /= p;
            b /= p;
            mul *= p;
        }
        return out;
    }

    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t out = 0, mul = 1;
        for (int i = 0; i < g; ++i) {
            out += ((a % p + p - b % p) % p) * mul;
            a /= p;
            b /= p;
            mul *= p;
        }
        return out;
    }
};

struct RawPath {
    std::vector<PseudoPathHop> hops;  // g+1 entries aligned with consecutive blocks
};

/// Solutions of sum_i alpha_i dirs[x_i] = d with x_i in block i's phase range,
/// alpha_1 != 0 and alpha_{g+1} != 0, parameterized by the last coefficient:
/// with the first g directions as a basis, alpha(beta) = u0 - beta*u1 where
/// u0 solves for d and u1 solves for the last direction.
std::vector<RawPath> enumerate_raw(const std::vector<NodeVec>& dirs, const std::vector<int>& block_lo,
                                   int C, const NodeVec& d, std::uint64_t p, int g) {
    const int hops = g + 1;
    std::vector<RawPath> out;
    std::vector<int> off(static_cast<std::size_t>(hops), 0);
    std::vector<NodeVec> basis(static_cast<std::size_t>(g));
    while (true) {
        for (int i = 0; i < g; ++i) basis[static_cast<std::size_t>(i)] = dirs[static_cast<std::size_t>(block_lo[static_cast<std::size_t>(i)] + off[static_cast<std::size_t>(i)])];
        const NodeVec& last = dirs[static_cast<std::size_t>(block_lo[static_cast<std::size_t>(g)] + off[static_cast<std::size_t>(g)])];
        std::vector<Fp> u0 = solve_coeffs(basis, d);
        std::vector<Fp> u1 = solve_coeffs(basis, last);
        for (std::uint64_t beta = 1; beta < p; ++beta) {
            std::uint64_t a1 = (u0[0].v + (p - u1[0].v) * beta) % p;
            if (a1 == 0) continue;
            RawPath rp;
            rp.hops.resize(static_cast<std::size_t>(hops));
            for (int i = 0; i < g; ++i) {
                std::uint64_t ai = (u0[static_cast<std::size_t>(i)].v + (p - u1[static_cast<std::size_t>(i)].v) * beta) % p;
                rp.hops[static_cast<std::size_t>(i)] = {block_lo[static_cast<std::size_t>(i)] + off[static_cast<std::size_t>(i)], ai};
            }
            rp.hops[static_cast<std::size_t>(g)] = {block_lo[static_cast<std::size_t>(g)] + off[static_cast<std::size_t>(g)], beta};
            out.push_back(std::move(rp));
        }
        int i = hops - 1;
        while (i >= 0 && off[static_cast<std::size_t>(i)] == C - 1) {
            off[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++off[static_cast<std::size_t>(i)];
    }
    return out;
}

// Hop timing. For the round-robin family hop i (1-based) lives in absolute
// block b0+i-1; for the constellation family all hops live in frame phi0.
long orn_hop_time(const OrnSchedule& s, long b0, int i, int x, std::uint64_t alpha) {
    long blk = b0 + i - 1;
    long m = blk / (s.g() + 1);
    return m * s.period() + static_cast<long>(s.p() - 1) * x + static_cast<long>(alpha) - 1;
}

long sorn_hop_time(const SornSchedule& s, long phi0, int x, std::uint64_t alpha) {
    long m = phi0 / s.num_frames();
    long f = phi0 % s.num_frames();
    return m * s.period() + f * s.frame_len() + static_cast<long>(s.p() - 1) * x + static_cast<long>(alpha) - 1;
}

std::vector<int> orn_block_lo(const OrnSchedule& s, long b0) {
    std::vector<int> lo(static_cast<std::size_t>(s.g() + 1));
    for (int i = 1; i <= s.g() + 1; ++i)
        lo[static_cast<std::size_t>(i - 1)] = static_cast<int>((b0 + i - 1) % (s.g() + 1)) * s.C();
    return lo;
}

std::vector<int> sorn_block_lo(const SornSchedule& s) {
    std::vector<int> lo(static_cast<std::size_t>(s.g() + 1));
    for (int i = 0; i <= s.g(); ++i) lo[static_cast<std::size_t>(i)] = i * s.C();
    return lo;
}

void validate_demand(const PermDemand& d, std::uint64_t n) {
    if (d.sigma.size() != n) throw Error("PermDemand: sigma size != N");
    std::vector<bool> seen(n, false);
    for (auto x : d.sigma) {
        if (x >= n || seen[x]) throw Error("PermDemand: sigma not a permutation");
        seen[x] = true;
    }
    if (d.rate < 0 || d.rate > make_rat(1, 2)) throw Error("PermDemand: rate outside [0, 1/2]");
}

/// Pseudo-path skeleton shared by all sources with the same difference vector
/// and start time: per physical hop, the block position q, the tail offset
/// from the source, and the timestep class.
struct HopRec {
    int q;
    std::uint64_t delta;
    long k;
};

struct CacheEntry {
    long count = 0;
    long max_end = 0;
    long total_phys_hops = 0;
    std::vector<HopRec> recs;
};

CacheEntry build_entry_orn(const OrnSchedule& s, const NodeVec& d, long t) {
    const long b0 = next_multiple(t, s.block_len()) / s.block_len();
    std::vector<NodeVec> dirs;
    dirs.reserve(static_cast<std::size_t>(s.num_phases()));
    for (int x = 0; x < s.num_phases(); ++x) dirs.push_back(s.phase_vector(x));
    auto raw = enumerate_raw(dirs, orn_block_lo(s, b0), s.C(), d, s.p(), s.g());

    CacheEntry e;
    e.count = static_cast<long>(raw.size());
    for (const auto& rp : raw) {
        NodeVec cum = make_node(std::vector<std::uint64_t>(static_cast<std::size_t>(s.g()), 0), s.p());
        long last = t;
        for (int i = 1; i <= s.g() + 1; ++i) {
            const auto& h = rp.hops[static_cast<std::size_t>(i - 1)];
            if (h.alpha != 0) {
                long ht = orn_hop_time(s, b0, i, h.x, h.alpha);
                e.recs.push_back({i - 1, node_to_index(cum), mod_t(ht, s.period())});
                cum = add(cum, scale(h.alpha, s.phase_vector(h.x)));
                last = ht;
                ++e.total_phys_hops;
            }
        }
        e.max_end = std::max(e.max_end, last + 1);
    }
    return e;
}

CacheEntry build_entry_sorn(const SornSchedule& s, const NodeVec& d, long t) {
    const long phi0 = next_multiple(t, s.frame_len()) / s.frame_len();
    const long f = phi0 % s.num_frames();
    std::vector<NodeVec> dirs;
    dirs.reserve(static_cast<std::size_t>(s.num_phases()));
    for (int x = 0; x < s.num_phases(); ++x) dirs.push_back(s.frame_vector(f, x));
    auto raw = enumerate_raw(dirs, sorn_block_lo(s), s.C(), d, s.p(), s.g());

    CacheEntry e;
    e.count = static_cast<long>(raw.size());
    for (const auto& rp : raw) {
        NodeVec cum = make_node(std::vector<std::uint64_t>(static_cast<std::size_t>(s.g()), 0), s.p());
        long last = t;
        for (int i = 1; i <= s.g() + 1; ++i) {
            const auto& h = rp.hops[static_cast<std::size_t>(i - 1)];
            if (h.alpha != 0) {
                long ht = sorn_hop_time(s, phi0, h.x, h.alpha);
                e.recs.push_back({i - 1, node_to_index(cum), mod_t(ht, s.period())});
                cum = add(cum, scale(h.alpha, s.frame_vector(f, h.x)));
                last = ht;
                ++e.total_phys_hops;
            }
        }
        e.max_end = std::max(e.max_end, last + 1);
    }
    return e;
}

template <typename Sched, typename BuildEntry>
OblivLoad accumulate_oblivious(const Sched& s, const PermDemand& d, BuildEntry build) {
    const std::uint64_t n = s.node_count();
    validate_demand(d, n);
    const long t_period = s.period();
    const int g = s.g();
    const NodeIndexer ix{s.p(), g};

    const long lo = static_cast<long>(s.p() - 2) *
                    static_cast<long>(pow_u64(static_cast<std::uint64_t>(s.C()), static_cast<unsigned>(g + 1)));
    const int ncls = static_cast<int>(pow_u64(static_cast<std::uint64_t>(s.C()), static_cast<unsigned>(g + 1))) + 1;

    std::unordered_map<std::uint64_t, CacheEntry> cache;
    std::vector<std::int64_t> tally(n * static_cast<std::uint64_t>(t_period) * static_cast<std::uint64_t>(g + 1) *
                                        static_cast<std::uint64_t>(ncls),
                                    0);
    long max_latency = 0;

    for (std::uint64_t a0 = 0; a0 < n; ++a0) {
        const std::uint64_t a_vis = s.from_base(a0);
        const std::uint64_t b0 = s.to_base(d.sigma[a_vis]);
        const std::uint64_t diff = ix.sub(b0, a0);
        const NodeVec dvec = index_to_node(diff, s.p(), g);
        for (long t = 0; t < t_period; ++t) {
            std::uint64_t key = diff * static_cast<std::uint64_t>(t_period) + static_cast<std::uint64_t>(t);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(key, build(s, dvec, t)).first;
            const CacheEntry& e = it->second;
            const int cls = static_cast<int>(e.count - lo);
            if (cls < 0 || cls >= ncls)
                throw Error("induced_load: pseudo-path count outside [(p-2)C^{g+1}, (p-1)C^{g+1}]");
            for (const auto& rec : e.recs) {
                std::uint64_t tail0 = ix.add(a0, rec.delta);
                std::size_t slot =
                    ((tail0 * static_cast<std::uint64_t>(t_period) + static_cast<std::uint64_t>(rec.k)) *
                         static_cast<std::uint64_t>(g + 1) +
                     static_cast<std::uint64_t>(rec.q)) *
                        static_cast<std::uint64_t>(ncls) +
                    static_cast<std::uint64_t>(cls);
                ++tally[slot];
            }
            max_latency = std::max(max_latency, e.max_end - t);
        }
    }

    OblivLoad out;
    out.load = LoadMap(n, t_period);
    out.hop_flow.assign(static_cast<std::size_t>(g + 1), LoadMap(n, t_period));
    out.max_latency = max_latency;

    std::vector<Rat> weight(static_cast<std::size_t>(ncls));
    for (int c = 0; c < ncls; ++c) weight[static_cast<std::size_t>(c)] = d.rate / Rat(lo + c);

    for (std::uint64_t tail0 = 0; tail0 < n; ++tail0) {
        const std::uint64_t tail_vis = s.from_base(tail0);
        for (long k = 0; k < t_period; ++k) {
            for (int q = 0; q <= g; ++q) {
                for (int c = 0; c < ncls; ++c) {
                    std::size_t slot = ((tail0 * static_cast<std::uint64_t>(t_period) + static_cast<std::uint64_t>(k)) *
                                            static_cast<std::uint64_t>(g + 1) +
                                        static_cast<std::uint64_t>(q)) *
                                           static_cast<std::uint64_t>(ncls) +
                                       static_cast<std::uint64_t>(c);
                    std::int64_t m = tally[slot];
                    if (m == 0) continue;
                    Rat w = Rat(m) * weight[static_cast<std::size_t>(c)];
                    out.hop_flow[static_cast<std::size_t>(q)].at(tail_vis, k) += w;
                    out.load.at(tail_vis, k) += w;
                }
            }
        }
    }
    return out;
}

}  // namespace

std::vector<PseudoPath> enumerate_pseudopaths(const OrnSchedule& s, std::uint64_t a, std::uint64_t b, long t) {
    const std::uint64_t a0 = s.to_base(a), b0 = s.to_base(b);
    const NodeIndexer ix{s.p(), s.g()};
    const NodeVec d = index_to_node(ix.sub(b0, a0), s.p(), s.g());
    const long blk0 = next_multiple(t, s.block_len()) / s.block_len();
    std::vector<NodeVec> dirs;
    for (int x = 0; x < s.num_phases(); ++x) dirs.push_back(s.phase_vector(x));
    auto raw = enumerate_raw(dirs, orn_block_lo(s, blk0), s.C(), d, s.p(), s.g());
    std::vector<PseudoPath> out;
    out.reserve(raw.size());
    for (auto& rp : raw) out.push_back({a, b, t, blk0, std::move(rp.hops)});
    return out;
}

std::vector<PseudoPath> enumerate_pseudopaths(const SornSchedule& s, std::uint64_t a, std::uint64_t b, long t) {
    const std::uint64_t a0 = s.to_base(a), b0 = s.to_base(b);
    const NodeIndexer ix{s.p(), s.g()};
    const NodeVec d = index_to_node(ix.sub(b0, a0), s.p(), s.g());
    const long phi0 = next_multiple(t, s.frame_len()) / s.frame_len();
    const long f = phi0 % s.num_frames();
    std::vector<NodeVec> dirs;
    for (int x = 0; x < s.num_phases(); ++x) dirs.push_back(s.frame_vector(f, x));
    auto raw = enumerate_raw(dirs, sorn_block_lo(s), s.C(), d, s.p(), s.g());
    std::vector<PseudoPath> out;
    out.reserve(raw.size());
    for (auto& rp : raw) out.push_back({a, b, t, phi0, std::move(rp.hops)});
    return out;
}

RoutePath realize(const OrnSchedule& s, const PseudoPath& pp) {
    RoutePath rp;
    rp.start = pp.start;
    rp.end = pp.start;
    NodeVec cur = index_to_node(s.to_base(pp.src), s.p(), s.g());
    for (int i = 1; i <= static_cast<int>(pp.hops.size()); ++i) {
        const auto& h = pp.hops[static_cast<std::size_t>(i - 1)];
        if (h.alpha == 0) continue;
        long ht = orn_hop_time(s, pp.first_block, i, h.x, h.alpha);
        rp.phys.push_back({s.from_base(node_to_index(cur)), ht});
        cur = add(cur, scale(h.alpha, s.phase_vector(h.x)));
        rp.end = ht + 1;
    }
    return rp;
}

RoutePath realize(const SornSchedule& s, const PseudoPath& pp) {
    RoutePath rp;
    rp.start = pp.start;
    rp.end = pp.start;
    const long f = pp.first_block % s.num_frames();
    NodeVec cur = index_to_node(s.to_base(pp.src), s.p(), s.g());
    for (int i = 1; i <= static_cast<int>(pp.hops.size()); ++i) {
        const auto& h = pp.hops[static_cast<std::size_t>(i - 1)];
        if (h.alpha == 0) continue;
        long ht = sorn_hop_time(s, pp.first_block, h.x, h.alpha);
        rp.phys.push_back({s.from_base(node_to_index(cur)), ht});
        cur = add(cur, scale(h.alpha, s.frame_vector(f, h.x)));
        rp.end = ht + 1;
    }
    return rp;
}

long pseudopath_count_rho(const OrnSchedule& s, RhoKind kind, int q, std::uint64_t node, PhysEdge e) {
    if (q < 0 || q > s.g()) throw Error("pseudopath_count_rho: q outside [0, g]");
    const std::uint64_t p = s.p();
    const NodeIndexer ix{p, s.g()};
    const std::uint64_t tail0 = s.to_base(e.tail);
    const std::uint64_t head0 = s.to_base(s.perm(e.k, e.tail));
    const std::uint64_t node0 = s.to_base(node);

    if (q == 0) {
        if (kind == RhoKind::Minus) return node0 == tail0 ? 1 : 0;
        return node0 == head0 ? 1 : 0;
    }

    // place e one period in so preceding blocks are non-negative
    const long abs_e = e.k + s.period();
    const long blk_e = abs_e / s.block_len();

    NodeVec d;
    std::vector<int> blocks;
    if (kind == RhoKind::Minus) {
        d = index_to_node(ix.sub(tail0, node0), p, s.g());
        for (int i = 0; i < q; ++i)
            blocks.push_back(static_cast<int>((blk_e - q + i) % (s.g() + 1)) * s.C());
    } else {
        d = index_to_node(ix.sub(node0, head0), p, s.g());
        for (int i = 0; i < q; ++i)
            blocks.push_back(static_cast<int>((blk_e + 1 + i) % (s.g() + 1)) * s.C());
    }

    // exhaustive over phase tuples and coefficient tuples
    long count = 0;
    std::vector<int> off(static_cast<std::size_t>(q), 0);
    std::vector<std::uint64_t> alpha(static_cast<std::size_t>(q), 0);
    while (true) {
        std::fill(alpha.begin(), alpha.end(), 0);
        while (true) {
            bool ok = kind == RhoKind::Minus ? alpha[0] != 0 : alpha.back() != 0;
            if (ok) {
                NodeVec sum = make_node(std::vector<std::uint64_t>(static_cast<std::size_t>(s.g()), 0), p);
                for (int i = 0; i < q; ++i)
                    sum = add(sum, scale(alpha[static_cast<std::size_t>(i)],
                                         s.phase_vector(blocks[static_cast<std::size_t>(i)] + off[static_cast<std::size_t>(i)])));
                if (node_to_index(sum) == node_to_index(d)) ++count;
            }
            int i = q - 1;
            while (i >= 0 && alpha[static_cast<std::size_t>(i)] == p - 1) {
                alpha[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
            ++alpha[static_cast<std::size_t>(i)];
        }
        int i = q - 1;
        while (i >= 0 && off[static_cast<std::size_t>(i)] == s.C() - 1) {
            off[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++off[static_cast<std::size_t>(i)];
    }
    return count;
}

long pseudopath_count_full(const OrnSchedule& s, std::uint64_t i, std::uint64_t j, long t) {
    return static_cast<long>(enumerate_pseudopaths(s, i, j, t).size());
}

PermDemand make_perm_demand(Permutation sigma, Rat rate) {
    PermDemand d{std::move(sigma), std::move(rate)};
    return d;
}

PermDemand random_perm_demand(std::uint64_t n, Rat rate, std::uint64_t seed) {
    Rng rng(seed);
    return {rng.permutation(n), std::move(rate)};
}

OblivLoad induced_load_oblivious(const OrnSchedule& s, const PermDemand& d) {
    return accumulate_oblivious(s, d, build_entry_orn);
}

OblivLoad induced_load_oblivious(const SornSchedule& s, const PermDemand& d) {
    return accumulate_oblivious(s, d, build_entry_sorn);
}

std::vector<Rat> hop_flow_decomposition(const OrnSchedule& s, const PermDemand& d, PhysEdge e) {
    OblivLoad full = induced_load_oblivious(s, d);
    std::vector<Rat> out;
    for (const auto& hf : full.hop_flow) out.push_back(hf.at(e.tail, e.k));
    return out;
}

std::vector<Rat> hop_flow_decomposition(const SornSchedule& s, const PermDemand& d, PhysEdge e) {
    OblivLoad full = induced_load_oblivious(s, d);
    std::vector<Rat> out;
    for (const auto& hf : full.hop_flow) out.push_back(hf.at(e.tail, e.k));
    return out;
}

namespace {

long family_index(const SornSchedule& s, const std::vector<std::uint64_t>& diag) {
    long f = 0;
    for (int i = 1; i < s.g(); ++i) f = f * static_cast<long>(s.p() - 1) + static_cast<long>(diag[static_cast<std::size_t>(i)] - 1);
    return f;
}

}  // namespace

std::vector<TwoHopOption> failover_paths(const SornSchedule& s, std::uint64_t a, std::uint64_t b) {
    const std::uint64_t p = s.p();
    const int g = s.g();
    const PrimeField field(p);
    const NodeIndexer ix{p, g};
    const std::uint64_t a0 = s.to_base(a), b0 = s.to_base(b);
    const int cg1 = s.num_phases();

    std::vector<TwoHopOption> out;
    for (std::uint64_t mid0 = 0; mid0 < s.node_count(); ++mid0) {
        const NodeVec d1 = index_to_node(ix.sub(mid0, a0), p, g);
        const NodeVec d2 = index_to_node(ix.sub(b0, mid0), p, g);
        if (!all_nonzero(d1) || !all_nonzero(d2)) continue;
        for (int va = 0; va < cg1; ++va) {
            // unique (frame, scale) with d = s A v: first diagonal entry is 1
            const NodeVec& v1 = s.base_constellation().vectors[static_cast<std::size_t>(va)];
            std::uint64_t sa = field.mul(d1[0].v, field.inv(v1[0].v));
            std::vector<std::uint64_t> diag_a(static_cast<std::size_t>(g));
            for (int i = 0; i < g; ++i)
                diag_a[static_cast<std::size_t>(i)] = field.mul(d1[static_cast<std::size_t>(i)].v,
                                                                field.inv(field.mul(sa, v1[static_cast<std::size_t>(i)].v)));
            long fa = family_index(s, diag_a);
            long k1 = fa * s.frame_len() + static_cast<long>(p - 1) * va + static_cast<long>(sa) - 1;
            for (int vb = 0; vb < cg1; ++vb) {
                const NodeVec& v2 = s.base_constellation().vectors[static_cast<std::size_t>(vb)];
                std::uint64_t sb = field.mul(d2[0].v, field.inv(v2[0].v));
                std::vector<std::uint64_t> diag_b(static_cast<std::size_t>(g));
                for (int i = 0; i < g; ++i)
                    diag_b[static_cast<std::size_t>(i)] = field.mul(d2[static_cast<std::size_t>(i)].v,
                                                                    field.inv(field.mul(sb, v2[static_cast<std::size_t>(i)].v)));
                long fb = family_index(s, diag_b);
                long k2 = fb * s.frame_len() + static_cast<long>(p - 1) * vb + static_cast<long>(sb) - 1;
                out.push_back({s.from_base(mid0), va, vb, fa, fb, sa, sb, k1, k2});
            }
        }
    }
    if (out.empty()) throw NoIntermediate("failover_paths: no valid intermediate node (p too small)");
    return out;
}

FailoverLoad induced_load_failover(const SornSchedule& s, const PermDemand& d) {
    const std::uint64_t n = s.node_count();
    validate_demand(d, n);
    const long t_period = s.period();
    const long w_frame = s.frame_len();

    FailoverLoad out;
    out.load = LoadMap(n, t_period);
    out.hop1 = LoadMap(n, t_period);
    out.hop2 = LoadMap(n, t_period);

    for (std::uint64_t a = 0; a < n; ++a) {
        const std::uint64_t b = d.sigma[a];
        auto options = failover_paths(s, a, b);
        // each start contributes rate/|options| per option; the hop timestep
        // classes do not depend on the start, so the T starts fold into one factor
        const Rat w = d.rate * Rat(t_period) / Rat(static_cast<long>(options.size()));
        for (const auto& opt : options) {
            out.hop1.at(a, opt.k1) += w;
            out.hop2.at(opt.mid, opt.k2) += w;
            out.load.at(a, opt.k1) += w;
            out.load.at(opt.mid, opt.k2) += w;
        }
        // exact max latency: every boundary residue is reachable with the
        // worst wait W-1, so maximize the second-hop offset over boundaries
        long worst_pos2 = 0;
        for (long f = 0; f < s.num_frames(); ++f) {
            long b = f * w_frame;
            for (const auto& opt : options) worst_pos2 = std::max(worst_pos2, mod_t(opt.k2 - b, t_period));
        }
        out.max_latency = std::max(out.max_latency, (w_frame - 1) + t_period + worst_pos2 + 1);
    }
    return out;
}

RoutingDecision semi_oblivious_route(const SornSchedule& s, const PermDemand& d) {
    OblivLoad primary = induced_load_oblivious(s, d);
    std::vector<PhysEdge> over;
    for (std::uint64_t tail = 0; tail < primary.load.N; ++tail)
        for (long k = 0; k < primary.load.T; ++k)
            if (primary.load.at(tail, k) > 1) over.push_back({tail, k});

    if (over.empty()) return {RouteMode::GPlusOneHop, std::move(primary.load), {}, primary.max_latency};

    FailoverLoad fallback = induced_load_failover(s, d);
    return {RouteMode::TwoHopFailover, std::move(fallback.load), std::move(over), fallback.max_latency};
}

ContentiousReport contentious_constellations(const SornSchedule& s, const PermDemand& d) {
    ContentiousReport rep;
    if (d.rate == 0) {
        rep.k_max = 0;
        rep.threshold = 0;
        return rep;
    }
    const int g = s.g();
    const Rat eps = Rat(g + 2) - Rat(1) / d.rate;
    const Rat delta = (Rat(1) - eps) / Rat(2 * (g + 1));
    rep.threshold = (Rat(1) + delta) * Rat(g + 1) * d.rate;

    const Rat k_budget = (Rat(1) - eps) * Rat(bigint_pow(BigInt(s.p() - 2), static_cast<unsigned>(g))) /
                         Rat(4 * static_cast<long>(s.p() - 1));
    BigInt num = numerator(k_budget), den = denominator(k_budget);
    BigInt fl;
    if (num >= 0) {
        fl = num / den;
    } else {
        fl = -((-num + den - 1) / den);
    }
    rep.k_max = fl.convert_to<long>();

    OblivLoad primary = induced_load_oblivious(s, d);
    std::vector<bool> marked(static_cast<std::size_t>(s.num_frames()), false);
    for (std::uint64_t tail = 0; tail < primary.load.N; ++tail)
        for (long k = 0; k < primary.load.T; ++k)
            if (primary.load.at(tail, k) > rep.threshold) marked[static_cast<std::size_t>(k / s.frame_len())] = true;
    for (long f = 0; f < s.num_frames(); ++f)
        if (marked[static_cast<std::size_t>(f)]) rep.contentious.push_back(f);
    return rep;
}

LoadMap mixed_load(const SornSchedule& s, const PermDemand& d, const std::vector<long>& contentious) {
    const std::uint64_t n = s.node_count();
    validate_demand(d, n);
    const long t_period = s.period();
    const long w_frame = s.frame_len();
    const NodeIndexer ix{s.p(), s.g()};

    std::vector<bool> is_cont(static_cast<std::size_t>(s.num_frames()), false);
    for (long f : contentious) is_cont[static_cast<std::size_t>(f)] = true;

    LoadMap out(n, t_period);
    std::unordered_map<std::uint64_t, CacheEntry> cache;
    std::vector<std::vector<TwoHopOption>> options(n);

    for (std::uint64_t a0 = 0; a0 < n; ++a0) {
        const std::uint64_t a_vis = s.from_base(a0);
        const std::uint64_t b0 = s.to_base(d.sigma[a_vis]);
        const std::uint64_t diff = ix.sub(b0, a0);
        const NodeVec dvec = index_to_node(diff, s.p(), s.g());
        for (long t = 0; t < t_period; ++t) {
            const long phi0 = next_multiple(t, w_frame) / w_frame;
            const long f = phi0 % s.num_frames();
            if (is_cont[static_cast<std::size_t>(f)]) {
                auto& opts = options[a_vis];
                if (opts.empty()) opts = failover_paths(s, a_vis, d.sigma[a_vis]);
                const Rat w = d.rate / Rat(static_cast<long>(opts.size()));
                for (const auto& opt : opts) {
                    out.at(a_vis, opt.k1) += w;
                    out.at(opt.mid, opt.k2) += w;
                }
            } else {
                std::uint64_t key = diff * static_cast<std::uint64_t>(t_period) + static_cast<std::uint64_t>(t);
                auto it = cache.find(key);
                if (it == cache.end()) it = cache.emplace(key, build_entry_sorn(s, dvec, t)).first;
                const CacheEntry& e = it->second;
                const Rat w = d.rate / Rat(e.count);
                for (const auto& rec : e.recs) out.at(s.from_base(ix.add(a0, rec.delta)), rec.k) += w;
            }
        }
    }
    return out;
}

bool is_feasible(const LoadMap& load) {
    for (const auto& x : load.v)
        if (x > 1) return false;
    return true;
}

MaxLoad max_load(const LoadMap& load) {
    MaxLoad m{Rat(0), {0, 0}};
    for (std::uint64_t tail = 0; tail < load.N; ++tail)
        for (long k = 0; k < load.T; ++k)
            if (load.at(tail, k) > m.value) m = {load.at(tail, k), {tail, k}};
    return m;
}

long orn_primary_latency_bound(const OrnSchedule& s) {
    return static_cast<long>(s.C()) * (s.g() + 2) * static_cast<long>(s.p() - 1);
}

long sorn_primary_latency_bound(const SornSchedule& s) { return 2 * s.frame_len(); }

long sorn_failover_latency_bound(const SornSchedule& s) { return 2 * s.period() + s.frame_len(); }

}  // namespace ornlab
