#include "ornlab/schedule.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace ornlab {

namespace {

std::optional<Permutation> invert(const std::optional<Permutation>& tau, std::uint64_t n) {
    if (!tau) return std::nullopt;
    if (tau->size() != n) throw Error("relabel: permutation size != N");
    Permutation inv(n, 0);
    std::vector<bool> seen(n, false);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint32_t j = (*tau)[i];
        if (j >= n || seen[j]) throw Error("relabel: not a permutation");
        seen[j] = true;
        inv[j] = static_cast<std::uint32_t>(i);
    }
    return inv;
}

long mod_period(long k, long t) { return ((k % t) + t) % t; }

}  // namespace

OrnSchedule::OrnSchedule(std::uint64_t p, int g, int C, std::optional<Permutation> relabel)
    : p_(p), g_(g), c_(C) {
    if (g < 1) throw UnsupportedDesign("OrnSchedule: g must be >= 1");
    if (C < 1) throw UnsupportedDesign("OrnSchedule: C must be >= 1");
    PrimeField field(p);
    if (p < static_cast<std::uint64_t>(C) * (g + 1))
        throw UnsupportedDesign("OrnSchedule: p >= C(g+1) required for distinct phase vectors");
    n_ = pow_u64(p, static_cast<unsigned>(g));
    t_ = static_cast<long>(C) * (g + 1) * static_cast<long>(p - 1);
    for (int x = 0; x < C * (g + 1); ++x) {
        phase_ids_.push_back(x);
        phase_vecs_.push_back(vandermonde(Fp(static_cast<std::uint64_t>(x), p), g));
    }
    tau_ = std::move(relabel);
    tau_inv_ = invert(tau_, n_);
}

std::uint64_t OrnSchedule::perm(long k, std::uint64_t a) const {
    TimestepOrn ts = decompose_orn(mod_period(k, t_), p_, g_, c_);
    std::uint64_t a0 = to_base(a);
    NodeVec v = index_to_node(a0, p_, g_);
    std::uint64_t b0 = node_to_index(add(v, scale(ts.s, phase_vector(ts.x))));
    return from_base(b0);
}

std::uint64_t OrnSchedule::perm_inv(long k, std::uint64_t b) const {
    TimestepOrn ts = decompose_orn(mod_period(k, t_), p_, g_, c_);
    std::uint64_t b0 = to_base(b);
    NodeVec v = index_to_node(b0, p_, g_);
    std::uint64_t a0 = node_to_index(sub(v, scale(ts.s, phase_vector(ts.x))));
    return from_base(a0);
}

SornSchedule::SornSchedule(std::uint64_t p, int g, int C, std::optional<Permutation> relabel)
    : p_(p), g_(g), c_(C) {
    if (g < 2) throw UnsupportedDesign("SornSchedule: g >= 2 required");
    if (C < 1) throw UnsupportedDesign("SornSchedule: C must be >= 1");
    PrimeField field(p);
    // v(0) = (1,0,...,0) is excluded, so C(g+1) distinct non-zero phases must fit.
    if (p <= static_cast<std::uint64_t>(C) * (g + 1))
        throw UnsupportedDesign("SornSchedule: p > C(g+1) required (phase x = 0 excluded)");
    n_ = pow_u64(p, static_cast<unsigned>(g));
    frames_ = static_cast<long>(pow_u64(p - 1, static_cast<unsigned>(g - 1)));
    t_ = frames_ * frame_len();

    base_.block_size = C;
    for (int x = 1; x <= C * (g + 1); ++x)
        base_.vectors.push_back(vandermonde(Fp(static_cast<std::uint64_t>(x), p), g));

    family_ = diagonal_family(p, g);
    frame_vecs_.resize(static_cast<std::size_t>(frames_));
    for (long f = 0; f < frames_; ++f) {
        auto& vecs = frame_vecs_[static_cast<std::size_t>(f)];
        for (const auto& v : base_.vectors)
            vecs.push_back(apply_diag(family_[static_cast<std::size_t>(f)], v));
    }

    tau_ = std::move(relabel);
    tau_inv_ = invert(tau_, n_);
}

std::uint64_t SornSchedule::perm(long k, std::uint64_t a) const {
    TimestepSorn ts = decompose_sorn(mod_period(k, t_), p_, g_, c_);
    std::uint64_t a0 = to_base(a);
    NodeVec v = index_to_node(a0, p_, g_);
    std::uint64_t b0 = node_to_index(add(v, scale(ts.s, frame_vector(ts.f, ts.x))));
    return from_base(b0);
}

std::uint64_t SornSchedule::perm_inv(long k, std::uint64_t b) const {
    TimestepSorn ts = decompose_sorn(mod_period(k, t_), p_, g_, c_);
    std::uint64_t b0 = to_base(b);
    NodeVec v = index_to_node(b0, p_, g_);
    std::uint64_t a0 = node_to_index(sub(v, scale(ts.s, frame_vector(ts.f, ts.x))));
    return from_base(a0);
}

std::uint64_t sched_nodes(const Schedule& s) {
    return std::visit([](const auto& x) { return x.node_count(); }, s);
}

long sched_period(const Schedule& s) {
    return std::visit([](const auto& x) { return x.period(); }, s);
}

std::uint64_t sched_perm(const Schedule& s, long k, std::uint64_t a) {
    return std::visit([&](const auto& x) { return x.perm(k, a); }, s);
}

std::uint64_t sched_perm_inv(const Schedule& s, long k, std::uint64_t b) {
    return std::visit([&](const auto& x) { return x.perm_inv(k, b); }, s);
}

TimestepOrn decompose_orn(long k, std::uint64_t p, int g, int C) {
    long t = static_cast<long>(C) * (g + 1) * static_cast<long>(p - 1);
    if (k < 0 || k >= t) throw OutOfPeriod("decompose_orn: k outside [0, T)");
    TimestepOrn ts;
    ts.k = k;
    ts.x = static_cast<int>(k / static_cast<long>(p - 1));
    ts.s = static_cast<std::uint64_t>(k % static_cast<long>(p - 1)) + 1;
    return ts;
}

long compose_orn(const TimestepOrn& ts, std::uint64_t p) {
    return static_cast<long>(p - 1) * ts.x + static_cast<long>(ts.s) - 1;
}

TimestepSorn decompose_sorn(long k, std::uint64_t p, int g, int C) {
    long w = static_cast<long>(C) * (g + 1) * static_cast<long>(p - 1);
    long frames = static_cast<long>(pow_u64(p - 1, static_cast<unsigned>(g - 1)));
    if (k < 0 || k >= frames * w) throw OutOfPeriod("decompose_sorn: k outside [0, T)");
    TimestepSorn ts;
    ts.k = k;
    ts.f = k / w;
    long rem = k % w;
    ts.x = static_cast<int>(rem / static_cast<long>(p - 1));
    ts.s = static_cast<std::uint64_t>(rem % static_cast<long>(p - 1)) + 1;
    return ts;
}

long compose_sorn(const TimestepSorn& ts, std::uint64_t p, int g, int C) {
    long w = static_cast<long>(C) * (g + 1) * static_cast<long>(p - 1);
    return w * ts.f + static_cast<long>(p - 1) * ts.x + static_cast<long>(ts.s) - 1;
}

std::vector<DiagMatrix> diagonal_family(std::uint64_t p, int g) {
    PrimeField field(p);
    std::vector<DiagMatrix> out;
    std::vector<std::uint64_t> entries(static_cast<std::size_t>(g), 1);
    // odometer over entries 2..g, each in [1, p-1], first entry pinned to 1
    while (true) {
        out.push_back(make_diag(entries, p));
        int i = g - 1;
        while (i >= 1 && entries[static_cast<std::size_t>(i)] == p - 1) {
            entries[static_cast<std::size_t>(i)] = 1;
            --i;
        }
        if (i < 1) break;
        ++entries[static_cast<std::size_t>(i)];
    }
    return out;
}

std::vector<std::uint64_t> reachable_set(const Schedule& s, std::uint64_t a, long t0, long L, int h) {
    const std::uint64_t n = sched_nodes(s);
    // frontier of (node, hops used) states for the current time layer
    std::vector<std::uint8_t> cur(n * static_cast<std::uint64_t>(h + 1), 0);
    std::vector<std::uint8_t> nxt(n * static_cast<std::uint64_t>(h + 1), 0);
    std::vector<bool> reached(n, false);
    cur[a * static_cast<std::uint64_t>(h + 1)] = 1;

    for (long step = 0; step < L; ++step) {
        std::fill(nxt.begin(), nxt.end(), 0);
        long t = t0 + step;
        for (std::uint64_t node = 0; node < n; ++node) {
            for (int used = 0; used <= h; ++used) {
                if (!cur[node * static_cast<std::uint64_t>(h + 1) + static_cast<std::uint64_t>(used)])
                    continue;
                nxt[node * static_cast<std::uint64_t>(h + 1) + static_cast<std::uint64_t>(used)] = 1;
                if (used < h) {
                    std::uint64_t head = sched_perm(s, t, node);
                    nxt[head * static_cast<std::uint64_t>(h + 1) + static_cast<std::uint64_t>(used + 1)] = 1;
                    reached[head] = true;
                }
            }
        }
        std::swap(cur, nxt);
    }

    std::vector<std::uint64_t> out;
    for (std::uint64_t node = 0; node < n; ++node)
        if (reached[node] && node != a) out.push_back(node);
    return out;
}

std::vector<VtEdge> virtual_topology_edges(const Schedule& s, long t0, long len, long cap) {
    if (len > cap) throw WindowTooLarge("virtual_topology_edges: window exceeds cap");
    const std::uint64_t n = sched_nodes(s);
    std::vector<VtEdge> out;
    out.reserve(static_cast<std::size_t>(len) * n * 2);
    for (long t = t0; t < t0 + len; ++t) {
        for (std::uint64_t node = 0; node < n; ++node) {
            out.push_back({node, t, false, node});
            out.push_back({node, t, true, sched_perm(s, t, node)});
        }
    }
    return out;
}

std::string schedule_to_json(const Schedule& s) {
    nlohmann::json j;
    if (const auto* orn = std::get_if<OrnSchedule>(&s)) {
        j["kind"] = "orn";
        j["p"] = orn->p();
        j["g"] = orn->g();
        j["C"] = orn->C();
        j["phases"] = orn->phase_ids();
        if (orn->relabel())
            j["tau"] = *orn->relabel();
        else
            j["tau"] = nullptr;
    } else {
        const auto& sorn = std::get<SornSchedule>(s);
        j["kind"] = "sorn";
        j["p"] = sorn.p();
        j["g"] = sorn.g();
        j["C"] = sorn.C();
        std::vector<int> phases;
        for (int x = 1; x <= sorn.num_phases(); ++x) phases.push_back(x);
        j["phases"] = phases;
        std::vector<std::vector<std::uint64_t>> fam;
        for (const auto& m : sorn.family()) {
            std::vector<std::uint64_t> d;
            for (const auto& e : m.diag) d.push_back(e.v);
            fam.push_back(d);
        }
        j["family"] = fam;
        if (sorn.relabel())
            j["tau"] = *sorn.relabel();
        else
            j["tau"] = nullptr;
    }
    return j.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::string kind = j.at("kind");
    std::uint64_t p = j.at("p");
    int g = j.at("g");
    int c = j.at("C");
    std::optional<Permutation> tau;
    if (j.contains("tau") && !j.at("tau").is_null()) tau = j.at("tau").get<Permutation>();
    if (kind == "orn") {
        OrnSchedule s(p, g, c, tau);
        if (j.contains("phases") && j.at("phases").get<std::vector<int>>() != s.phase_ids())
            throw Error("schedule_from_json: unexpected phase list for ORN family");
        return s;
    }
    if (kind == "sorn") {
        SornSchedule s(p, g, c, tau);
        if (j.contains("family")) {
            auto fam = j.at("family").get<std::vector<std::vector<std::uint64_t>>>();
            if (fam.size() != s.family().size())
                throw Error("schedule_from_json: unexpected family size for SORN");
            for (std::size_t i = 0; i < fam.size(); ++i)
                for (std::size_t d = 0; d < fam[i].size(); ++d)
                    if (fam[i][d] != s.family()[i].diag[d].v)
                        throw Error("schedule_from_json: unexpected family order for SORN");
        }
        return s;
    }
    throw Error("schedule_from_json: unknown kind " + kind);
}

}  // namespace ornlab
