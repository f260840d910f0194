#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ornlab/ff.hpp"

namespace ornlab {

/// Timestep identity within one round-robin schedule period:
/// k = (p-1)x + s - 1 with phase x and scale s.
struct TimestepOrn {
    int x = 0;           // phase number in [0, C(g+1))
    std::uint64_t s = 1; // scale factor in [1, p)
    long k = 0;          // congruence class mod T
};

/// Timestep identity with a rotating constellation:
/// k = C(g+1)(p-1) f + (p-1) x + s - 1.
struct TimestepSorn {
    long f = 0;          // constellation number in [0, (p-1)^{g-1})
    int x = 0;           // phase in [0, C(g+1))
    std::uint64_t s = 1; // scale in [1, p)
    long k = 0;
};

using Permutation = std::vector<std::uint32_t>;

/// Round-robin schedule over F_p^g with period T = C(g+1)(p-1); phase x uses
/// the direction vector v(x) = (1, x, ..., x^{g-1}). Optionally composed with
/// a node relabeling tau.
class OrnSchedule {
public:
    OrnSchedule(std::uint64_t p, int g, int C, std::optional<Permutation> relabel = std::nullopt);

    std::uint64_t p() const { return p_; }
    int g() const { return g_; }
    int C() const { return c_; }
    std::uint64_t node_count() const { return n_; }
    long period() const { return t_; }
    long block_len() const { return static_cast<long>(c_) * static_cast<long>(p_ - 1); }
    int num_phases() const { return c_ * (g_ + 1); }

    /// Direction vector of phase x.
    const NodeVec& phase_vector(int x) const { return phase_vecs_[static_cast<std::size_t>(x)]; }
    const std::vector<int>& phase_ids() const { return phase_ids_; }

    std::uint64_t perm(long k, std::uint64_t a) const;
    std::uint64_t perm_inv(long k, std::uint64_t b) const;

    const std::optional<Permutation>& relabel() const { return tau_; }
    std::uint64_t to_base(std::uint64_t a) const { return tau_ ? (*tau_)[a] : a; }
    std::uint64_t from_base(std::uint64_t a) const { return tau_inv_ ? (*tau_inv_)[a] : a; }

private:
    std::uint64_t p_;
    int g_;
    int c_;
    std::uint64_t n_;
    long t_;
    std::vector<int> phase_ids_;
    std::vector<NodeVec> phase_vecs_;
    std::optional<Permutation> tau_, tau_inv_;
};

/// Constellation-rotating schedule: period T = (p-1)^g C(g+1); frame f twists
/// the base constellation (Vandermonde vectors excluding (1,0,...,0)) by the
/// f-th member of the diagonal family.
class SornSchedule {
public:
    SornSchedule(std::uint64_t p, int g, int C, std::optional<Permutation> relabel = std::nullopt);

    std::uint64_t p() const { return p_; }
    int g() const { return g_; }
    int C() const { return c_; }
    std::uint64_t node_count() const { return n_; }
    long period() const { return t_; }
    long frame_len() const { return static_cast<long>(c_) * (g_ + 1) * static_cast<long>(p_ - 1); }
    long num_frames() const { return frames_; }
    long block_len() const { return static_cast<long>(c_) * static_cast<long>(p_ - 1); }
    int num_phases() const { return c_ * (g_ + 1); }

    const Constellation& base_constellation() const { return base_; }
    const std::vector<DiagMatrix>& family() const { return family_; }
    /// Direction vector used at frame f, phase x: A_f v_x.
    const NodeVec& frame_vector(long f, int x) const {
        return frame_vecs_[static_cast<std::size_t>(f)][static_cast<std::size_t>(x)];
    }

    std::uint64_t perm(long k, std::uint64_t a) const;
    std::uint64_t perm_inv(long k, std::uint64_t b) const;

    const std::optional<Permutation>& relabel() const { return tau_; }
    std::uint64_t to_base(std::uint64_t a) const { return tau_ ? (*tau_)[a] : a; }
    std::uint64_t from_base(std::uint64_t a) const { return tau_inv_ ? (*tau_inv_)[a] : a; }

private:
    std::uint64_t p_;
    int g_;
    int c_;
    std::uint64_t n_;
    long t_, frames_;
    Constellation base_;
    std::vector<DiagMatrix> family_;
    std::vector<std::vector<NodeVec>> frame_vecs_;
    std::optional<Permutation> tau_, tau_inv_;
};

using Schedule = std::variant<OrnSchedule, SornSchedule>;

std::uint64_t sched_nodes(const Schedule& s);
long sched_period(const Schedule& s);
std::uint64_t sched_perm(const Schedule& s, long k, std::uint64_t a);
std::uint64_t sched_perm_inv(const Schedule& s, long k, std::uint64_t b);

TimestepOrn decompose_orn(long k, std::uint64_t p, int g, int C);
long compose_orn(const TimestepOrn& ts, std::uint64_t p);
TimestepSorn decompose_sorn(long k, std::uint64_t p, int g, int C);
long compose_sorn(const TimestepSorn& ts, std::uint64_t p, int g, int C);

/// One representative per scalar-multiple class of invertible diagonal
/// matrices: first diagonal entry 1, remaining entries in lexicographic order.
std::vector<DiagMatrix> diagonal_family(std::uint64_t p, int g);

/// First block whose start is >= t (a start exactly at a boundary counts).
inline long next_multiple(long t, long unit) { return (t + unit - 1) / unit * unit; }

/// Physical edge identified by (tail, timestep class); head = pi_k(tail).
struct PhysEdge {
    std::uint64_t tail = 0;
    long k = 0;

    friend bool operator==(const PhysEdge&, const PhysEdge&) = default;
};

/// Nodes reachable from (a, t0) within L timesteps using at most h physical
/// hops, excluding a itself. BFS deduplicates (node, hops) states per layer.
std::vector<std::uint64_t> reachable_set(const Schedule& s, std::uint64_t a, long t0, long L, int h);

struct VtEdge {
    std::uint64_t tail = 0;
    long t = 0;
    bool physical = false;
    std::uint64_t head = 0;
};

inline constexpr long kDefaultWindowCap = 1 << 16;

/// Edges of the virtual topology for t in [t0, t0+len); throws WindowTooLarge
/// beyond the cap.
std::vector<VtEdge> virtual_topology_edges(const Schedule& s, long t0, long len,
                                           long cap = kDefaultWindowCap);

std::string schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const std::string& text);

}  // namespace ornlab
