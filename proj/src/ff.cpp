#include "ornlab/ff.hpp"

#include <array>
#include <cstddef>

namespace ornlab {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
    if (!is_prime(p)) throw Error("PrimeField: modulus " + std::to_string(p) + " is not prime");
}

std::uint64_t PrimeField::inv(std::uint64_t a) const {
    if (a == 0) throw Error("PrimeField: inverse of zero");
    // extended Euclid on (a, p)
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p_), new_r = static_cast<std::int64_t>(a % p_);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    if (t < 0) t += static_cast<std::int64_t>(p_);
    return static_cast<std::uint64_t>(t);
}

std::uint64_t PrimeField::pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t out = 1 % p_, base = a % p_;
    while (e) {
        if (e & 1) out = mul(out, base);
        base = mul(base, base);
        e >>= 1;
    }
    return out;
}

namespace {

void check_same_field(const Fp& a, const Fp& b) {
    if (a.p != b.p) throw Error("Fp: mixed moduli");
}

}  // namespace

Fp operator+(Fp a, Fp b) {
    check_same_field(a, b);
    return Fp((a.v + b.v) % a.p, a.p);
}

Fp operator-(Fp a, Fp b) {
    check_same_field(a, b);
    return Fp((a.v + a.p - b.v) % a.p, a.p);
}

Fp operator*(Fp a, Fp b) {
    check_same_field(a, b);
    return Fp(a.v * b.v % a.p, a.p);
}

Fp inv(Fp a) { return Fp(PrimeField(a.p).inv(a.v), a.p); }

NodeVec vandermonde(Fp x, int g) {
    NodeVec out(static_cast<std::size_t>(g));
    std::uint64_t pw = 1;
    for (int i = 0; i < g; ++i) {
        out[static_cast<std::size_t>(i)] = Fp(pw, x.p);
        pw = pw * x.v % x.p;
    }
    return out;
}

NodeVec make_node(const std::vector<std::uint64_t>& coords, std::uint64_t p) {
    NodeVec out;
    out.reserve(coords.size());
    for (auto c : coords) out.emplace_back(c, p);
    return out;
}

NodeVec add(const NodeVec& a, const NodeVec& b) {
    NodeVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

NodeVec sub(const NodeVec& a, const NodeVec& b) {
    NodeVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

NodeVec scale(std::uint64_t s, const NodeVec& v) {
    NodeVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Fp(s % v[i].p, v[i].p) * v[i];
    return out;
}

DiagMatrix make_diag(const std::vector<std::uint64_t>& entries, std::uint64_t p) {
    DiagMatrix m;
    m.diag.reserve(entries.size());
    for (auto e : entries) {
        if (e % p == 0) throw Error("DiagMatrix: zero diagonal entry");
        m.diag.emplace_back(e, p);
    }
    return m;
}

NodeVec apply_diag(const DiagMatrix& m, const NodeVec& v) {
    NodeVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = m.diag[i] * v[i];
    return out;
}

bool all_nonzero(const NodeVec& v) {
    for (const auto& c : v)
        if (c.v == 0) return false;
    return true;
}

std::vector<Fp> solve_coeffs(const std::vector<NodeVec>& basis, const NodeVec& target) {
    const std::size_t g = basis.size();
    if (g == 0 || basis[0].size() != g || target.size() != g)
        throw Error("solve_coeffs: need g vectors of dimension g");
    const std::uint64_t p = target[0].p;
    PrimeField field(p);

    // augmented matrix: columns are the basis vectors, last column the target
    std::vector<std::vector<std::uint64_t>> m(g, std::vector<std::uint64_t>(g + 1));
    for (std::size_t row = 0; row < g; ++row) {
        for (std::size_t col = 0; col < g; ++col) m[row][col] = basis[col][row].v;
        m[row][g] = target[row].v;
    }

    for (std::size_t col = 0; col < g; ++col) {
        std::size_t pivot = col;
        while (pivot < g && m[pivot][col] == 0) ++pivot;
        if (pivot == g) throw SingularBasis("solve_coeffs: dependent basis");
        std::swap(m[col], m[pivot]);
        std::uint64_t piv_inv = field.inv(m[col][col]);
        for (std::size_t j = col; j <= g; ++j) m[col][j] = field.mul(m[col][j], piv_inv);
        for (std::size_t row = 0; row < g; ++row) {
            if (row == col || m[row][col] == 0) continue;
            std::uint64_t f = m[row][col];
            for (std::size_t j = col; j <= g; ++j)
                m[row][j] = field.sub(m[row][j], field.mul(f, m[col][j]));
        }
    }

    std::vector<Fp> out(g);
    for (std::size_t i = 0; i < g; ++i) out[i] = Fp(m[i][g], p);
    return out;
}

namespace {

// Rank of g vectors of dimension g over F_p, on raw values. Kept tight: the
// exhaustive constellation checks run this billions of times.
bool full_rank(const std::vector<const NodeVec*>& vecs, std::uint64_t p, const PrimeField& field) {
    const std::size_t g = vecs.size();
    std::array<std::array<std::uint64_t, 8>, 8> m{};
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) m[i][j] = (*vecs[i])[j].v;

    for (std::size_t col = 0; col < g; ++col) {
        std::size_t pivot = col;
        while (pivot < g && m[pivot][col] == 0) ++pivot;
        if (pivot == g) return false;
        std::swap(m[col], m[pivot]);
        std::uint64_t piv_inv = field.inv(m[col][col]);
        for (std::size_t row = col + 1; row < g; ++row) {
            if (m[row][col] == 0) continue;
            std::uint64_t f = m[row][col] * piv_inv % p;
            for (std::size_t j = col; j < g; ++j)
                m[row][j] = (m[row][j] + p - f * m[col][j] % p) % p;
        }
    }
    return true;
}

}  // namespace

bool is_constellation(const std::vector<NodeVec>& vectors, int g) {
    if (g <= 0 || static_cast<std::size_t>(g) > 8) throw Error("is_constellation: g out of range");
    if (vectors.size() < static_cast<std::size_t>(g)) return false;
    const std::uint64_t p = vectors[0][0].p;
    PrimeField field(p);

    const std::size_t n = vectors.size();
    std::vector<std::size_t> pick(static_cast<std::size_t>(g));
    for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
    std::vector<const NodeVec*> sel(static_cast<std::size_t>(g));
    while (true) {
        for (std::size_t i = 0; i < pick.size(); ++i) sel[i] = &vectors[pick[i]];
        if (!full_rank(sel, p, field)) return false;
        // next combination
        std::size_t i = pick.size();
        while (i > 0 && pick[i - 1] == n - pick.size() + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
    }
    return true;
}

Constellation twist(const DiagMatrix& a, const Constellation& cons) {
    Constellation out;
    out.block_size = cons.block_size;
    out.vectors.reserve(cons.vectors.size());
    for (const auto& v : cons.vectors) out.vectors.push_back(apply_diag(a, v));
    return out;
}

std::uint64_t pow_u64(std::uint64_t base, unsigned exp) {
    std::uint64_t out = 1;
    for (unsigned i = 0; i < exp; ++i) out *= base;
    return out;
}

std::uint64_t node_to_index(const NodeVec& v) {
    std::uint64_t idx = 0, mul = 1;
    for (const auto& c : v) {
        idx += c.v * mul;
        mul *= c.p;
    }
    return idx;
}

NodeVec index_to_node(std::uint64_t i, std::uint64_t p, int g) {
    if (i >= pow_u64(p, static_cast<unsigned>(g))) throw IndexOutOfRange("index_to_node: index >= p^g");
    NodeVec out(static_cast<std::size_t>(g));
    for (int d = 0; d < g; ++d) {
        out[static_cast<std::size_t>(d)] = Fp(i % p, p);
        i /= p;
    }
    return out;
}

}  // namespace ornlab
