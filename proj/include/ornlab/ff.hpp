#pragma once

#include <cstdint>
#include <vector>

#include "ornlab/errors.hpp"

namespace ornlab {

/// Prime modulus context. Primality is checked at construction by trial
/// division; moduli are desk-scale (< 2^20), so no Montgomery arithmetic.
class PrimeField {
public:
    explicit PrimeField(std::uint64_t p);

    std::uint64_t p() const { return p_; }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p_; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p_ - b) % p_; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % p_; }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint64_t inv(std::uint64_t a) const;
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;

private:
    std::uint64_t p_;
};

bool is_prime(std::uint64_t n);

/// Field element; all operations reduce mod p and require matching moduli.
struct Fp {
    std::uint64_t v = 0;
    std::uint64_t p = 0;

    Fp() = default;
    Fp(std::uint64_t value, std::uint64_t modulus) : v(value % modulus), p(modulus) {}

    friend bool operator==(const Fp&, const Fp&) = default;
};

Fp operator+(Fp a, Fp b);
Fp operator-(Fp a, Fp b);
Fp operator*(Fp a, Fp b);
Fp inv(Fp a);

/// Element of F_p^g; length equals the design dimension g.
using NodeVec = std::vector<Fp>;

/// Invertible diagonal matrix (all diagonal entries non-zero).
struct DiagMatrix {
    std::vector<Fp> diag;
};

DiagMatrix make_diag(const std::vector<std::uint64_t>& entries, std::uint64_t p);

/// Ordered sequence of C(g+1) vectors in F_p^g, every g of which form a basis.
struct Constellation {
    std::vector<NodeVec> vectors;
    int block_size = 1;  // C
};

/// (x^0, x^1, ..., x^{g-1}) over F_p.
NodeVec vandermonde(Fp x, int g);

NodeVec make_node(const std::vector<std::uint64_t>& coords, std::uint64_t p);
NodeVec add(const NodeVec& a, const NodeVec& b);
NodeVec sub(const NodeVec& a, const NodeVec& b);
NodeVec scale(std::uint64_t s, const NodeVec& v);
NodeVec apply_diag(const DiagMatrix& m, const NodeVec& v);
bool all_nonzero(const NodeVec& v);

/// Unique alpha with sum_i alpha_i basis_i = target; Gaussian elimination over F_p.
/// Throws SingularBasis when the basis is dependent.
std::vector<Fp> solve_coeffs(const std::vector<NodeVec>& basis, const NodeVec& target);

/// True iff every g-subset of the vectors has full rank. Exhaustive over
/// subsets; intended for C(g+1) <= ~20 vectors, where exhaustiveness doubles
/// as a test oracle.
bool is_constellation(const std::vector<NodeVec>& vectors, int g);

/// (A v_1, ..., A v_{C(g+1)}); preserves the constellation property.
Constellation twist(const DiagMatrix& a, const Constellation& cons);

/// Little-endian base-p encoding: coordinate 0 is least significant.
std::uint64_t node_to_index(const NodeVec& v);
NodeVec index_to_node(std::uint64_t i, std::uint64_t p, int g);

std::uint64_t pow_u64(std::uint64_t base, unsigned exp);

}  // namespace ornlab
