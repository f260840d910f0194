#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ornlab/rational.hpp"
#include "ornlab/rng.hpp"
#include "ornlab/schedule.hpp"

namespace ornlab {

/// Non-negative matrix with consistently ordered rows: some column permutation
/// sorts every row simultaneously. The witness is found by sorting columns
/// lexicographically and verifying row-wise sortedness.
struct ConsistentMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Rat> a;  // row-major
    std::vector<std::size_t> witness;

    const Rat& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

ConsistentMatrix make_consistent_matrix(std::size_t rows, std::size_t cols, std::vector<Rat> entries);

/// X_i = A[i, pi(i)] for a fresh uniform permutation pi.
std::vector<Rat> sample_na(const ConsistentMatrix& a, Rng& rng);

/// Coordinate-wise monotone test function: sum of min(X_i, cap) and step
/// terms over its support, optionally negated for the decreasing direction.
struct MonotoneTerm {
    int index = 0;
    bool step = false;  // step: [X_i >= c]; otherwise min(X_i, c)
    Rat c;
};

struct MonotoneFunc {
    std::vector<MonotoneTerm> terms;
    bool decreasing = false;

    std::vector<int> support() const;
    Rat eval(const std::vector<Rat>& x) const;
};

/// Exact covariance Cov(f(X), g(X)) over all n! permutations (n <= 8).
/// Throws IndexOverlap for intersecting supports, NotMonotone for mixed
/// directions.
Rat covariance_exact(const ConsistentMatrix& a, const MonotoneFunc& f, const MonotoneFunc& g);

struct McEstimate {
    double mean = 0;
    double ci_halfwidth = 0;  // 3 sigma
    std::uint64_t trials = 0;
};

McEstimate covariance_mc(const ConsistentMatrix& a, const MonotoneFunc& f, const MonotoneFunc& g,
                         std::uint64_t trials, std::uint64_t seed);

/// Multiplicative Chernoff bounds for sums of [0,1] negatively associated
/// variables with mean mu. exact_form is [exp(e^g - 1 - g e^g)]^mu (upper) or
/// [exp(e^-g - 1 + g e^-g)]^mu (lower); simplified is e^{-g^2 mu/2} (upper) or
/// e^{-g^2 mu/3} (lower, valid for g < 1/2, NaN otherwise).
struct ChernoffBound {
    double exact_form = 1;
    double simplified = 1;
};

ChernoffBound chernoff_upper(double gamma, double mu);
ChernoffBound chernoff_lower(double gamma, double mu);

/// D (permutation or dense doubly stochastic) with non-negative test vectors;
/// c_ratio = (|u|_1/|u|_inf)(|v|_1/|v|_inf)/N is the concentration parameter.
struct BilinearSpec {
    std::size_t n = 0;
    std::optional<Permutation> perm_d;
    std::vector<std::vector<Rat>> dense_d;
    std::vector<double> u, v;
    double c_ratio = 0;

    bool d_is_permutation() const { return perm_d.has_value(); }
};

BilinearSpec make_bilinear_spec_perm(Permutation d, std::vector<double> u, std::vector<double> v);
BilinearSpec make_bilinear_spec_dense(std::vector<std::vector<Rat>> d, std::vector<double> u,
                                      std::vector<double> v);

enum class Sided { Single, Double };

/// (Pw)_i = w_{tau(i)} with P the matrix of tau. Single: sum_{i!=j} D_ij u_i (Pv)_j;
/// double: sum_{i!=j} D_ij (Pu)_i (Pv)_j.
double bilinear_value(const BilinearSpec& spec, const Permutation& tau, Sided sided);

struct TailReport {
    double gamma = 0;
    Sided sided = Sided::Single;
    double threshold = 0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double empirical_freq = 0;
    double ci_halfwidth = 0;
    double bound = 1;
};

/// Samples uniform permutations and counts B >= e^gamma |u|_1 |v|_1 / N.
/// The reported bound is M e^{-gamma^2 C/2} (single) or 15 M e^{-gamma^2 C/100}
/// (double) with M = 1 for permutation D and N^2 otherwise.
TailReport tail_experiment(const BilinearSpec& spec, double gamma, Sided sided, std::uint64_t trials,
                           std::uint64_t seed);

/// sum_{i in Q, j in R} u_i v_j for a uniform ordered pair of disjoint
/// K-subsets.
double submatrix_sample(const std::vector<double>& u, const std::vector<double>& v, std::size_t k,
                        Rng& rng);

struct SubmatrixReport {
    double upper_threshold = 0, lower_threshold = 0;
    double upper_freq = 0, lower_freq = 0;
    double upper_bound = 1, lower_bound = 1;
    std::uint64_t trials = 0;
};

SubmatrixReport submatrix_tail_experiment(const std::vector<double>& u, const std::vector<double>& v,
                                          std::size_t k, double gamma, std::uint64_t trials,
                                          std::uint64_t seed);

/// Proper balanced 3-coloring of the non-fixed points along sigma's cycles.
struct ColoredCycles {
    Permutation sigma;
    std::vector<std::uint32_t> nonfixed;
    std::vector<int> color;  // per node; -1 on fixed points
};

ColoredCycles balanced_3_coloring(const Permutation& sigma);

bool coloring_proper(const ColoredCycles& c);
bool coloring_balanced(const ColoredCycles& c);

}  // namespace ornlab
