#include "ornlab/prob.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

namespace ornlab {

ConsistentMatrix make_consistent_matrix(std::size_t rows, std::size_t cols, std::vector<Rat> entries) {
    if (entries.size() != rows * cols) throw Error("make_consistent_matrix: size mismatch");
    for (const auto& e : entries)
        if (e < 0) throw Error("make_consistent_matrix: negative entry");

    ConsistentMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.a = std::move(entries);

    // If any consistent column order exists, columns are totally preordered by
    // componentwise <=, so lexicographic order is one such witness.
    m.witness.resize(cols);
    std::iota(m.witness.begin(), m.witness.end(), std::size_t{0});
    std::sort(m.witness.begin(), m.witness.end(), [&](std::size_t x, std::size_t y) {
        for (std::size_t i = 0; i < rows; ++i) {
            if (m.at(i, x) != m.at(i, y)) return m.at(i, x) < m.at(i, y);
        }
        return x < y;
    });
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j + 1 < cols; ++j)
            if (m.at(i, m.witness[j]) > m.at(i, m.witness[j + 1]))
                throw Error("make_consistent_matrix: rows are not consistently ordered");
    return m;
}

std::vector<Rat> sample_na(const ConsistentMatrix& a, Rng& rng) {
    if (a.rows != a.cols) throw Error("sample_na: matrix must be square");
    auto pi = rng.permutation(a.rows);
    std::vector<Rat> x(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) x[i] = a.at(i, pi[i]);
    return x;
}

std::vector<int> MonotoneFunc::support() const {
    std::set<int> s;
    for (const auto& t : terms) s.insert(t.index);
    return {s.begin(), s.end()};
}

Rat MonotoneFunc::eval(const std::vector<Rat>& x) const {
    Rat out = 0;
    for (const auto& t : terms) {
        const Rat& xi = x[static_cast<std::size_t>(t.index)];
        if (t.step)
            out += xi >= t.c ? 1 : 0;
        else
            out += xi < t.c ? xi : t.c;
    }
    return decreasing ? -out : out;
}

namespace {

void validate_pair(const MonotoneFunc& f, const MonotoneFunc& g, std::size_t n) {
    if (f.decreasing != g.decreasing)
        throw NotMonotone("covariance: functions must share a monotone direction");
    auto sf = f.support(), sg = g.support();
    for (int i : sf) {
        if (i < 0 || static_cast<std::size_t>(i) >= n) throw Error("covariance: index out of range");
        if (std::binary_search(sg.begin(), sg.end(), i))
            throw IndexOverlap("covariance: overlapping supports");
    }
    for (int i : sg)
        if (i < 0 || static_cast<std::size_t>(i) >= n) throw Error("covariance: index out of range");
}

}  // namespace

Rat covariance_exact(const ConsistentMatrix& a, const MonotoneFunc& f, const MonotoneFunc& g) {
    if (a.rows != a.cols) throw Error("covariance_exact: matrix must be square");
    const std::size_t n = a.rows;
    if (n > 8) throw Error("covariance_exact: n > 8 would enumerate too many permutations");
    validate_pair(f, g, n);

    std::vector<std::size_t> pi(n);
    std::iota(pi.begin(), pi.end(), std::size_t{0});
    Rat sum_fg = 0, sum_f = 0, sum_g = 0;
    long count = 0;
    std::vector<Rat> x(n);
    do {
        for (std::size_t i = 0; i < n; ++i) x[i] = a.at(i, pi[i]);
        Rat fv = f.eval(x), gv = g.eval(x);
        sum_fg += fv * gv;
        sum_f += fv;
        sum_g += gv;
        ++count;
    } while (std::next_permutation(pi.begin(), pi.end()));

    Rat m = Rat(count);
    return sum_fg / m - (sum_f / m) * (sum_g / m);
}

McEstimate covariance_mc(const ConsistentMatrix& a, const MonotoneFunc& f, const MonotoneFunc& g,
                         std::uint64_t trials, std::uint64_t seed) {
    if (a.rows != a.cols) throw Error("covariance_mc: matrix must be square");
    validate_pair(f, g, a.rows);
    double sfg = 0, sf = 0, sg = 0, sfg2 = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        auto x = sample_na(a, rng);
        double fv = rat_to_double(f.eval(x)), gv = rat_to_double(g.eval(x));
        sfg += fv * gv;
        sf += fv;
        sg += gv;
        sfg2 += fv * gv * fv * gv;
    }
    double n = static_cast<double>(trials);
    McEstimate est;
    est.trials = trials;
    est.mean = sfg / n - (sf / n) * (sg / n);
    double var = std::max(0.0, sfg2 / n - (sfg / n) * (sfg / n));
    est.ci_halfwidth = 3.0 * std::sqrt(var / n);
    return est;
}

ChernoffBound chernoff_upper(double gamma, double mu) {
    if (gamma <= 0) throw std::domain_error("chernoff_upper: gamma must be positive");
    ChernoffBound b;
    b.exact_form = std::exp(mu * (std::exp(gamma) - 1 - gamma * std::exp(gamma)));
    b.simplified = std::exp(-0.5 * gamma * gamma * mu);
    return b;
}

ChernoffBound chernoff_lower(double gamma, double mu) {
    if (gamma <= 0) throw std::domain_error("chernoff_lower: gamma must be positive");
    ChernoffBound b;
    b.exact_form = std::exp(mu * (std::exp(-gamma) - 1 + gamma * std::exp(-gamma)));
    b.simplified = gamma < 0.5 ? std::exp(-gamma * gamma * mu / 3.0) : std::nan("");
    return b;
}

namespace {

double norm1(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v;
    return s;
}

double norm_inf(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s = std::max(s, v);
    return s;
}

void finish_spec(BilinearSpec& s) {
    if (s.u.size() != s.n || s.v.size() != s.n) throw Error("BilinearSpec: vector size mismatch");
    for (double x : s.u)
        if (x < 0) throw Error("BilinearSpec: u must be non-negative");
    for (double x : s.v)
        if (x < 0) throw Error("BilinearSpec: v must be non-negative");
    double nu = norm1(s.u), nv = norm1(s.v);
    if (nu == 0 || nv == 0) throw Error("BilinearSpec: u, v must be non-zero");
    s.c_ratio = (nu / norm_inf(s.u)) * (nv / norm_inf(s.v)) / static_cast<double>(s.n);
}

}  // namespace

BilinearSpec make_bilinear_spec_perm(Permutation d, std::vector<double> u, std::vector<double> v) {
    BilinearSpec s;
    s.n = d.size();
    s.perm_d = std::move(d);
    s.u = std::move(u);
    s.v = std::move(v);
    std::vector<bool> seen(s.n, false);
    for (auto x : *s.perm_d) {
        if (x >= s.n || seen[x]) throw Error("BilinearSpec: D is not a permutation");
        seen[x] = true;
    }
    finish_spec(s);
    return s;
}

BilinearSpec make_bilinear_spec_dense(std::vector<std::vector<Rat>> d, std::vector<double> u,
                                      std::vector<double> v) {
    BilinearSpec s;
    s.n = d.size();
    s.dense_d = std::move(d);
    for (std::size_t i = 0; i < s.n; ++i) {
        if (s.dense_d[i].size() != s.n) throw Error("BilinearSpec: D must be square");
        Rat row = 0;
        for (const auto& x : s.dense_d[i]) {
            if (x < 0) throw Error("BilinearSpec: D must be non-negative");
            row += x;
        }
        if (row != 1) throw Error("BilinearSpec: row sums must equal 1");
    }
    for (std::size_t j = 0; j < s.n; ++j) {
        Rat col = 0;
        for (std::size_t i = 0; i < s.n; ++i) col += s.dense_d[i][j];
        if (col != 1) throw Error("BilinearSpec: column sums must equal 1");
    }
    s.u = std::move(u);
    s.v = std::move(v);
    finish_spec(s);
    return s;
}

double bilinear_value(const BilinearSpec& spec, const Permutation& tau, Sided sided) {
    const std::size_t n = spec.n;
    if (tau.size() != n) throw Error("bilinear_value: tau size mismatch");
    double out = 0;
    if (spec.d_is_permutation()) {
        const auto& sg = *spec.perm_d;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = sg[i];
            if (j == i) continue;
            double ui = sided == Sided::Double ? spec.u[tau[i]] : spec.u[i];
            out += ui * spec.v[tau[j]];
        }
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double ui = sided == Sided::Double ? spec.u[tau[i]] : spec.u[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || spec.dense_d[i][j] == 0) continue;
            out += rat_to_double(spec.dense_d[i][j]) * ui * spec.v[tau[j]];
        }
    }
    return out;
}

TailReport tail_experiment(const BilinearSpec& spec, double gamma, Sided sided, std::uint64_t trials,
                           std::uint64_t seed) {
    if (spec.c_ratio < 1.0)
        throw HypothesisViolated("tail_experiment: norm-ratio product below N");
    if (trials < 1) throw Error("tail_experiment: trials must be >= 1");

    TailReport rep;
    rep.gamma = gamma;
    rep.sided = sided;
    rep.trials = trials;
    rep.threshold = std::exp(gamma) * norm1(spec.u) * norm1(spec.v) / static_cast<double>(spec.n);

    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        auto tau = rng.permutation(spec.n);
        if (bilinear_value(spec, tau, sided) >= rep.threshold) ++rep.hits;
    }
    rep.empirical_freq = static_cast<double>(rep.hits) / static_cast<double>(trials);
    rep.ci_halfwidth =
        3.0 * std::sqrt(rep.empirical_freq * (1 - rep.empirical_freq) / static_cast<double>(trials));
    double m = spec.d_is_permutation() ? 1.0 : static_cast<double>(spec.n) * static_cast<double>(spec.n);
    rep.bound = sided == Sided::Single ? m * std::exp(-0.5 * gamma * gamma * spec.c_ratio)
                                       : 15.0 * m * std::exp(-gamma * gamma * spec.c_ratio / 100.0);
    return rep;
}

double submatrix_sample(const std::vector<double>& u, const std::vector<double>& v, std::size_t k,
                        Rng& rng) {
    const std::size_t n = u.size();
    if (2 * k > n) throw KTooLarge("submatrix_sample: K > N/2");
    std::vector<std::uint32_t> idx = rng.permutation(n);
    double su = 0, sv = 0;
    for (std::size_t i = 0; i < k; ++i) su += u[idx[i]];
    for (std::size_t i = k; i < 2 * k; ++i) sv += v[idx[i]];
    return su * sv;
}

SubmatrixReport submatrix_tail_experiment(const std::vector<double>& u, const std::vector<double>& v,
                                          std::size_t k, double gamma, std::uint64_t trials,
                                          std::uint64_t seed) {
    const std::size_t n = u.size();
    if (2 * k > n) throw KTooLarge("submatrix_tail_experiment: K > N/2");
    double base = static_cast<double>(k) * static_cast<double>(k) /
                  (static_cast<double>(n) * static_cast<double>(n)) * norm1(u) * norm1(v);
    double c = (norm1(u) / norm_inf(u)) * (norm1(v) / norm_inf(v)) / static_cast<double>(n);

    SubmatrixReport rep;
    rep.trials = trials;
    rep.upper_threshold = std::exp(gamma) * base;
    rep.lower_threshold = std::exp(-gamma) * base;
    std::uint64_t up = 0, lo = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        Rng rng(seed, t);
        double val = submatrix_sample(u, v, k, rng);
        if (val >= rep.upper_threshold) ++up;
        if (val <= rep.lower_threshold) ++lo;
    }
    rep.upper_freq = static_cast<double>(up) / static_cast<double>(trials);
    rep.lower_freq = static_cast<double>(lo) / static_cast<double>(trials);
    double ck_n = c * static_cast<double>(k) / static_cast<double>(n);
    rep.upper_bound = 2.0 * std::exp(-gamma * gamma * ck_n / 8.0);
    rep.lower_bound = 2.0 * std::exp(-gamma * gamma * ck_n / 12.0);
    return rep;
}

namespace {

bool counts_balanced(const std::array<long, 3>& counts, long n) {
    long lo = n / 3, hi = (n + 2) / 3;
    for (long c : counts)
        if (c < lo || c > hi) return false;
    return true;
}

}  // namespace

ColoredCycles balanced_3_coloring(const Permutation& sigma) {
    const std::size_t n = sigma.size();
    ColoredCycles out;
    out.sigma = sigma;
    out.color.assign(n, -1);

    std::vector<bool> seen(n, false);
    std::array<long, 3> total{0, 0, 0};
    long colored = 0;

    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start] || sigma[start] == start) continue;
        std::vector<std::uint32_t> cycle;
        std::uint32_t cur = static_cast<std::uint32_t>(start);
        while (!seen[cur]) {
            seen[cur] = true;
            cycle.push_back(cur);
            cur = sigma[cur];
        }
        const long k = static_cast<long>(cycle.size());

        // per-cycle rule: vertex i (1-based) gets i mod 3; when k = 1 mod 3 the
        // last vertex instead takes the color differing from both neighbors
        std::vector<int> col(cycle.size());
        for (long i = 1; i <= k; ++i) col[static_cast<std::size_t>(i - 1)] = static_cast<int>(i % 3);
        if (k % 3 == 1) {
            int a = col[static_cast<std::size_t>(k - 2)], b = col[0];
            for (int cc = 0; cc < 3; ++cc) {
                if (cc != a && cc != b) {
                    col[static_cast<std::size_t>(k - 1)] = cc;
                    break;
                }
            }
        }

        std::array<long, 3> cyc{0, 0, 0};
        for (int c : col) ++cyc[static_cast<std::size_t>(c)];

        // merge: recolor the new cycle (a permutation of the three colors) so
        // the union stays balanced; one of the six choices always works
        static const std::array<std::array<int, 3>, 6> perms{
            {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
        bool merged = false;
        for (const auto& pm : perms) {
            std::array<long, 3> cand = total;
            for (int c = 0; c < 3; ++c) cand[static_cast<std::size_t>(pm[static_cast<std::size_t>(c)])] += cyc[static_cast<std::size_t>(c)];
            if (counts_balanced(cand, colored + k)) {
                for (std::size_t i = 0; i < cycle.size(); ++i)
                    out.color[cycle[i]] = pm[static_cast<std::size_t>(col[i])];
                total = cand;
                merged = true;
                break;
            }
        }
        if (!merged) throw Error("balanced_3_coloring: no balanced merge (unexpected)");
        colored += k;
    }

    for (std::size_t i = 0; i < n; ++i)
        if (out.color[i] >= 0) out.nonfixed.push_back(static_cast<std::uint32_t>(i));
    return out;
}

bool coloring_proper(const ColoredCycles& c) {
    for (auto i : c.nonfixed)
        if (c.color[i] == c.color[c.sigma[i]]) return false;
    return true;
}

bool coloring_balanced(const ColoredCycles& c) {
    std::array<long, 3> counts{0, 0, 0};
    for (auto i : c.nonfixed) ++counts[static_cast<std::size_t>(c.color[i])];
    return counts_balanced(counts, static_cast<long>(c.nonfixed.size()));
}

}  // namespace ornlab
