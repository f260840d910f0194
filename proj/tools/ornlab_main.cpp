#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <thread>

#include "ornlab/io.hpp"
#include "ornlab/prob.hpp"
#include "ornlab/routing.hpp"
#include "ornlab/schedule.hpp"
#include "ornlab/tradeoff.hpp"

using json = nlohmann::json;
using namespace ornlab;

namespace {

struct Ctx {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
};

json load_config(const Ctx& ctx) {
    if (ctx.config_path.empty()) throw Error("--config is required");
    return json::parse(io::read_file(ctx.config_path));
}

std::string meta_line(const json& config, std::uint64_t seed) {
    return std::string("version=") + io::kToolVersion + " digest=" + io::fnv1a_hex(config.dump()) +
           " seed=" + std::to_string(seed);
}

std::uint64_t pick_seed(const Ctx& ctx, const json& config) {
    if (ctx.seed_set) return ctx.seed;
    if (config.contains("seed")) return config.at("seed").get<std::uint64_t>();
    return 0;
}

std::string out_path(const Ctx& ctx, const std::string& name) {
    std::filesystem::create_directories(ctx.out_dir);
    return ctx.out_dir + "/" + name;
}

void parallel_for(int threads, std::uint64_t n, const std::function<void(std::uint64_t)>& fn) {
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::uint64_t> next{0};
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::uint64_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

Schedule read_schedule(const std::string& path) { return schedule_from_json(io::read_file(path)); }

PermDemand demand_from_config(const json& cfg, std::uint64_t n, Rat rate, std::uint64_t seed) {
    std::string type = cfg.value("type", "random");
    if (type == "random") return random_perm_demand(n, rate, cfg.value("seed", seed));
    if (type == "identity") {
        Permutation id(n);
        std::iota(id.begin(), id.end(), 0u);
        return make_perm_demand(id, rate);
    }
    if (type == "file") {
        auto sigma = io::demand_from_json(io::read_file(cfg.at("path").get<std::string>()));
        return make_perm_demand(sigma, rate);
    }
    throw Error("demand type must be random, identity or file");
}

std::string mode_name(DesignMode m) { return m == DesignMode::Orn ? "orn" : "sorn"; }

int cmd_build(const Ctx& ctx) {
    json cfg = load_config(ctx);
    std::uint64_t seed = pick_seed(ctx, cfg);
    const Rat r = rat_from_string(cfg.at("r").get<std::string>());
    const std::uint64_t p = cfg.at("p").get<std::uint64_t>();
    const std::string kind = cfg.value("kind", "orn");
    DesignMode mode = kind == "sorn" ? DesignMode::Sorn : DesignMode::Orn;

    DesignParams params = derive_params_report(r, p, mode);
    int c = cfg.value("C", params.C > 0 ? static_cast<int>(params.C) : 1);

    std::optional<Permutation> tau;
    if (cfg.contains("relabel_seed")) {
        Rng rng(cfg.at("relabel_seed").get<std::uint64_t>());
        tau = rng.permutation(pow_u64(p, static_cast<unsigned>(params.g)));
    }
    Schedule sched = mode == DesignMode::Orn ? Schedule(OrnSchedule(p, params.g, c, tau))
                                             : Schedule(SornSchedule(p, params.g, c, tau));
    json sj = json::parse(schedule_to_json(sched));
    sj["meta"] = meta_line(cfg, seed);
    io::write_file(out_path(ctx, "schedule.json"), sj.dump(2) + "\n");

    json jp;
    jp["meta"] = meta_line(cfg, seed);
    jp["mode"] = mode_name(mode);
    jp["r"] = rat_to_string(params.r);
    jp["p"] = params.p;
    jp["g"] = params.g;
    jp["eps"] = rat_to_string(params.eps);
    jp["h"] = params.h;
    jp["eps_o"] = rat_to_string(params.eps_o);
    jp["theta"] = params.theta;
    jp["N"] = params.N.str();
    jp["gamma_orn"] = std::isnan(params.gamma_orn) ? json(nullptr) : json(params.gamma_orn);
    jp["gamma_sorn"] = params.gamma_sorn;
    jp["delta_sorn"] = params.delta_sorn;
    jp["C_theorem"] = params.C;
    jp["C_used"] = c;
    json checks = json::array();
    for (const auto& chk : params.checks)
        checks.push_back({{"name", chk.name}, {"pass", chk.pass}, {"detail", chk.detail}});
    jp["hypothesis_checks"] = checks;
    io::write_file(out_path(ctx, "params.json"), jp.dump(2) + "\n");

    std::string table = "# " + meta_line(cfg, seed) + "\n";
    table += "parameter            value\n";
    table += "r                    " + rat_to_string(params.r) + "\n";
    table += "p                    " + std::to_string(params.p) + "\n";
    table += "g                    " + std::to_string(params.g) + "\n";
    table += "eps                  " + rat_to_string(params.eps) + "\n";
    table += "h                    " + std::to_string(params.h) + "\n";
    table += "eps_o                " + rat_to_string(params.eps_o) + "\n";
    table += "theta                " + std::to_string(params.theta) + "\n";
    table += "N                    " + params.N.str() + "\n";
    table += "gamma (mode)         " +
             std::to_string(mode == DesignMode::Orn ? params.gamma_orn : params.gamma_sorn) + "\n";
    table += "C (theorem)          " + std::to_string(params.C) + "\n";
    table += "C (used)             " + std::to_string(c) + "\n";
    table += "\nhypothesis checks\n";
    for (const auto& chk : params.checks)
        table += (chk.pass ? "PASS " : "FAIL ") + chk.name + "  [" + chk.detail + "]\n";
    io::write_file(out_path(ctx, "params.txt"), table);

    std::cout << "wrote " << out_path(ctx, "schedule.json") << " and parameter reports\n";
    return 0;
}

json load_summary(const LoadMap& load, long max_latency, const std::string& mode,
                  const std::vector<LoadMap>* hop_flow, const Rat& hop_bound) {
    json js;
    auto m = max_load(load);
    js["max_load"] = rat_to_string(m.value);
    js["max_load_edge"] = {{"tail", m.edge.tail}, {"k", m.edge.k}};
    js["feasible"] = is_feasible(load);
    js["mode"] = mode;
    js["max_latency"] = max_latency;
    if (hop_flow) {
        Rat first = max_load(hop_flow->front()).value;
        Rat last = max_load(hop_flow->back()).value;
        js["first_hop_max"] = rat_to_string(first);
        js["last_hop_max"] = rat_to_string(last);
        js["first_last_hop_bound"] = rat_to_string(hop_bound);
        js["first_last_hop_pass"] = first <= hop_bound && last <= hop_bound;
    }
    return js;
}

int cmd_load(const Ctx& ctx) {
    json cfg = load_config(ctx);
    std::uint64_t seed = pick_seed(ctx, cfg);
    Schedule sched = read_schedule(cfg.at("schedule").get<std::string>());
    const Rat rate = rat_from_string(cfg.at("rate").get<std::string>());
    PermDemand demand = demand_from_config(cfg.value("demand", json{{"type", "random"}}),
                                           sched_nodes(sched), rate, seed);
    const std::string mode = cfg.value("mode", "oblivious");

    json summary;
    LoadMap result;
    std::string meta = meta_line(cfg, seed);
    if (mode == "oblivious") {
        if (const auto* orn = std::get_if<OrnSchedule>(&sched)) {
            auto res = induced_load_oblivious(*orn, demand);
            Rat bound = rate * Rat(static_cast<long>(orn->p() - 1)) / Rat(static_cast<long>(orn->p() - 2));
            summary = load_summary(res.load, res.max_latency, mode, &res.hop_flow, bound);
            result = std::move(res.load);
        } else {
            const auto& sorn = std::get<SornSchedule>(sched);
            auto res = induced_load_oblivious(sorn, demand);
            Rat bound = rate * Rat(static_cast<long>((sorn.g() + 1) * (sorn.p() - 1))) /
                        Rat(static_cast<long>(sorn.p() - 2));
            summary = load_summary(res.load, res.max_latency, mode, &res.hop_flow, bound);
            result = std::move(res.load);
        }
    } else if (mode == "failover") {
        const auto& sorn = std::get<SornSchedule>(sched);
        auto res = induced_load_failover(sorn, demand);
        summary = load_summary(res.load, res.max_latency, mode, nullptr, Rat(0));
        // per-hop extremes against r(g+1)(p-1)^g/(p-2)^g
        Rat bound = rate * Rat(sorn.g() + 1) *
                    Rat(bigint_pow(BigInt(sorn.p() - 1), static_cast<unsigned>(sorn.g())),
                        bigint_pow(BigInt(sorn.p() - 2), static_cast<unsigned>(sorn.g())));
        Rat h1 = max_load(res.hop1).value, h2 = max_load(res.hop2).value;
        summary["first_hop_max"] = rat_to_string(h1);
        summary["last_hop_max"] = rat_to_string(h2);
        summary["first_last_hop_bound"] = rat_to_string(bound);
        summary["first_last_hop_pass"] = h1 <= bound && h2 <= bound;
        result = std::move(res.load);
    } else if (mode == "semi") {
        const auto& sorn = std::get<SornSchedule>(sched);
        auto dec = semi_oblivious_route(sorn, demand);
        summary = load_summary(dec.load, dec.max_latency,
                               dec.mode == RouteMode::GPlusOneHop ? "g_plus_one_hop" : "two_hop_failover",
                               nullptr, Rat(0));
        summary["overloaded_edges"] = json::array();
        for (const auto& e : dec.overloaded_edges)
            summary["overloaded_edges"].push_back({{"tail", e.tail}, {"k", e.k}});
        result = std::move(dec.load);
    } else {
        throw Error("mode must be oblivious, failover or semi");
    }
    summary["meta"] = meta;
    summary["rate"] = rat_to_string(rate);
    io::write_file(out_path(ctx, "loads.csv"), io::loadmap_to_csv(result, sched, meta));
    io::write_file(out_path(ctx, "loads.json"), io::loadmap_to_json(result, sched, meta));
    io::write_file(out_path(ctx, "summary.json"), summary.dump(2) + "\n");
    std::cout << "wrote loads.csv, loads.json and summary.json\n";
    bool pass = !summary.contains("first_last_hop_pass") || summary["first_last_hop_pass"].get<bool>();
    return pass ? 0 : 1;
}

int cmd_montecarlo(const Ctx& ctx) {
    json cfg = load_config(ctx);
    std::uint64_t seed = pick_seed(ctx, cfg);
    Schedule sched = read_schedule(cfg.at("schedule").get<std::string>());
    const Rat rate = rat_from_string(cfg.at("rate").get<std::string>());
    const std::uint64_t trials = cfg.value("trials", 20);

    struct Row {
        std::string max_load;
        bool feasible = true;
        long max_latency = 0;
    };
    std::vector<Row> rows(trials);
    parallel_for(ctx.threads, trials, [&](std::uint64_t i) {
        Rng rng(seed, i);
        PermDemand d = make_perm_demand(rng.permutation(sched_nodes(sched)), rate);
        if (const auto* orn = std::get_if<OrnSchedule>(&sched)) {
            auto res = induced_load_oblivious(*orn, d);
            auto m = max_load(res.load);
            rows[i] = {rat_to_string(m.value), is_feasible(res.load), res.max_latency};
        } else {
            auto res = induced_load_oblivious(std::get<SornSchedule>(sched), d);
            auto m = max_load(res.load);
            rows[i] = {rat_to_string(m.value), is_feasible(res.load), res.max_latency};
        }
    });

    json out;
    out["meta"] = meta_line(cfg, seed);
    out["seed"] = seed;
    out["trials"] = trials;
    long overloads = 0;
    json per = json::array();
    for (std::uint64_t i = 0; i < trials; ++i) {
        per.push_back({{"trial", i}, {"max_load", rows[i].max_load}, {"feasible", rows[i].feasible},
                       {"max_latency", rows[i].max_latency}});
        overloads += rows[i].feasible ? 0 : 1;
    }
    out["per_trial"] = per;
    out["overload_count"] = overloads;
    out["overload_freq"] = static_cast<double>(overloads) / static_cast<double>(trials);
    io::write_file(out_path(ctx, "montecarlo.json"), out.dump(2) + "\n");
    std::cout << "wrote montecarlo.json (" << overloads << "/" << trials << " overloaded)\n";
    return 0;
}

int cmd_tails(const Ctx& ctx) {
    json cfg = load_config(ctx);
    std::uint64_t seed = pick_seed(ctx, cfg);
    const std::uint64_t trials = cfg.value("trials", 20000);
    const long na_cases = cfg.value("na_cases", 2000);

    bool all_ok = true;
    json out;
    out["meta"] = meta_line(cfg, seed);

    {  // negative-association corpus
        Rng rng(seed);
        long violations = 0;
        for (long c = 0; c < na_cases; ++c) {
            std::size_t n = 2 + rng.below(4);
            std::vector<std::vector<Rat>> rows(n);
            for (auto& row : rows) {
                row.resize(n);
                for (auto& x : row) x = Rat(static_cast<long>(rng.below(10)));
                std::sort(row.begin(), row.end());
            }
            auto colperm = rng.permutation(n);
            std::vector<Rat> entries(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) entries[i * n + colperm[j]] = rows[i][j];
            auto a = make_consistent_matrix(n, n, std::move(entries));

            auto idx = rng.permutation(n);
            std::size_t cut = 1 + rng.below(n - 1);
            MonotoneFunc f, g;
            f.decreasing = g.decreasing = rng.below(2) == 0;
            for (std::size_t i = 0; i < n; ++i) {
                MonotoneTerm t{static_cast<int>(idx[i]), rng.below(2) == 0,
                               Rat(static_cast<long>(rng.below(10)))};
                (i < cut ? f : g).terms.push_back(t);
            }
            if (covariance_exact(a, f, g) > 0) ++violations;
        }
        out["na_corpus"] = {{"cases", na_cases}, {"violations", violations}};
        all_ok = all_ok && violations == 0;
    }

    {  // the double-sided counterexample value
        std::vector<int> u{1, 1, 0, 0};
        Permutation perm{0, 1, 2, 3};
        Rat sum = 0;
        long count = 0;
        std::sort(perm.begin(), perm.end());
        do {
            sum += Rat(u[perm[0]] * u[perm[1]] * u[perm[1]] * u[perm[0]]);
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        bool ok = sum / count == make_rat(1, 6);
        out["double_sided_counterexample"] = {{"expected", "1/6"}, {"pass", ok}};
        all_ok = all_ok && ok;
    }

    {  // bilinear tails over a declarative corpus
        json corpus = cfg.value("corpus", json::array());
        if (corpus.empty()) {
            for (int n : {16, 32}) {
                corpus.push_back({{"name", "ones_shift_" + std::to_string(n)}, {"n", n},
                                  {"d", "shift"}, {"u", "ones"}, {"v", "ones"}});
                corpus.push_back({{"name", "two_shift_" + std::to_string(n)}, {"n", n},
                                  {"d", "shift"}, {"u", "two_level"}, {"v", "ones"}});
                corpus.push_back({{"name", "ramp_derangement_" + std::to_string(n)}, {"n", n},
                                  {"d", "derangement"}, {"u", "ramp"}, {"v", "two_level"}});
            }
        }
        auto build_vec = [](const std::string& kind, std::size_t n) {
            std::vector<double> v(n, 1.0);
            if (kind == "two_level")
                for (std::size_t i = 0; i < n / 2; ++i) v[i] = 0.5;
            if (kind == "ramp")
                for (std::size_t i = 0; i < n; ++i)
                    v[i] = 1.0 - static_cast<double>(i) / (2.0 * static_cast<double>(n));
            return v;
        };
        json reports = json::array();
        for (const auto& desc : corpus) {
            const std::size_t n = desc.at("n").get<std::size_t>();
            Permutation d_perm(n);
            if (desc.value("d", "shift") == std::string("shift")) {
                for (std::uint32_t i = 0; i < n; ++i) d_perm[i] = (i + 1) % static_cast<std::uint32_t>(n);
            } else {
                Rng drng(std::stoull(io::fnv1a_hex(desc.dump()), nullptr, 16));
                d_perm = drng.permutation(n);
                for (std::uint32_t i = 0; i < n; ++i)
                    if (d_perm[i] == i) std::swap(d_perm[i], d_perm[(i + 1) % n]);
            }
            auto spec = make_bilinear_spec_perm(d_perm, build_vec(desc.value("u", "ones"), n),
                                                build_vec(desc.value("v", "ones"), n));
            std::string digest = io::fnv1a_hex(desc.dump());
            for (double gamma : desc.value("gammas", std::vector<double>{0.3, 0.5, 1.0})) {
                for (Sided sided : {Sided::Single, Sided::Double}) {
                    auto rep = tail_experiment(spec, gamma, sided, trials, seed + n);
                    double b = std::min(rep.bound, 1.0);
                    double sg = std::sqrt(b * (1 - b) / static_cast<double>(trials));
                    bool ok = rep.empirical_freq <= b + 3 * sg;
                    all_ok = all_ok && ok;
                    reports.push_back({{"spec_digest", digest},
                                       {"name", desc.value("name", "")},
                                       {"gamma", gamma},
                                       {"trials", trials},
                                       {"seed", seed + n},
                                       {"sided", sided == Sided::Single ? "single" : "double"},
                                       {"empirical_freq", rep.empirical_freq},
                                       {"ci_halfwidth", rep.ci_halfwidth},
                                       {"bound", rep.bound},
                                       {"pass", ok}});
                }
            }
        }
        out["bilinear_tails"] = reports;
    }

    {  // submatrix tails
        json reports = json::array();
        std::vector<double> u(24, 1), v(24, 1);
        for (std::size_t i = 0; i < 12; ++i) v[i] = 0.5;
        for (double gamma : {0.3, 0.5, 1.0}) {
            auto rep = submatrix_tail_experiment(u, v, 6, gamma, trials, seed + 7);
            double bu = std::min(rep.upper_bound, 1.0), bl = std::min(rep.lower_bound, 1.0);
            bool ok = rep.upper_freq <= bu + 3 * std::sqrt(bu * (1 - bu) / static_cast<double>(trials)) &&
                      rep.lower_freq <= bl + 3 * std::sqrt(bl * (1 - bl) / static_cast<double>(trials));
            all_ok = all_ok && ok;
            reports.push_back({{"gamma", gamma},
                               {"upper_freq", rep.upper_freq},
                               {"upper_bound", rep.upper_bound},
                               {"lower_freq", rep.lower_freq},
                               {"lower_bound", rep.lower_bound},
                               {"pass", ok}});
        }
        out["submatrix_tails"] = reports;
    }

    {  // coloring sweep
        bool ok = true;
        for (std::size_t n = 0; n <= 6; ++n) {
            Permutation perm(n);
            std::iota(perm.begin(), perm.end(), 0u);
            do {
                auto c = balanced_3_coloring(perm);
                ok = ok && coloring_proper(c) && coloring_balanced(c);
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        out["coloring"] = {{"n_max", 6}, {"pass", ok}};
        all_ok = all_ok && ok;
    }

    out["all_pass"] = all_ok;
    io::write_file(out_path(ctx, "tails.json"), out.dump(2) + "\n");
    std::cout << (all_ok ? "tails: all PASS\n" : "tails: FAILURES, see tails.json\n");
    return all_ok ? 0 : 1;
}

int cmd_curves(const Ctx& ctx) {
    json cfg = load_config(ctx);
    std::uint64_t seed = pick_seed(ctx, cfg);
    const double n = cfg.value("N", 1e20);
    const long den = cfg.value("den", 100);
    const long num_start = cfg.value("num_start", 1);
    const long num_stop = cfg.value("num_stop", 49);

    std::vector<Rat> grid;
    for (long num = num_start; num <= num_stop; ++num) {
        Rat r(num, den);
        if (r <= 0 || r > make_rat(1, 2)) continue;
        if (is_integer(Rat(1) / r)) continue;  // eps = 1 grid points are skipped
        grid.push_back(r);
    }
    auto points = sweep_curves(n, grid);
    io::write_file(out_path(ctx, "curves.csv"), io::curves_to_csv(points, meta_line(cfg, seed)));

    if (cfg.contains("dual")) {
        const auto& dc = cfg.at("dual");
        Schedule sched = read_schedule(dc.at("schedule").get<std::string>());
        int theta = dc.value("theta", 3);
        long l = dc.value("L", 48);
        std::uint64_t trials = dc.value("trials", 10);
        auto est = expected_dual_bound(sched, theta, l, trials, seed);
        json dj;
        dj["meta"] = meta_line(cfg, seed);
        dj["theta"] = theta;
        dj["L"] = l;
        dj["trials"] = trials;
        dj["mean"] = est.mean;
        dj["ci_halfwidth"] = est.ci_halfwidth;
        dj["closed_form"] = est.closed_form;
        io::write_file(out_path(ctx, "dual.json"), dj.dump(2) + "\n");
    }
    std::cout << "wrote curves.csv (" << points.size() << " rows)\n";
    return 0;
}

int cmd_verify(const Ctx& ctx) {
    json cfg = ctx.config_path.empty() ? json::object() : load_config(ctx);
    std::uint64_t seed = pick_seed(ctx, cfg);
    bool quick = cfg.value("level", "quick") == std::string("quick");
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
        failures += ok ? 0 : 1;
    };

    {  // constellation sweep
        bool ok = true;
        for (std::uint64_t p : {5ULL, 7ULL}) {
            for (int g : {2, 3}) {
                for (int c = 1; static_cast<std::uint64_t>(c) * (g + 1) <= p; ++c) {
                    std::vector<NodeVec> vecs;
                    for (int x = 0; x < c * (g + 1); ++x)
                        vecs.push_back(vandermonde(Fp(static_cast<std::uint64_t>(x), p), g));
                    ok = ok && is_constellation(vecs, g);
                    for (const auto& m : diagonal_family(p, g)) {
                        Constellation cons{vecs, c};
                        ok = ok && is_constellation(twist(m, cons).vectors, g);
                    }
                }
            }
        }
        report("constellations: distinct Vandermonde sets and their twists", ok);
    }

    {  // pseudo-path bracket
        OrnSchedule s(7, 2, 2);
        Rng rng(seed + 1);
        bool ok = true;
        int cases = quick ? 200 : 2000;
        for (int i = 0; i < cases; ++i) {
            std::uint64_t a = rng.below(49), b = rng.below(49);
            long t = static_cast<long>(rng.below(static_cast<std::uint64_t>(s.period())));
            long c = static_cast<long>(enumerate_pseudopaths(s, a, b, t).size());
            ok = ok && c >= 40 && c <= 48;
        }
        report("pseudo-path count bracket [40,48] at p=7 g=2 C=2", ok);
    }

    {  // deterministic hop bounds + conservation
        OrnSchedule s(7, 2, 2);
        bool ok = true;
        const Rat r = make_rat(3, 10);
        const Rat bound = r * Rat(6) / Rat(5);
        int sigmas = quick ? 3 : 10;
        for (int i = 0; i < sigmas; ++i) {
            PermDemand d = random_perm_demand(49, r, seed + 10 + static_cast<std::uint64_t>(i));
            auto res = induced_load_oblivious(s, d);
            ok = ok && max_load(res.hop_flow.front()).value <= bound;
            ok = ok && max_load(res.hop_flow.back()).value <= bound;
            ok = ok && res.max_latency <= orn_primary_latency_bound(s);
        }
        report("first/last-hop bound and latency cap at p=7 g=2 C=2", ok);
    }

    {  // SORN coverage
        SornSchedule s(5, 2, 1);
        std::vector<long> count(25, 0);
        for (long k = 0; k < s.period(); ++k) {
            auto ts = decompose_sorn(k, 5, 2, 1);
            ++count[node_to_index(scale(ts.s, s.frame_vector(ts.f, ts.x)))];
        }
        bool ok = true;
        for (std::uint64_t dd = 0; dd < 25; ++dd) {
            bool nz = all_nonzero(index_to_node(dd, 5, 2));
            ok = ok && count[dd] == (nz ? 3 : 0);
        }
        report("SORN coverage: C(g+1) appearances per all-non-zero difference", ok);
    }

    {  // counting lemma
        bool ok = true;
        for (const Schedule& s : {Schedule(OrnSchedule(5, 2, 1)), Schedule(SornSchedule(5, 2, 1))}) {
            Rng rng(seed + 2);
            for (int i = 0; i < (quick ? 8 : 40); ++i) {
                long l = 6 + static_cast<long>(rng.below(10));
                int h = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(l / 3)));
                std::uint64_t a = rng.below(25);
                long t0 = static_cast<long>(rng.below(48));
                auto reach = reachable_set(s, a, t0, l, h);
                auto cb = counting_bound(l, h);
                ok = ok && cb.asserted && BigInt(static_cast<long>(reach.size())) <= cb.value;
            }
        }
        report("counting bound 2 binom(L,h) dominates reachable sets", ok);
    }

    {  // NA corpus + counterexample + coloring (compact versions)
        Rng rng(seed + 3);
        bool ok = true;
        for (int c = 0; c < (quick ? 300 : 3000); ++c) {
            std::size_t n = 2 + rng.below(4);
            std::vector<std::vector<Rat>> rows(n);
            for (auto& row : rows) {
                row.resize(n);
                for (auto& x : row) x = Rat(static_cast<long>(rng.below(8)));
                std::sort(row.begin(), row.end());
            }
            auto colperm = rng.permutation(n);
            std::vector<Rat> entries(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) entries[i * n + colperm[j]] = rows[i][j];
            auto a = make_consistent_matrix(n, n, std::move(entries));
            auto idx = rng.permutation(n);
            std::size_t cut = 1 + rng.below(n - 1);
            MonotoneFunc f, g;
            f.decreasing = g.decreasing = rng.below(2) == 0;
            for (std::size_t i = 0; i < n; ++i)
                (i < cut ? f : g)
                    .terms.push_back({static_cast<int>(idx[i]), rng.below(2) == 0,
                                      Rat(static_cast<long>(rng.below(8)))});
            ok = ok && covariance_exact(a, f, g) <= 0;
        }
        report("negative-association corpus has non-positive covariance", ok);

        bool col = true;
        for (std::size_t n = 2; n <= 6; ++n) {
            Permutation perm(n);
            std::iota(perm.begin(), perm.end(), 0u);
            do {
                auto c = balanced_3_coloring(perm);
                col = col && coloring_proper(c) && coloring_balanced(c);
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
        report("balanced 3-coloring proper and balanced (n <= 6)", col);
    }

    {  // weak duality
        OrnSchedule s(5, 2, 1);
        bool ok = true;
        for (int i = 0; i < (quick ? 2 : 10); ++i) {
            PermDemand d = random_perm_demand(25, make_rat(1, 4), seed + 20 + static_cast<std::uint64_t>(i));
            auto res = induced_load_oblivious(s, d);
            Rat feasible_r = d.rate / max_load(res.load).value;
            Rat bound = dual_throughput_bound(Schedule(s), d.sigma, 3, orn_primary_latency_bound(s));
            ok = ok && feasible_r <= bound;
        }
        report("weak duality: feasible throughput below the dual bound", ok);
    }

    {  // curve self-consistency in the plotted regime (g <= 4 at N = 1e20)
        bool ok = true;
        for (long num : {18L, 22L, 30L}) {
            Rat r(num, 100);
            double v = curve(r, 1e20, CurveKind::Llow);
            double u = curve(r, 1e20, CurveKind::Lupp);
            double vlb = curve(r, 1e20, CurveKind::VlbLine);
            ok = ok && v > 0 && v <= u && u < vlb && v >= 0.5 * u;
        }
        report("curve ordering in the plotted regime (L_low <= L_upp < vlb)", ok);
    }

    std::cout << (failures == 0 ? "verify: all PASS\n" : "verify: FAILURES\n");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"design laboratory for oblivious and semi-oblivious reconfigurable networks"};
    app.require_subcommand(1);
    app.fallthrough();

    Ctx ctx;
    app.add_option("--config", ctx.config_path, "JSON config file");
    app.add_option("--out", ctx.out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", ctx.seed, "seed override");
    app.add_option("--threads", ctx.threads, "worker threads for trial loops");

    auto* build = app.add_subcommand("build", "construct a schedule and parameter report");
    auto* load = app.add_subcommand("load", "compute exact per-edge loads for a demand");
    auto* mc = app.add_subcommand("montecarlo", "overload frequency over random permutations");
    auto* tails = app.add_subcommand("tails", "probability-lab experiment suite");
    auto* curves = app.add_subcommand("curves", "tradeoff curve sweep and dual-bound evaluation");
    auto* verify = app.add_subcommand("verify", "run the invariant suite");

    CLI11_PARSE(app, argc, argv);
    ctx.seed_set = seed_opt->count() > 0;

    try {
        if (build->parsed()) return cmd_build(ctx);
        if (load->parsed()) return cmd_load(ctx);
        if (mc->parsed()) return cmd_montecarlo(ctx);
        if (tails->parsed()) return cmd_tails(ctx);
        if (curves->parsed()) return cmd_curves(ctx);
        if (verify->parsed()) return cmd_verify(ctx);
    } catch (const EpsilonOne& e) {
        std::cerr << "error (EpsilonOne): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
