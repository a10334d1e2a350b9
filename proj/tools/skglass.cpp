#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skglass/analytics.hpp"
#include "skglass/ensemble.hpp"
#include "skglass/errors.hpp"
#include "skglass/exact.hpp"
#include "skglass/mc.hpp"
#include "skglass/model.hpp"
#include "skglass/numeric.hpp"
#include "skglass/parallel.hpp"
#include "skglass/report.hpp"
#include "skglass/rng.hpp"

namespace {

using namespace skglass;

std::string strf(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    va_list copy;
    va_copy(copy, args);
    const int len = std::vsnprintf(nullptr, 0, fmt, copy);
    va_end(copy);
    std::string s(static_cast<std::size_t>(len), '\0');
    std::vsnprintf(s.data(), s.size() + 1, fmt, args);
    va_end(args);
    return s;
}

// --workers accepts a positive integer or "auto"; unset falls back to the
// SKGLASS_WORKERS environment variable, then to automatic.
int parse_workers(const std::string& flag_value) {
    std::string v = flag_value;
    if (v.empty()) {
        if (const char* env = std::getenv("SKGLASS_WORKERS")) v = env;
    }
    if (v.empty() || v == "auto") return 0;
    try {
        std::size_t pos = 0;
        const int k = std::stoi(v, &pos);
        if (pos != v.size() || k < 1) throw std::invalid_argument("");
        return k;
    } catch (const std::exception&) {
        throw std::invalid_argument("--workers must be a positive integer or 'auto'");
    }
}

std::vector<double> make_beta_grid(double beta_min, double beta_max, int steps) {
    if (steps < 1) throw std::invalid_argument("--beta-steps must be >= 1");
    if (beta_min <= 0.0) throw std::invalid_argument("--beta-min must be positive");
    if (beta_max < beta_min) throw std::invalid_argument("--beta-max must be >= --beta-min");
    if (steps == 1) return {beta_min};
    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        grid[static_cast<std::size_t>(k)] = beta_min + k * (beta_max - beta_min) / (steps - 1);
    }
    return grid;
}

std::string now_rfc3339() {
    const std::time_t t = std::time(nullptr);
    std::tm g{};
    gmtime_r(&t, &g);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &g);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

double display_entropy(double nats, bool bits) { return bits ? nats / std::log(2.0) : nats; }

struct CommonOptions {
    std::vector<int> n_list;
    int samples = 100;
    std::uint64_t seed = 1;
    std::string workers; // raw flag text
    bool bits = false;
};

// ---------------------------------------------------------------- sweep ----

struct SweepOptions : CommonOptions {
    double beta = 0.0; // > 0 means single-beta mode
    double beta_min = 0.5, beta_max = 3.0;
    int beta_steps = 6;
    std::string format = "csv";
    std::string out = "skglass_sweep";
    std::string model = "linear-1-over-n";
    bool retain = false;
};

int cmd_sweep(const SweepOptions& o) {
    const std::vector<double> grid =
        o.beta > 0.0 ? std::vector<double>{o.beta}
                     : make_beta_grid(o.beta_min, o.beta_max, o.beta_steps);
    std::vector<InverseTemperature> betas;
    for (double b : grid) betas.emplace_back(b);
    const int workers = parse_workers(o.workers);

    SweepReport report;
    report.generated_at = now_rfc3339();
    report.master_seed = o.seed;
    report.sample_count = o.samples;
    report.n_list = o.n_list;
    report.betas = grid;
    report.extrapolation_model = o.model;
    report.predictions = predictions();

    for (int n : o.n_list) {
        EnsembleConfig cfg;
        cfg.n = n;
        cfg.betas = betas;
        cfg.sample_count = o.samples;
        cfg.master_seed = o.seed;
        cfg.worker_count = workers;
        if (o.retain) cfg.retain_samples = true;
        const auto ens = ensemble_observables(cfg);
        for (std::size_t b = 0; b < grid.size(); ++b) {
            SweepRow row;
            row.n = n;
            row.beta = grid[b];
            row.f_mean = ens.f[b].mean;
            row.f_se = ens.f[b].std_error;
            row.s_mean = ens.s[b].mean;
            row.s_se = ens.s[b].std_error;
            row.u_mean = ens.u[b].mean;
            row.u_se = ens.u[b].std_error;
            report.rows.push_back(row);
        }
    }

    std::set<int> distinct(o.n_list.begin(), o.n_list.end());
    if (distinct.size() >= 3) {
        for (std::size_t b = 0; b < grid.size(); ++b) {
            std::vector<double> means, ses;
            for (std::size_t i = 0; i < o.n_list.size(); ++i) {
                means.push_back(report.rows[i * grid.size() + b].s_mean);
                ses.push_back(report.rows[i * grid.size() + b].s_se);
            }
            report.extrapolation.push_back(
                {grid[b], extrapolate_entropy(o.n_list, means, ses)});
        }
    }

    if (o.format == "csv" || o.format == "both") {
        const std::string path = o.out + ".csv";
        write_file(path, to_csv(report.rows));
        std::cout << "wrote " << path << " (" << report.rows.size() << " rows)\n";
    }
    if (o.format == "json" || o.format == "both") {
        const std::string path = o.out + ".json";
        write_file(path, to_json(report));
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

// ------------------------------------------------------------- validate ----

struct ValidateOptions : CommonOptions {
    int instances = 12;
    bool force_distribution = false;
};

struct CheckOutcome {
    std::string name;
    int cases = 0;
    bool passed = true;
    std::string failure;
};

void report_check(std::vector<CheckOutcome>& all, CheckOutcome c) {
    if (c.passed) {
        std::cout << "[PASS] " << c.name << " (" << c.cases << " cases)\n";
    } else {
        std::cout << "[FAIL] " << c.name << " " << c.failure << "\n";
    }
    all.push_back(std::move(c));
}

int cmd_validate(const ValidateOptions& o) {
    const double beta_star = 4.0 * std::log(2.0);

    if (o.force_distribution) {
        // Deliberately exercises the materialization path so oversized n
        // surfaces the resource cap.
        const int n = o.n_list.empty() ? 8 : o.n_list[0];
        const auto couplings = sample_couplings(n, derive_seed(o.seed, 999));
        gibbs_distribution(couplings, InverseTemperature(1.0));
    }

    const std::vector<int> enum_ns =
        o.n_list.empty() ? std::vector<int>{2, 3, 4, 6, 8, 10, 12} : o.n_list;
    std::vector<int> dist_ns;
    for (int n : enum_ns) {
        if (n <= kMaxDistributionSites) dist_ns.push_back(n);
    }
    if (dist_ns.empty()) dist_ns = {8};

    std::vector<CheckOutcome> outcomes;
    auto fail_tuple = [](int n, std::uint64_t seed, double beta, double residual) {
        return strf("n=%d seed=%llu beta=%.6f residual=%.3e", n,
                    static_cast<unsigned long long>(seed), beta, residual);
    };

    { // 1: entropy via -sum p log p equals log Z + beta <H>
        CheckOutcome c{.name = "entropy_identity"};
        const std::vector<double> betas = {0.1, 1.0, beta_star, 6.0};
        for (int i = 0; i < o.instances && c.passed; ++i) {
            const int n = dist_ns[static_cast<std::size_t>(i) % dist_ns.size()];
            const std::uint64_t seed = derive_seed(o.seed, 100 + i);
            const auto couplings = sample_couplings(n, seed);
            for (double b : betas) {
                const auto dist = gibbs_distribution(couplings, InverseTemperature(b));
                KahanSum direct;
                for (double p : dist.probabilities) {
                    if (p > 0.0) direct.add(-p * std::log(p));
                }
                const auto point =
                    enumerate_observables(couplings, {InverseTemperature(b)}).points[0];
                const double residual = std::abs(direct.value() - point.entropy);
                ++c.cases;
                if (residual > 1e-9 * n) {
                    c.passed = false;
                    c.failure = fail_tuple(n, seed, b, residual);
                    break;
                }
            }
        }
        report_check(outcomes, std::move(c));
    }

    { // 2: log mu_beta = (beta/beta1) log mu_beta1 + (beta/beta1) log Z(beta1) - log Z(beta)
        CheckOutcome c{.name = "functional_equation"};
        const std::vector<std::pair<double, double>> pairs = {
            {beta_star, 1.0}, {2.0, 1.0}, {0.3, 1.0}, {2.0, 2.0}};
        for (int i = 0; i < o.instances && c.passed; ++i) {
            const int n = dist_ns[static_cast<std::size_t>(i) % dist_ns.size()];
            const std::uint64_t seed = derive_seed(o.seed, 200 + i);
            const auto couplings = sample_couplings(n, seed);
            for (const auto& [b2, b1] : pairs) {
                const double residual = functional_equation_residual(
                    couplings, InverseTemperature(b2), InverseTemperature(b1));
                ++c.cases;
                if (residual > 1e-10) {
                    c.passed = false;
                    c.failure = fail_tuple(n, seed, b2, residual);
                    break;
                }
            }
        }
        report_check(outcomes, std::move(c));
    }

    { // 3: direct KL sum vs (beta1-beta2)<H>_2 + log Z1 - log Z2; KL >= 0
        CheckOutcome c{.name = "kl_two_route"};
        const std::vector<std::pair<double, double>> pairs = {
            {beta_star, 1.0}, {2.0, 1.0}, {0.3, 1.0}};
        for (int i = 0; i < o.instances && c.passed; ++i) {
            const int n = dist_ns[static_cast<std::size_t>(i) % dist_ns.size()];
            const std::uint64_t seed = derive_seed(o.seed, 300 + i);
            const auto couplings = sample_couplings(n, seed);
            for (const auto& [b2, b1] : pairs) {
                const double direct = relative_entropy(couplings, InverseTemperature(b2),
                                                       InverseTemperature(b1));
                const auto pts = enumerate_observables(
                    couplings, {InverseTemperature(b1), InverseTemperature(b2)});
                const double route_b =
                    (b1 - b2) * pts.points[1].mean_h + pts.points[0].log_z - pts.points[1].log_z;
                const double residual = std::abs(direct - route_b);
                ++c.cases;
                if (residual > 1e-9 || direct < 0.0) {
                    c.passed = false;
                    c.failure = fail_tuple(n, seed, b2, residual);
                    break;
                }
            }
        }
        report_check(outcomes, std::move(c));
    }

    { // 4: KL to uniform equals n log2 - S
        CheckOutcome c{.name = "kl_uniform_complement"};
        for (int i = 0; i < o.instances && c.passed; ++i) {
            const int n = dist_ns[static_cast<std::size_t>(i) % dist_ns.size()];
            const std::uint64_t seed = derive_seed(o.seed, 400 + i);
            const auto couplings = sample_couplings(n, seed);
            for (double b : {0.5, 1.0, beta_star}) {
                const double kl = relative_entropy_uniform(couplings, InverseTemperature(b));
                const auto point =
                    enumerate_observables(couplings, {InverseTemperature(b)}).points[0];
                const double residual = std::abs(kl - (n * std::log(2.0) - point.entropy));
                ++c.cases;
                if (residual > 1e-9) {
                    c.passed = false;
                    c.failure = fail_tuple(n, seed, b, residual);
                    break;
                }
            }
        }
        report_check(outcomes, std::move(c));
    }

    { // 5: KL/n = -S(beta_star)/n - cross_entropy_term
        CheckOutcome c{.name = "cross_entropy_decomposition"};
        for (int i = 0; i < o.instances && c.passed; ++i) {
            const int n = dist_ns[static_cast<std::size_t>(i) % dist_ns.size()];
            const std::uint64_t seed = derive_seed(o.seed, 500 + i);
            const auto couplings = sample_couplings(n, seed);
            const double kl =
                relative_entropy(couplings, InverseTemperature(beta_star), InverseTemperature(1.0));
            const double cross = cross_entropy_term(couplings, InverseTemperature(beta_star),
                                                    InverseTemperature(1.0));
            const auto point =
                enumerate_observables(couplings, {InverseTemperature(beta_star)}).points[0];
            const double residual = std::abs(kl / n + point.entropy / n + cross);
            ++c.cases;
            if (residual > 1e-9) {
                c.passed = false;
                c.failure = fail_tuple(n, seed, beta_star, residual);
            }
        }
        report_check(outcomes, std::move(c));
    }

    std::vector<InverseTemperature> grid;
    for (int k = 0; k < 40; ++k) grid.emplace_back(0.1 + k * (4.0 - 0.1) / 39.0);

    { // 6: entropy non-increasing in beta
        CheckOutcome c{.name = "entropy_monotone"};
        for (int i = 0; i < o.instances && c.passed; ++i) {
            const int n = enum_ns[static_cast<std::size_t>(i) % enum_ns.size()];
            const std::uint64_t seed = derive_seed(o.seed, 600 + i);
            const auto result = enumerate_observables(sample_couplings(n, seed), grid);
            ++c.cases;
            for (std::size_t k = 1; k < grid.size(); ++k) {
                if (result.points[k].entropy > result.points[k - 1].entropy + 1e-9) {
                    c.passed = false;
                    c.failure = fail_tuple(n, seed, grid[k].value,
                                           result.points[k].entropy -
                                               result.points[k - 1].entropy);
                    break;
                }
            }
        }
        report_check(outcomes, std::move(c));
    }

    { // 7: log Z convex in beta (second differences on a uniform grid)
        CheckOutcome c{.name = "logz_convex"};
        for (int i = 0; i < o.instances && c.passed; ++i) {
            const int n = enum_ns[static_cast<std::size_t>(i) % enum_ns.size()];
            const std::uint64_t seed = derive_seed(o.seed, 700 + i);
            const auto result = enumerate_observables(sample_couplings(n, seed), grid);
            ++c.cases;
            for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
                const double second = result.points[k - 1].log_z - 2.0 * result.points[k].log_z +
                                      result.points[k + 1].log_z;
                if (second < -1e-9) {
                    c.passed = false;
                    c.failure = fail_tuple(n, seed, grid[k].value, second);
                    break;
                }
            }
        }
        report_check(outcomes, std::move(c));
    }

    { // 8: quenched mean <= annealed mean within 3 combined SE
        CheckOutcome c{.name = "jensen_ordering"};
        EnsembleConfig cfg;
        cfg.n = 8;
        cfg.betas = {InverseTemperature(0.5), InverseTemperature(1.0)};
        cfg.sample_count = o.samples;
        cfg.master_seed = derive_seed(o.seed, 800);
        cfg.worker_count = parse_workers(o.workers);
        const auto quenched = quenched_free_energy(cfg);
        const auto annealed = annealed_free_energy_empirical(cfg);
        for (std::size_t b = 0; b < cfg.betas.size(); ++b) {
            const double combined = 3.0 * std::hypot(quenched[b].std_error,
                                                     annealed[b].std_error);
            ++c.cases;
            if (quenched[b].mean > annealed[b].value + combined) {
                c.passed = false;
                c.failure = fail_tuple(cfg.n, cfg.master_seed, cfg.betas[b].value,
                                       quenched[b].mean - annealed[b].value);
                break;
            }
        }
        report_check(outcomes, std::move(c));
    }

    { // 9: independent direct-sum recomputation at n <= 4
        CheckOutcome c{.name = "naive_oracle_equivalence"};
        for (int i = 0; i < o.instances && c.passed; ++i) {
            const int n = 2 + i % 3;
            const std::uint64_t seed = derive_seed(o.seed, 900 + i);
            const auto couplings = sample_couplings(n, seed);
            for (double b : {0.7, 1.0, beta_star}) {
                long double z = 0.0L, sum_plogp = 0.0L;
                std::vector<long double> energies(std::size_t{1} << n);
                for (std::uint64_t idx = 0; idx < energies.size(); ++idx) {
                    long double e = 0.0L;
                    for (int p = 0; p < n; ++p) {
                        for (int q = p + 1; q < n; ++q) {
                            const double sp = (idx >> p) & 1 ? 1.0 : -1.0;
                            const double sq = (idx >> q) & 1 ? 1.0 : -1.0;
                            e -= couplings.at(p, q) * sp * sq;
                        }
                    }
                    e /= std::sqrt(static_cast<long double>(n));
                    energies[idx] = e;
                    z += std::exp(static_cast<long double>(-b) * e);
                }
                for (long double e : energies) {
                    const long double p = std::exp(static_cast<long double>(-b) * e) / z;
                    sum_plogp -= p * std::log(p);
                }
                const auto point =
                    enumerate_observables(couplings, {InverseTemperature(b)}).points[0];
                const double log_z_gap =
                    std::abs(static_cast<double>(std::log(z)) - point.log_z);
                const double entropy_gap =
                    std::abs(static_cast<double>(sum_plogp) - point.entropy);
                ++c.cases;
                if (log_z_gap > 1e-10 || entropy_gap > 1e-10) {
                    c.passed = false;
                    c.failure = fail_tuple(n, seed, b, std::max(log_z_gap, entropy_gap));
                    break;
                }
            }
        }
        report_check(outcomes, std::move(c));
    }

    int failed = 0;
    for (const auto& c : outcomes) {
        if (!c.passed) ++failed;
    }
    if (failed > 0) {
        std::cout << failed << " identity check(s) failed\n";
        return 1;
    }
    std::cout << "all " << outcomes.size() << " identity checks passed\n";
    return 0;
}

// -------------------------------------------------------------- predict ----

int cmd_predict(const CommonOptions& o) {
    const auto p = predictions();
    const char* unit = o.bits ? "bits" : "nats";
    std::cout << "prediction constants (entropic quantities in " << unit << ")\n";
    auto row = [&](const char* name, double v, bool entropic = false) {
        std::cout << strf("  %-26s %12.6f\n", name, entropic ? display_entropy(v, o.bits) : v);
    };
    row("beta1", p.beta1);
    row("beta_star", p.beta_star);
    row("f_beta1", p.f_beta1);
    row("f_beta_star", p.f_beta_star);
    row("annealed_f_beta_star", p.annealed_f_beta_star);
    row("alpha_infinity", p.alpha_infinity);
    row("a_infinity", p.a_infinity);
    row("kl_prediction", p.kl_prediction, true);
    row("cross_entropy_prediction", p.cross_entropy_prediction, true);
    row("kl_uniform_at_beta_star", p.kl_uniform_at_beta_star, true);
    row("entropy_at_beta_star", p.entropy_at_beta_star, true);
    row("spherical_bound", p.spherical_bound);

    if (o.n_list.empty()) return 0;

    const int workers = parse_workers(o.workers);
    const InverseTemperature beta1(1.0), beta_star(p.beta_star);

    struct PerN {
        EnsembleStats f1, fs, ss;
        std::vector<double> f1_samples, fs_samples;
    };
    std::vector<PerN> per_n;
    for (int n : o.n_list) {
        EnsembleConfig cfg;
        cfg.n = n;
        cfg.betas = {beta1, beta_star};
        cfg.sample_count = o.samples;
        cfg.master_seed = o.seed;
        cfg.worker_count = workers;
        cfg.retain_samples = true;
        auto ens = ensemble_observables(cfg);
        per_n.push_back({ens.f[0], ens.f[1], ens.s[1], std::move(ens.samples.f[0]),
                         std::move(ens.samples.f[1])});
    }

    std::cout << "\nentropy at beta_star by size (samples=" << o.samples << ")\n";
    for (std::size_t i = 0; i < o.n_list.size(); ++i) {
        std::cout << strf("  s_row n=%d mean=%.6f se=%.6f\n", o.n_list[i],
                          display_entropy(per_n[i].ss.mean, o.bits),
                          display_entropy(per_n[i].ss.std_error, o.bits));
    }

    // Distribution-path densities at the largest size, one slot per sample.
    const std::size_t largest = static_cast<std::size_t>(
        std::max_element(o.n_list.begin(), o.n_list.end()) - o.n_list.begin());
    const int n_big = o.n_list[largest];
    std::vector<double> alpha(static_cast<std::size_t>(o.samples));
    std::vector<double> kl(static_cast<std::size_t>(o.samples));
    std::vector<double> cross(static_cast<std::size_t>(o.samples));
    std::vector<double> kl_uniform(static_cast<std::size_t>(o.samples));
    parallel_for(o.samples, resolve_worker_count(workers), [&](int i) {
        const auto couplings = sample_couplings(n_big, derive_seed(o.seed, i));
        const auto idx = static_cast<std::size_t>(i);
        alpha[idx] = alpha_n(couplings, beta_star, beta1);
        kl[idx] = relative_entropy(couplings, beta_star, beta1) / n_big;
        cross[idx] = cross_entropy_term(couplings, beta_star, beta1);
        kl_uniform[idx] = relative_entropy_uniform(couplings, beta_star) / n_big;
    });

    std::cout << strf("\ncomparison at n=%d (finite-n mean, limit, gap, se)\n", n_big);
    auto compare = [&](const char* name, double mean_v, double se_v, double limit,
                       bool entropic = false) {
        if (entropic) {
            mean_v = display_entropy(mean_v, o.bits);
            se_v = display_entropy(se_v, o.bits);
            limit = display_entropy(limit, o.bits);
        }
        std::cout << strf("  %-24s %12.6f %12.6f %12.6f %10.6f\n", name, mean_v, limit,
                          mean_v - limit, se_v);
    };
    const auto& big = per_n[largest];
    compare("f_beta1", big.f1.mean, big.f1.std_error, p.f_beta1);
    compare("f_beta_star", big.fs.mean, big.fs.std_error, p.f_beta_star);
    compare("s_beta_star", big.ss.mean, big.ss.std_error, 0.0, true);
    compare("alpha_n", mean(alpha), standard_error(alpha), p.alpha_infinity);
    compare("kl_density", mean(kl), standard_error(kl), p.kl_prediction, true);
    compare("cross_entropy_density", mean(cross), standard_error(cross),
            p.cross_entropy_prediction, true);
    compare("kl_uniform_density", mean(kl_uniform), standard_error(kl_uniform),
            p.kl_uniform_at_beta_star, true);

    std::set<int> distinct(o.n_list.begin(), o.n_list.end());
    if (distinct.size() >= 3) {
        std::vector<double> means, ses;
        for (const auto& pn : per_n) {
            means.push_back(pn.ss.mean);
            ses.push_back(pn.ss.std_error);
        }
        const auto fit = extrapolate_entropy(o.n_list, means, ses);
        std::cout << strf(
            "\nextrapolation s(beta_star): intercept=%.6f ci=[%.6f,%.6f] slope=%.6f "
            "model=linear-1-over-n paper_limit=0.000000\n",
            display_entropy(fit.intercept, o.bits), display_entropy(fit.ci_low, o.bits),
            display_entropy(fit.ci_high, o.bits), display_entropy(fit.slope, o.bits));
    }
    return 0;
}

// ----------------------------------------------------------- zero-cross ----

struct ZeroCrossOptions : CommonOptions {
    double beta_min = 1.0, beta_max = 3.2;
    double tolerance = 0.01;
    bool synthetic_rem = false;
};

int cmd_zero_cross(const ZeroCrossOptions& o) {
    if (o.n_list.size() < 3) throw std::invalid_argument("zero-cross needs --n-list with >= 3 sizes");
    const int workers = parse_workers(o.workers);

    std::function<ExtrapolationResult(double)> intercept_at;
    if (o.synthetic_rem) {
        // Known-root oracle: s_n(beta) = max(0, log2 - beta^2/4) + 0.8/n.
        intercept_at = [&](double beta) {
            std::vector<double> means, ses;
            for (int n : o.n_list) {
                means.push_back(rem_entropy(InverseTemperature(beta)) + 0.8 / n);
                ses.push_back(1e-6);
            }
            return extrapolate_entropy(o.n_list, means, ses);
        };
    } else {
        intercept_at = [&, workers](double beta) {
            std::vector<double> means, ses;
            for (int n : o.n_list) {
                EnsembleConfig cfg;
                cfg.n = n;
                cfg.betas = {InverseTemperature(beta)};
                cfg.sample_count = o.samples;
                cfg.master_seed = o.seed;
                cfg.worker_count = workers;
                cfg.retain_samples = false;
                const auto stats = quenched_entropy(cfg);
                means.push_back(stats[0].mean);
                ses.push_back(stats[0].std_error);
            }
            return extrapolate_entropy(o.n_list, means, ses);
        };
    }

    const auto result = zero_cross(intercept_at, o.beta_min, o.beta_max, o.tolerance);
    if (!result.crossed) {
        std::cout << strf(
            "no zero crossing in [%.6f, %.6f]: intercept(low)=%.6f intercept(high)=%.6f "
            "(evaluations=%d)\n",
            o.beta_min, o.beta_max, result.intercept_at_low, result.intercept_at_high,
            result.evaluations);
        return 1;
    }
    const double beta_star = 4.0 * std::log(2.0);
    std::cout << strf(
        "zero crossing beta=%.6f ci=[%.6f,%.6f] evaluations=%d beta_star=%.6f "
        "distance_to_beta_star=%.6f\n",
        result.beta_cross, result.ci_low, result.ci_high, result.evaluations, beta_star,
        result.beta_cross - beta_star);
    return 0;
}

// ------------------------------------------------------------------ rem ----

int cmd_rem(const CommonOptions& o) {
    const double beta_c = rem_beta_c();
    const double beta_star = 4.0 * std::log(2.0);
    std::cout << strf("REM thermodynamics (entropy in %s)\n", o.bits ? "bits" : "nats");
    std::cout << strf("  beta_c               %12.6f\n", beta_c);
    std::cout << strf("  beta_star            %12.6f\n", beta_star);
    std::cout << strf("  beta_star - beta_c^2 %12.3e (expected 0 within 1e-12)\n",
                      beta_star - beta_c * beta_c);
    std::cout << "  beta        f_rem       s_rem\n";
    for (int k = 1; k <= 16; ++k) {
        const InverseTemperature b(0.25 * k);
        std::cout << strf("  %-8.4f %10.6f %11.6f\n", b.value, rem_free_energy(b),
                          display_entropy(rem_entropy(b), o.bits));
    }

    if (o.n_list.empty()) return 0;

    const int workers = parse_workers(o.workers);
    std::vector<SkEntropyRow> table;
    for (int n : o.n_list) {
        EnsembleConfig cfg;
        cfg.n = n;
        cfg.betas = {InverseTemperature(beta_c), InverseTemperature(beta_star)};
        cfg.sample_count = o.samples;
        cfg.master_seed = o.seed;
        cfg.worker_count = workers;
        cfg.retain_samples = false;
        const auto stats = quenched_entropy(cfg);
        for (const auto& st : stats) {
            table.push_back({n, st.beta, st.mean, st.std_error});
        }
    }
    const auto report = sk_vs_rem_report(table);
    std::cout << strf("\nSK vs REM entropy density (samples=%d)\n", o.samples);
    std::cout << "  n     beta       sk_s       sk_se      rem_s\n";
    for (const auto& row : report.rows) {
        std::cout << strf("  %-4d %9.6f %10.6f %10.6f %10.6f\n", row.n, row.beta,
                          display_entropy(row.sk_entropy_mean, o.bits),
                          display_entropy(row.sk_entropy_std_error, o.bits),
                          display_entropy(row.rem_entropy, o.bits));
    }
    return 0;
}

// ------------------------------------------------------------------- gs ----

struct GsOptions : CommonOptions {
    int restarts = 20;
};

int cmd_gs(const GsOptions& o) {
    if (o.n_list.size() != 1) throw std::invalid_argument("gs needs a single --n");
    const int n = o.n_list[0];
    const AnnealSchedule schedule;
    int matched = 0;
    bool undercut = false;

    std::cout << "  sample  exact_energy        anneal_energy       match\n";
    for (int i = 0; i < o.samples; ++i) {
        const auto couplings = sample_couplings(n, derive_seed(o.seed, i));
        const auto anneal = simulated_annealing_ground_state(
            couplings, schedule, o.restarts, derive_seed(o.seed, o.samples + i));
        if (n <= kMaxEnumerationSites) {
            const auto exact =
                enumerate_observables(couplings, {InverseTemperature(1.0)}).ground_state;
            const bool match = anneal.energy == exact.min_energy;
            if (match) ++matched;
            if (anneal.energy < exact.min_energy) undercut = true;
            std::cout << strf("  %-6d %18.12f  %18.12f  %s\n", i, exact.min_energy,
                              anneal.energy, match ? "yes" : "NO");
        } else {
            std::cout << strf("  %-6d (beyond enumeration cap)  %18.12f  -\n", i, anneal.energy);
        }
    }
    if (n <= kMaxEnumerationSites) {
        std::cout << strf("matched %d/%d instances (restarts=%d)\n", matched, o.samples,
                          o.restarts);
        if (undercut) {
            std::cout << "error: annealing returned an energy below the exact minimum\n";
            return 1;
        }
    }
    return 0;
}

// ------------------------------------------------------------------- mc ----

struct McOptions : CommonOptions {
    double beta = 1.0;
    int sweeps = 20000;
    int burn_in = 2000;
    bool integrate = false;
    double grid_step = 0.05;
};

int cmd_mc(const McOptions& o) {
    if (o.n_list.size() != 1) throw std::invalid_argument("mc needs a single --n");
    const int n = o.n_list[0];
    const auto couplings = sample_couplings(n, derive_seed(o.seed, 0));
    const bool have_exact = n <= 24;

    ChainConfig cfg;
    cfg.sweeps = o.sweeps;
    cfg.burn_in = o.burn_in;
    cfg.seed = derive_seed(o.seed, 1);

    if (!o.integrate) {
        cfg.beta = InverseTemperature(o.beta);
        const auto est = metropolis(couplings, cfg);
        std::cout << strf("mc n=%d beta=%.4f u=%.6f se=%.6f acceptance=%.4f\n", n, o.beta,
                          est.mean_energy_density, est.std_error, est.acceptance_rate);
        if (have_exact) {
            const auto point =
                enumerate_observables(couplings, {InverseTemperature(o.beta)}).points[0];
            const double exact_u = point.mean_h / n;
            std::cout << strf("exact u=%.6f gap=%.6f gap_over_se=%.2f\n", exact_u,
                              est.mean_energy_density - exact_u,
                              est.std_error > 0.0
                                  ? (est.mean_energy_density - exact_u) / est.std_error
                                  : 0.0);
        }
        return 0;
    }

    if (o.grid_step <= 0.0) throw std::invalid_argument("--grid-step must be positive");
    std::vector<double> grid;
    if (o.beta <= 0.05) {
        grid = {o.beta};
    } else {
        const int segments = std::max(1, static_cast<int>(std::ceil((o.beta - 0.05) / o.grid_step)));
        for (int k = 0; k <= segments; ++k) {
            grid.push_back(0.05 + k * (o.beta - 0.05) / segments);
        }
    }
    const auto points = thermo_integration_free_energy(couplings, grid, cfg);
    const auto& last = points.back();
    const auto s = mc_entropy(InverseTemperature(last.beta), {last.f, last.f_std_error},
                              {last.u, last.u_std_error});
    std::cout << strf("thermo n=%d beta=%.4f f=%.6f f_se=%.6f u=%.6f u_se=%.6f s=%.6f s_se=%.6f\n",
                      n, last.beta, last.f, last.f_std_error, last.u, last.u_std_error,
                      display_entropy(s.value, o.bits), display_entropy(s.std_error, o.bits));
    if (have_exact) {
        const auto point =
            enumerate_observables(couplings, {InverseTemperature(last.beta)}).points[0];
        std::cout << strf("exact f=%.6f s=%.6f f_gap=%.6f s_gap=%.6f\n",
                          point.free_energy_density, display_entropy(point.entropy / n, o.bits),
                          last.f - point.free_energy_density,
                          display_entropy(s.value - point.entropy / n, o.bits));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the mean-field Ising spin glass"};
    app.require_subcommand(1);

    auto add_common = [](CLI::App* cmd, CommonOptions& o, bool with_bits = true) {
        cmd->add_option("--n", o.n_list, "system size (repeatable)")->delimiter(',');
        cmd->add_option("--n-list", o.n_list, "comma-separated system sizes")->delimiter(',');
        cmd->add_option("--samples", o.samples, "disorder samples");
        cmd->add_option("--seed", o.seed, "master seed");
        cmd->add_option("--workers", o.workers, "worker count or 'auto'");
        if (with_bits) cmd->add_flag("--bits", o.bits, "display entropies in bits");
    };

    SweepOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "disorder-averaged f/s/u over an n x beta grid");
    add_common(sweep, sweep_opts, false);
    sweep->add_option("--beta", sweep_opts.beta, "single beta (overrides the grid)");
    sweep->add_option("--beta-min", sweep_opts.beta_min, "grid start");
    sweep->add_option("--beta-max", sweep_opts.beta_max, "grid end");
    sweep->add_option("--beta-steps", sweep_opts.beta_steps, "grid size");
    sweep->add_option("--format", sweep_opts.format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    sweep->add_option("--out", sweep_opts.out, "output path prefix");
    sweep->add_option("--model", sweep_opts.model, "extrapolation model")
        ->check(CLI::IsMember({"linear-1-over-n"}));
    sweep->add_flag("--retain-samples", sweep_opts.retain, "keep per-sample values in memory");

    ValidateOptions validate_opts;
    validate_opts.seed = 20260814;
    auto* validate = app.add_subcommand("validate", "exact-identity suite on seeded instances");
    add_common(validate, validate_opts, false);
    validate->add_option("--instances", validate_opts.instances, "instances per check");
    validate->add_flag("--distribution", validate_opts.force_distribution,
                       "force a distribution materialization at --n");

    CommonOptions predict_opts;
    predict_opts.n_list.clear();
    auto* predict = app.add_subcommand("predict", "limit constants and finite-n comparison");
    add_common(predict, predict_opts);

    ZeroCrossOptions zc_opts;
    auto* zc = app.add_subcommand("zero-cross", "locate the extrapolated entropy zero");
    add_common(zc, zc_opts, false);
    zc->add_option("--beta-min", zc_opts.beta_min, "bracket start");
    zc->add_option("--beta-max", zc_opts.beta_max, "bracket end");
    zc->add_option("--tol", zc_opts.tolerance, "bisection tolerance in beta");
    zc->add_flag("--synthetic-rem", zc_opts.synthetic_rem,
                 "use the synthetic REM-form entropy model with a known root");

    CommonOptions rem_opts;
    rem_opts.n_list.clear();
    auto* rem = app.add_subcommand("rem", "random energy model curves and SK comparison");
    add_common(rem, rem_opts);

    GsOptions gs_opts;
    gs_opts.samples = 5;
    auto* gs = app.add_subcommand("gs", "exact vs annealing ground states");
    add_common(gs, gs_opts, false);
    gs->add_option("--restarts", gs_opts.restarts, "annealing restarts per instance");

    McOptions mc_opts;
    mc_opts.n_list = {14};
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimates against exact enumeration");
    add_common(mc, mc_opts);
    mc->add_option("--beta", mc_opts.beta, "target beta");
    mc->add_option("--sweeps", mc_opts.sweeps, "total sweeps");
    mc->add_option("--burn-in", mc_opts.burn_in, "discarded sweeps");
    mc->add_flag("--integrate", mc_opts.integrate, "thermodynamic integration up to --beta");
    mc->add_option("--grid-step", mc_opts.grid_step, "integration grid step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep->parsed()) {
            if (sweep_opts.n_list.empty()) sweep_opts.n_list = {8};
            return cmd_sweep(sweep_opts);
        }
        if (validate->parsed()) return cmd_validate(validate_opts);
        if (predict->parsed()) return cmd_predict(predict_opts);
        if (zc->parsed()) return cmd_zero_cross(zc_opts);
        if (rem->parsed()) return cmd_rem(rem_opts);
        if (gs->parsed()) return cmd_gs(gs_opts);
        if (mc->parsed()) return cmd_mc(mc_opts);
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
