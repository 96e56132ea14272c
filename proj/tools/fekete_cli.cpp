// Command-line front end: every subcommand emits one RunRecord as JSON on
// stdout and optionally a CSV sidecar (--out). Exit codes: 0 success,
// 2 validation failure, 1 numerical failure or failed verify suite.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fekete/arith.hpp"
#include "fekete/eval.hpp"
#include "fekete/process.hpp"
#include "fekete/quad.hpp"
#include "fekete/util/parallel.hpp"
#include "fekete/util/rng.hpp"
#include "fekete/verify.hpp"
#include "fekete/version.hpp"

using json = nlohmann::json;

namespace {

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvWriter {
    std::ofstream out;
    explicit CsvWriter(const std::string& path) : out(path, std::ios::trunc) {
        if (!out) throw std::runtime_error("cannot open CSV output " + path);
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << cells[i];
        }
        out << '\n';
    }
};

std::string cache_dir() {
    const char* env = std::getenv("FEKETE_CACHE_DIR");
    return env != nullptr && *env != '\0' ? std::string(env) : std::string("./.fekete-cache");
}

fekete::LegendreTable checked_table(uint64_t p) {
    if (p < 3 || p % 2 == 0 || !fekete::is_prime(p)) throw std::domain_error("p must be an odd prime");
    const std::filesystem::path dir = cache_dir();
    const std::filesystem::path file = dir / ("fklt_" + std::to_string(p) + ".bin");
    if (std::filesystem::exists(file)) {
        try {
            fekete::LegendreTable t = fekete::load_table(file.string());
            if (t.p == p) return t;
        } catch (const std::exception&) {
            // fall through and rebuild
        }
    }
    fekete::LegendreTable t = fekete::legendre_table(p);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!ec) {
        try {
            fekete::save_table(t, file.string());
        } catch (const std::exception&) {
        }
    }
    return t;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_list(s)) out.push_back(static_cast<int>(v));
    return out;
}

std::vector<fekete::Rectangle> load_rectangles(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open rectangle config " + path);
    json j;
    in >> j;
    std::vector<fekete::Rectangle> out;
    for (const auto& r : j) {
        out.push_back({r.at("re_lo").get<double>(), r.at("re_hi").get<double>(),
                       r.at("im_lo").get<double>(), r.at("im_hi").get<double>()});
    }
    return out;
}

struct RunContext {
    std::string command;
    json params = json::object();
    json values = json::object();
    bool has_value = false;
    double value = 0.0;
    double std_error = 0.0;
    uint64_t n_samples = 0;
    uint64_t seed = 0;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void emit() const {
        json rec;
        rec["command"] = command;
        rec["params"] = params;
        if (has_value) rec["value"] = value;
        if (!values.empty()) rec["values"] = values;
        rec["std_error"] = std_error;
        rec["n_samples"] = n_samples;
        rec["seed"] = seed;
        rec["elapsed_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        rec["version"] = fekete::kVersion;
        std::cout << rec.dump(2) << std::endl;
    }
};

std::vector<uint64_t> odd_primes_upto(uint64_t bound) {
    std::vector<uint64_t> ps;
    for (uint64_t p = 3; p <= bound; p += 2)
        if (fekete::is_prime(p)) ps.push_back(p);
    return ps;
}

int run_verify_suite(RunContext& ctx, const std::string& suite, uint64_t p, int J, int threads) {
    bool pass = false;
    json detail = json::object();
    if (suite == "quadsum") {
        // Quadratic correlation sums, exactly, for every odd prime p' <= p and every shift n.
        pass = true;
        uint64_t checked = 0;
        for (uint64_t pp : odd_primes_upto(p)) {
            const fekete::LegendreTable t = fekete::legendre_table(pp);
            for (uint64_t n = 0; n < pp; ++n) {
                const int64_t expect = n == 0 ? static_cast<int64_t>(pp) - 1 : -1;
                if (fekete::quadratic_correlation(t, static_cast<int64_t>(n)) != expect) {
                    pass = false;
                    detail["failed_p"] = pp;
                    detail["failed_n"] = n;
                    break;
                }
                ++checked;
            }
            if (!pass) break;
        }
        detail["pairs_checked"] = checked;
    } else if (suite == "gauss") {
        pass = true;
        const uint64_t bound = p >= 3 ? p : 199;
        for (uint64_t pp : odd_primes_upto(bound)) {
            const fekete::LegendreTable t = fekete::legendre_table(pp);
            const std::complex<double> gs = fekete::gauss_sum(t);
            const double sq = std::sqrt(static_cast<double>(pp));
            const std::complex<double> expect =
                pp % 4 == 1 ? std::complex<double>(sq, 0.0) : std::complex<double>(0.0, sq);
            if (std::abs(gs - expect) > 1e-9 * sq) {
                pass = false;
                detail["failed_p"] = pp;
                break;
            }
        }
        detail["bound"] = p >= 3 ? p : 199;
    } else if (suite == "parseval") {
        const fekete::LegendreTable t = checked_table(p);
        const fekete::FeketeGridPlan plan(t);
        double sum = 0.0;
        for (int r = 0; r < 4; ++r) {
            const auto row = plan.eval(static_cast<double>(r) / 4.0);
            for (const auto& z : row) sum += std::norm(z);
        }
        const double mean = sum / (4.0 * static_cast<double>(p));
        detail["mean_square"] = mean;
        pass = std::abs(mean - static_cast<double>(p - 1)) <= 1e-6 * static_cast<double>(p);
    } else if (suite == "identity") {
        // arc G against the direct polynomial ratio at pseudo-random (k,t).
        const fekete::LegendreTable t = checked_table(p);
        const std::complex<double> g = fekete::gauss_sum(t);
        pass = true;
        double worst = 0.0;
        for (int i = 0; i < 32; ++i) {
            const uint64_t k = fekete::counter_word(1, 7, i) % p;
            const double tt = 0.02 + 0.96 * fekete::counter_uniform(1, 8, i);
            const fekete::ArcFunction arc(t, k);
            const std::complex<double> lhs = arc.G(tt);
            const std::complex<double> rhs =
                fekete::fekete_horner(t, fekete::unit_e((static_cast<double>(k) + tt) / static_cast<double>(p))) / g;
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-12, std::abs(rhs)));
        }
        detail["max_rel_err"] = worst;
        pass = worst <= 1e-8;
    } else if (suite == "moments") {
        // Brute-force enumeration at J=3 against the exact pairing evaluator.
        const int JJ = 3;
        pass = true;
        double worst = 0.0;
        std::vector<fekete::MomentSpec> battery = {
            {{0.37}, {1}, {1}},        {{0.37}, {2}, {0}},
            {{0.2, 0.7}, {1, 1}, {0, 0}}, {{0.2, 0.7}, {1, 1}, {1, 1}},
            {{0.3}, {2}, {2}},         {{0.1, 0.5, 0.9}, {1, 1, 0}, {0, 1, 1}},
        };
        for (const auto& spec : battery) {
            const std::complex<double> rhs = fekete::moment_rhs_exact(JJ, spec);
            std::complex<double> acc(0.0, 0.0);
            const uint64_t total = uint64_t{1} << (2 * JJ + 1);
            for (uint64_t mask = 0; mask < total; ++mask) {
                fekete::SignPattern pat;
                pat.J = JJ;
                pat.signs.resize(2 * JJ + 1);
                for (int b = 0; b < 2 * JJ + 1; ++b)
                    pat.signs[b] = (mask >> b) & 1 ? int8_t{1} : int8_t{-1};
                std::complex<double> prod(1.0, 0.0);
                for (std::size_t j = 0; j < spec.nodes.size(); ++j) {
                    std::complex<double> G(0.0, 0.0);
                    for (int m = -JJ; m <= JJ; ++m)
                        G += static_cast<double>(pat.sign(m)) * fekete::process_coefficient(m, spec.nodes[j]);
                    for (int i = 0; i < spec.r[j]; ++i) prod *= G;
                    for (int i = 0; i < spec.s[j]; ++i) prod *= std::conj(G);
                }
                acc += prod;
            }
            acc /= static_cast<double>(total);
            worst = std::max(worst, std::abs(acc - rhs));
        }
        detail["max_abs_err"] = worst;
        pass = worst <= 1e-12;
        (void)threads;
        (void)J;
    } else {
        throw std::domain_error("unknown verify suite: " + suite);
    }
    ctx.values["suite"] = suite;
    ctx.values["pass"] = pass;
    ctx.values["detail"] = detail;
    ctx.emit();
    return pass ? 0 : 1;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Fekete polynomial statistics and the limiting random process"};
    app.require_subcommand(1);

    uint64_t p = 1009;
    double q = 2.0;
    int J = 100;
    uint64_t samples = 10000;
    uint64_t seed = 1;
    int nodes = 32;
    int grid = 100;
    int threads = fekete::default_threads();
    std::string mode = "mc";
    std::string out_path;
    std::string rects_path;
    std::string suite;
    std::string t_list = "0.37";
    std::string r_list = "1";
    std::string s_list = "1";
    double t_offset = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--threads", threads, "worker threads");
        cmd->add_option("--out", out_path, "CSV sidecar path");
    };

    CLI::App* c_table = app.add_subcommand("table", "build and cache a Legendre table");
    c_table->add_option("--p", p)->required();
    add_common(c_table);

    CLI::App* c_eval = app.add_subcommand("eval", "evaluate F_p on the arc grid e((k+t)/p)");
    c_eval->add_option("--p", p)->required();
    c_eval->add_option("--t", t_offset, "arc offset in [0,1]");
    add_common(c_eval);

    CLI::App* c_mahler = app.add_subcommand("mahler", "Mahler measure M_0(F_p)/sqrt(p)");
    c_mahler->add_option("--p", p)->required();
    c_mahler->add_option("--nodes", nodes);
    add_common(c_mahler);

    CLI::App* c_norm = app.add_subcommand("norm", "L_q norm M_q(F_p)/sqrt(p)");
    c_norm->add_option("--p", p)->required();
    c_norm->add_option("--q", q);
    c_norm->add_option("--nodes", nodes);
    add_common(c_norm);

    CLI::App* c_zeros = app.add_subcommand("zeros", "circle zero count of F_p");
    c_zeros->add_option("--p", p)->required();
    c_zeros->add_option("--nodes", nodes);
    add_common(c_zeros);

    CLI::App* c_ps = app.add_subcommand("process-sample", "sample G_X^J paths");
    c_ps->add_option("--J", J);
    c_ps->add_option("--samples", samples);
    c_ps->add_option("--seed", seed);
    c_ps->add_option("--grid", grid, "points per path");
    add_common(c_ps);

    CLI::App* c_k0 = app.add_subcommand("k0", "Mahler constant of the limiting process");
    c_k0->add_option("--J", J);
    c_k0->add_option("--samples", samples);
    c_k0->add_option("--seed", seed);
    c_k0->add_option("--nodes", nodes);
    c_k0->add_option("--mode", mode)->check(CLI::IsMember({"exact", "mc"}));
    add_common(c_k0);

    CLI::App* c_kq = app.add_subcommand("kq", "L_q constant of the limiting process");
    c_kq->add_option("--q", q);
    c_kq->add_option("--J", J);
    c_kq->add_option("--samples", samples);
    c_kq->add_option("--seed", seed);
    c_kq->add_option("--nodes", nodes);
    add_common(c_kq);

    CLI::App* c_mom = app.add_subcommand("moments", "joint moments: Fekete side vs process side");
    c_mom->add_option("--p", p)->required();
    c_mom->add_option("--J", J, "process truncation level for the exact side");
    c_mom->add_option("--t", t_list, "comma-separated nodes");
    c_mom->add_option("--r", r_list, "comma-separated exponents");
    c_mom->add_option("--s", s_list, "comma-separated conjugate exponents");
    add_common(c_mom);

    CLI::App* c_dist = app.add_subcommand("dist", "value distribution: Fekete vs process");
    c_dist->add_option("--p", p)->required();
    c_dist->add_option("--J", J);
    c_dist->add_option("--samples", samples);
    c_dist->add_option("--seed", seed);
    c_dist->add_option("--grid", grid, "grid points per arc");
    c_dist->add_option("--rects", rects_path, "rectangle family JSON");
    add_common(c_dist);

    CLI::App* c_ver = app.add_subcommand("verify", "run a named verification suite");
    c_ver->add_option("--suite", suite)->required();
    c_ver->add_option("--p", p);
    c_ver->add_option("--J", J);
    add_common(c_ver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the usage error
        return code == 0 ? 0 : 2;
    }
    CLI::App* sub = app.get_subcommands().front();

    RunContext ctx;
    ctx.command = sub->get_name();
    ctx.seed = seed;
    ctx.n_samples = 1;

    if (sub == c_table) {
        ctx.params = {{"p", p}};
        const fekete::LegendreTable t = checked_table(p);
        int64_t plus = 0;
        for (auto sgn : t.symbols)
            if (sgn > 0) ++plus;
        ctx.values = {{"p", p}, {"residues", plus}, {"cache_dir", cache_dir()}};
        ctx.emit();
    } else if (sub == c_eval) {
        ctx.params = {{"p", p}, {"t", t_offset}};
        const fekete::LegendreTable t = checked_table(p);
        const auto row = fekete::fekete_grid(t, t_offset);
        double sup = 0.0, sumsq = 0.0;
        for (const auto& z : row) {
            sup = std::max(sup, std::abs(z));
            sumsq += std::norm(z);
        }
        ctx.values = {{"sup_abs", sup}, {"mean_square", sumsq / static_cast<double>(p)}};
        if (!out_path.empty()) {
            CsvWriter csv(out_path);
            csv.row({"k", "re", "im"});
            for (uint64_t k = 0; k < p; ++k)
                csv.row({std::to_string(k), csv_num(row[k].real()), csv_num(row[k].imag())});
            ctx.values["csv"] = out_path;
        }
        ctx.emit();
    } else if (sub == c_mahler) {
        ctx.params = {{"p", p}, {"nodes", nodes}};
        fekete::QuadConfig cfg;
        cfg.nodes = nodes;
        const fekete::LegendreTable t = checked_table(p);
        const fekete::MahlerResult r = fekete::mahler_fekete(t, cfg, threads);
        ctx.has_value = true;
        ctx.value = r.estimate.value;
        ctx.n_samples = r.estimate.n_samples;
        ctx.values = {{"log_mean", r.log_mean}, {"error_estimate", r.error_estimate}};
        ctx.emit();
    } else if (sub == c_norm) {
        ctx.params = {{"p", p}, {"q", q}, {"nodes", nodes}};
        fekete::QuadConfig cfg;
        cfg.nodes = nodes;
        const fekete::LegendreTable t = checked_table(p);
        const fekete::LqResult r = fekete::lq_norm_fekete(t, q, cfg, threads);
        ctx.has_value = true;
        ctx.value = r.estimate.value;
        ctx.n_samples = r.estimate.n_samples;
        ctx.values = {{"error_estimate", r.error_estimate}};
        ctx.emit();
    } else if (sub == c_zeros) {
        ctx.params = {{"p", p}, {"nodes", nodes}};
        fekete::QuadConfig cfg;
        cfg.nodes = nodes;
        const fekete::LegendreTable t = checked_table(p);
        const fekete::ZeroCountResult r = fekete::circle_zero_count(t, cfg, threads);
        ctx.has_value = true;
        ctx.value = r.ratio;
        ctx.values = {{"count", r.count}, {"ratio", r.ratio}, {"endpoint_zeros", r.endpoint_zeros}};
        ctx.emit();
    } else if (sub == c_ps) {
        ctx.params = {{"J", J}, {"samples", samples}, {"seed", seed}, {"grid", grid}};
        ctx.n_samples = samples;
        if (!out_path.empty()) {
            CsvWriter csv(out_path);
            csv.row({"sample", "t", "re", "im"});
            for (uint64_t i = 0; i < samples; ++i) {
                const fekete::TruncatedH h(fekete::sample_pattern(J, seed, i));
                for (int gidx = 0; gidx < grid; ++gidx) {
                    const double tt = (gidx + 0.5) / grid;
                    const std::complex<double> G = h.G(tt);
                    csv.row({std::to_string(i), csv_num(tt), csv_num(G.real()), csv_num(G.imag())});
                }
            }
            ctx.values["csv"] = out_path;
        }
        // summary statistic: mean of signs[0] across samples
        double mean0 = 0.0;
        for (uint64_t i = 0; i < samples; ++i)
            mean0 += fekete::sample_pattern(J, seed, i).sign(0);
        ctx.values["mean_sign0"] = mean0 / static_cast<double>(samples);
        ctx.emit();
    } else if (sub == c_k0) {
        ctx.params = {{"J", J}, {"samples", samples}, {"seed", seed}, {"mode", mode}, {"nodes", nodes}};
        fekete::QuadConfig cfg;
        cfg.nodes = nodes;
        const auto m = mode == "exact" ? fekete::Estimate::Mode::exact : fekete::Estimate::Mode::monte_carlo;
        const fekete::K0Result r = fekete::k0_estimate(J, samples, m, seed, cfg, threads);
        ctx.has_value = true;
        ctx.value = r.k0.value;
        ctx.std_error = r.k0.std_error;
        ctx.n_samples = r.k0.n_samples;
        ctx.values = {{"A", r.log_integral.value},
                      {"A_std_error", r.log_integral.std_error},
                      {"resample_incidents", r.resample_incidents}};
        ctx.emit();
    } else if (sub == c_kq) {
        ctx.params = {{"q", q}, {"J", J}, {"samples", samples}, {"seed", seed}, {"nodes", nodes}};
        fekete::QuadConfig cfg;
        cfg.nodes = nodes;
        const fekete::Estimate r = fekete::kq_estimate(q, J, samples, seed, cfg, threads);
        ctx.has_value = true;
        ctx.value = r.value;
        ctx.std_error = r.std_error;
        ctx.n_samples = r.n_samples;
        ctx.emit();
    } else if (sub == c_mom) {
        fekete::MomentSpec spec;
        spec.nodes = parse_list(t_list);
        spec.r = parse_int_list(r_list);
        spec.s = parse_int_list(s_list);
        ctx.params = {{"p", p}, {"J", J}, {"t", t_list}, {"r", r_list}, {"s", s_list}};
        const fekete::LegendreTable t = checked_table(p);
        const std::complex<double> lhs = fekete::moment_lhs(t, spec, threads);
        const std::complex<double> rhs = fekete::moment_rhs_exact(J, spec);
        ctx.has_value = true;
        ctx.value = std::abs(lhs - rhs);
        ctx.values = {{"lhs_re", lhs.real()},
                      {"lhs_im", lhs.imag()},
                      {"rhs_re", rhs.real()},
                      {"rhs_im", rhs.imag()}};
        ctx.emit();
    } else if (sub == c_dist) {
        ctx.params = {{"p", p}, {"J", J}, {"samples", samples}, {"seed", seed}, {"grid", grid}};
        const std::vector<fekete::Rectangle> rects =
            rects_path.empty() ? fekete::default_rectangles() : load_rectangles(rects_path);
        const fekete::LegendreTable t = checked_table(p);
        const fekete::DistReport rep =
            fekete::distribution_compare(t, rects, J, samples, grid, seed, threads);
        ctx.has_value = true;
        ctx.value = rep.max_gap;
        ctx.n_samples = samples;
        json rows = json::array();
        for (std::size_t i = 0; i < rects.size(); ++i) {
            rows.push_back({{"re_lo", rects[i].re_lo},
                            {"re_hi", rects[i].re_hi},
                            {"im_lo", rects[i].im_lo},
                            {"im_hi", rects[i].im_hi},
                            {"empirical", rep.empirical[i]},
                            {"process", rep.process[i]},
                            {"gap", rep.gap[i]}});
        }
        ctx.values = {{"max_gap", rep.max_gap}, {"rects", rows}};
        if (!out_path.empty()) {
            CsvWriter csv(out_path);
            csv.row({"re_lo", "re_hi", "im_lo", "im_hi", "empirical", "process", "gap"});
            for (std::size_t i = 0; i < rects.size(); ++i)
                csv.row({csv_num(rects[i].re_lo), csv_num(rects[i].re_hi), csv_num(rects[i].im_lo),
                         csv_num(rects[i].im_hi), csv_num(rep.empirical[i]), csv_num(rep.process[i]),
                         csv_num(rep.gap[i])});
            ctx.values["csv"] = out_path;
        }
        ctx.emit();
    } else if (sub == c_ver) {
        ctx.params = {{"suite", suite}, {"p", p}, {"J", J}};
        return run_verify_suite(ctx, suite, p, J, threads);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << std::endl;
        return 1;
    }
}
