#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "weylmod/acceptance.hpp"
#include "weylmod/sweep.hpp"

namespace fs = std::filesystem;
using namespace weylmod;

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "JSON config file");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
}

SweepConfig resolve(const Common& c) {
    SweepConfig cfg = c.config.empty() ? SweepConfig::from_json(nlohmann::json::object()) : SweepConfig::load(c.config);
    if (!c.out.empty()) cfg.out = c.out;
    if (c.seed) cfg.seed = *c.seed;
    if (c.jobs) cfg.jobs = *c.jobs;
    fs::create_directories(cfg.out);
    return cfg;
}

void write_summary(const SweepConfig& cfg, const std::string& verb, nlohmann::json results) {
    nlohmann::json s{{"schema", sweep_schema_version}, {"verb", verb}, {"config", cfg.to_json()}, {"results", results}};
    const auto path = fs::path(cfg.out) / (verb + ".json");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << s.dump(2) << '\n';
    std::cout << "wrote " << path.string() << '\n';
}

int sweep_ratio(const Common& c) {
    const auto cfg = resolve(c);
    const auto sweeps = run_gaussian_ratio_sweep(cfg);
    write_ratio_csv(sweeps, (fs::path(cfg.out) / "sweep-ratio.csv").string());
    nlohmann::json res = nlohmann::json::array();
    for (std::size_t i = 0; i < sweeps.size(); ++i) {
        auto j = sweeps[i].to_json();
        if (cfg.numeric.enabled && cfg.d == 1) {
            const auto num = numeric_gaussian_ratio(sweeps[i].triple, cfg.numeric);
            RVec closed;
            for (double l : cfg.numeric.lambdas) closed.push_back(gaussian_ratio(l, sweeps[i].triple, 1).ratio);
            j["numeric_ratio"] = num;
            j["closed_ratio"] = closed;
            j["numeric_slope"] = fit_slope(cfg.numeric.lambdas, num);
            j["closed_slope"] = fit_slope(cfg.numeric.lambdas, closed);
        }
        res.push_back(j);
        std::cout << "triple " << i << ": large-lambda slope " << sweeps[i].slope_large << " (expected "
                  << sweeps[i].triple.large_lambda_slope() << "), small-lambda slope " << sweeps[i].slope_small
                  << " (expected " << sweeps[i].triple.small_lambda_slope() << ")\n";
    }
    write_summary(cfg, "sweep-ratio", res);
    return 0;
}

int counterexample(const Common& c) {
    const auto cfg = resolve(c);
    const auto rows = run_counterexample(cfg);
    write_counterexample_csv(rows, (fs::path(cfg.out) / "counterexample.csv").string());
    nlohmann::json res = nlohmann::json::array();
    for (const auto& r : rows) {
        res.push_back({{"N", r.N},
                       {"c_q0", r.c_q0},
                       {"c_q1", r.c_q1},
                       {"lower_bound", r.lower_bound},
                       {"m_inf_q0", r.m_inf_q0},
                       {"m_p_q1", r.m_p_q1}});
        std::cout << "N=" << r.N << " M^{inf,q0} " << r.m_inf_q0 << " M^{p,q1} " << r.m_p_q1 << '\n';
    }
    write_summary(cfg, "counterexample", res);
    return 0;
}

int stft_check(const Common& c) {
    const auto cfg = resolve(c);
    const auto rep = run_stfta_check(cfg);
    {
        std::ofstream out(fs::path(cfg.out) / "stft-check.csv");
        out.precision(17);
        out << "x,xi,eta,y,closed_re,closed_im,numeric_re,numeric_im\n";
        for (std::size_t i = 0; i < rep.points.size(); ++i) {
            for (double v : rep.points[i]) out << v << ',';
            out << rep.closed[i].real() << ',' << rep.closed[i].imag() << ',' << rep.numeric[i].real() << ','
                << rep.numeric[i].imag() << '\n';
        }
    }
    std::cout << "max rel err " << rep.max_rel_error << (rep.ok ? " ok" : " FAILED") << '\n';
    write_summary(cfg, "stft-check", rep.to_json());
    return rep.ok ? 0 : 1;
}

int verify_all(const Common& c, const std::vector<int>& only) {
    std::optional<SweepConfig> cfg;
    if (!c.out.empty()) cfg = resolve(c);
    const auto results = run_acceptance(only);
    bool all = true;
    nlohmann::json res = nlohmann::json::array();
    for (const auto& r : results) {
        std::cout << format_result(r) << std::endl;
        all = all && r.pass;
        res.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
    }
    if (cfg) write_summary(*cfg, "verify-all", res);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weyl-product and modulation-space experiments"};
    app.require_subcommand(1);
    Common c;
    std::vector<int> only;
    auto* s1 = app.add_subcommand("sweep-ratio", "Gaussian ratio sweep with fitted slopes");
    auto* s2 = app.add_subcommand("counterexample", "norm growth of the lattice-series counterexample");
    auto* s3 = app.add_subcommand("stft-check", "closed-form STFT of the Wigner symbol against quadrature");
    auto* s4 = app.add_subcommand("verify-all", "run the acceptance criteria");
    for (auto* s : {s1, s2, s3, s4}) add_common(s, c);
    s4->add_option("--only", only, "criterion ids");
    CLI11_PARSE(app, argc, argv);
    try {
        if (*s1) return sweep_ratio(c);
        if (*s2) return counterexample(c);
        if (*s3) return stft_check(c);
        return verify_all(c, only);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
