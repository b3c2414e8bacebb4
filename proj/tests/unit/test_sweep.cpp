#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "weylmod/sweep.hpp"

using namespace weylmod;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("slope formulas") {
    const ExponentTriple t{{1, 1}, {2, 0.5}, {2, 0.5}};
    CHECK(t.large_lambda_slope() == doctest::Approx(-3.0));
    CHECK(t.small_lambda_slope() == doctest::Approx(0.0));
    CHECK(ExponentTriple{}.large_lambda_slope() == doctest::Approx(-0.5));

    const auto s = gaussian_ratio_sweep(t, log_space(1e-4, 1e4, 81), 1);
    CHECK(s.slope_large == doctest::Approx(-3.0).epsilon(0.02));
    CHECK(std::abs(s.slope_small) <= 0.02);
    CHECK(s.admissible);
}

TEST_CASE("gaussian ratio matches the closed forms") {
    const ExponentTriple t{{1.5, 1}, {3, 0.7}, {3, 0.9}};
    for (double l : {0.1, 1.0, 7.0}) {
        const auto r = gaussian_ratio(l, t, 1);
        const double lp = 2 * l / (1 + l * l);
        const double lhs = gaussian_modnorm(lp, 1.5, 1, 1) / (1 + l * l);
        CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-12));
        CHECK(r.ratio == doctest::Approx(lhs / (gaussian_modnorm(l, 3, 0.7, 1) * gaussian_modnorm(l, 3, 0.9, 1))).epsilon(1e-12));
    }
}

TEST_CASE("fit_slope and log_space") {
    const RVec x = log_space(0.1, 10, 5);
    CHECK(x.front() == doctest::Approx(0.1));
    CHECK(x.back() == doctest::Approx(10));
    RVec y;
    for (double v : x) y.push_back(3 * std::pow(v, -1.7));
    CHECK(fit_slope(x, y) == doctest::Approx(-1.7));
}

TEST_CASE("config validation") {
    CHECK_NOTHROW(SweepConfig::from_json(nlohmann::json::object()));
    CHECK_THROWS_AS(SweepConfig::from_json({{"counterexample", {{"q0", 2}, {"q1", 1}}}}), InvalidArgument);
    CHECK_THROWS_AS(SweepConfig::from_json({{"lambda_grid", {1.0, 0.5, 2.0}}}), InvalidArgument);
    CHECK_THROWS_AS(SweepConfig::from_json({{"lambda_grid", {1.0, -2.0}}}), InvalidArgument);
    CHECK_THROWS_AS(SweepConfig::from_json({{"schema", 99}}), InvalidArgument);
    CHECK_THROWS_AS(SweepConfig::from_json({{"stfta", {{"N", 9}}}}), InvalidArgument);
    CHECK_THROWS(SweepConfig::from_json({{"triples", {{{1, 1}, {2, 2}}}}}));

    const auto cfg = SweepConfig::from_json({{"triples", {{{1, 1}, {2, 0.5}, {2, "inf"}}}}, {"seed", 7}});
    const auto again = SweepConfig::from_json(cfg.to_json());
    CHECK(again.to_json() == cfg.to_json());
    CHECK(std::isinf(again.triples[0].e2.q));
}

TEST_CASE("counterexample sequence") {
    const RVec c = counterexample_sequence(64, 1.0);
    CHECK(c.size() == 129);
    CHECK(c[64] == 1.0);
    double h8 = 0.0, h64 = 0.0;
    for (int k = -64; k <= 64; ++k) {
        h64 += c[k + 64];
        if (std::abs(k) <= 8) h8 += c[k + 64];
    }
    // harmonic partial sums grow like 2 log N
    CHECK(h64 - h8 == doctest::Approx(2 * (std::log(65.0 / 9.0))).epsilon(0.05));

    const Grid g(1, 256, 16.0);
    const auto f0 = counterexample_function(g, 0, 1.0);
    CHECK(relative_l2(f0, gaussian_window(g)) <= 1e-14);
}

TEST_CASE("counterexample runs are deterministic and increasing") {
    auto cfg = SweepConfig::from_json({{"counterexample", {{"N_list", {2, 4, 8}}, {"grid_n", 512}, {"grid_L", 16}}}});
    const auto a = run_counterexample(cfg), b = run_counterexample(cfg);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].m_inf_q0 == b[i].m_inf_q0);
        CHECK(a[i].m_p_q1 == b[i].m_p_q1);
        CHECK(a[i].m_inf_q0 >= a[i].lower_bound);
        if (i) CHECK(a[i].m_inf_q0 > a[i - 1].m_inf_q0);
    }
    const auto dir = std::filesystem::temp_directory_path();
    write_counterexample_csv(a, (dir / "wm_ce_a.csv").string());
    write_counterexample_csv(b, (dir / "wm_ce_b.csv").string());
    CHECK(slurp((dir / "wm_ce_a.csv").string()) == slurp((dir / "wm_ce_b.csv").string()));
}

TEST_CASE("ratio sweep output is deterministic") {
    auto cfg = SweepConfig::from_json({{"triples", {{{1, 1}, {2, 0.5}, {2, 0.5}}, {{2, 2}, {2, 2}, {2, 2}}}},
                                       {"lambda_grid", {{"min", 0.01}, {"max", 100}, {"points", 21}}},
                                       {"jobs", 2}});
    const auto dir = std::filesystem::temp_directory_path();
    write_ratio_csv(run_gaussian_ratio_sweep(cfg), (dir / "wm_r1.csv").string());
    cfg.jobs = 1;
    write_ratio_csv(run_gaussian_ratio_sweep(cfg), (dir / "wm_r2.csv").string());
    CHECK(slurp((dir / "wm_r1.csv").string()) == slurp((dir / "wm_r2.csv").string()));
}

TEST_CASE("closed-form STFT of the Wigner symbol") {
    SUBCASE("default configuration") {
        auto cfg = SweepConfig::from_json(nlohmann::json::object());
        cfg.stfta.points = 10;
        const auto r = run_stfta_check(cfg);
        CHECK(r.ok);
        CHECK(r.max_rel_error <= 1e-4);
        CHECK(r.wigner_rel_error <= 1e-5);
    }
    SUBCASE("single term") {
        auto cfg = SweepConfig::from_json({{"stfta", {{"N", 0}, {"points", 10}}}});
        CHECK(run_stfta_check(cfg).ok);
    }
    SUBCASE("zero sequence") {
        const RVec zero(9, 0.0);
        CHECK(stfta_closed_form(zero, 4, {0.1, 0.2, 0.3, 0.4}) == cplx(0.0));
        CHECK(wigner_closed_form(zero, 4, 0.5, -0.5) == cplx(0.0));
    }
}
