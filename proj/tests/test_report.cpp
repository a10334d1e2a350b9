#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "skglass/analytics.hpp"
#include "skglass/report.hpp"

using namespace skglass;

TEST_CASE("extrapolation recovers an exact linear law") {
    std::vector<int> ns = {4, 8, 16, 32};
    std::vector<double> means, ses;
    for (int n : ns) {
        means.push_back(0.1 + 0.8 / n);
        ses.push_back(1e-8);
    }
    const auto fit = extrapolate_entropy(ns, means, ses);
    CHECK(fit.intercept == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(fit.slope == doctest::Approx(0.8).epsilon(1e-8));
    CHECK(fit.points == 4);
    CHECK(fit.ci_low <= fit.intercept);
    CHECK(fit.ci_high >= fit.intercept);
}

TEST_CASE("extrapolation of a constant has zero slope") {
    std::vector<int> ns = {8, 12, 16};
    std::vector<double> means = {0.3, 0.3, 0.3};
    std::vector<double> ses = {1e-8, 1e-8, 1e-8};
    const auto fit = extrapolate_entropy(ns, means, ses);
    CHECK(std::abs(fit.slope) <= 1e-9);
    CHECK(fit.intercept == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("extrapolation weighting favors precise points") {
    // The noisy outlier at n=4 carries negligible weight.
    std::vector<int> ns = {4, 8, 16, 32};
    std::vector<double> means = {5.0, 0.1 + 0.8 / 8, 0.1 + 0.8 / 16, 0.1 + 0.8 / 32};
    std::vector<double> ses = {1e6, 1e-8, 1e-8, 1e-8};
    const auto fit = extrapolate_entropy(ns, means, ses);
    CHECK(fit.intercept == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("extrapolation input validation") {
    CHECK_THROWS_AS(extrapolate_entropy({8, 12}, {0.1, 0.2}, {0.01, 0.01}),
                    std::invalid_argument);
    CHECK_THROWS_AS(extrapolate_entropy({8, 8, 8}, {0.1, 0.2, 0.3}, {0.01, 0.01, 0.01}),
                    std::invalid_argument);
    CHECK_THROWS_AS(extrapolate_entropy({8, 12, 16}, {0.1, 0.2}, {0.01, 0.01, 0.01}),
                    std::invalid_argument);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.0, 1.0, -0.3333333333333333, 1e-300, 2.772588722239781,
                     123456789.12345678, -4.9406564584124654e-324}) {
        const std::string text = format_number(v);
        CHECK(std::strtod(text.c_str(), nullptr) == v);
        CHECK(text.find(',') == std::string::npos);
    }
}

TEST_CASE("CSV schema is frozen") {
    std::vector<SweepRow> rows = {
        {8, 0.5, 0.75, 0.001, 0.6, 0.002, -0.3, 0.003},
        {8, 1.0, 0.9, 0.001, 0.5, 0.002, -0.4, 0.003},
    };
    const std::string csv = to_csv(rows);
    CHECK(csv.rfind("n,beta,f_mean,f_se,s_mean,s_se,u_mean,u_se\n", 0) == 0);
    CHECK(csv.back() == '\n');
    CHECK(csv.find("\r") == std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.find("8,0.5,0.75,") != std::string::npos);
}

TEST_CASE("JSON document has the full schema and a stable content hash") {
    SweepReport report;
    report.generated_at = "2026-01-01T00:00:00Z";
    report.master_seed = 42;
    report.sample_count = 10;
    report.n_list = {4, 8};
    report.betas = {0.5, 1.0};
    report.predictions = predictions();
    report.rows = {{4, 0.5, 0.7, 0.01, 0.6, 0.01, -0.2, 0.01}};
    report.extrapolation = {{0.5, {0.12, 0.8, 0.01, 0.1, 0.14, 3}}};

    const std::string text = to_json(report);
    const auto doc = nlohmann::json::parse(text);
    CHECK(doc["schema_version"] == "1");
    CHECK(doc["metadata"]["master_seed"] == 42);
    CHECK(doc["metadata"]["generated_at"] == "2026-01-01T00:00:00Z");
    CHECK(doc["metadata"]["n_list"] == nlohmann::json({4, 8}));
    CHECK(doc["metadata"]["extrapolation_model"] == "linear-1-over-n");
    CHECK(doc["rows"].size() == 1);
    CHECK(doc["rows"][0]["f_mean"] == 0.7);
    CHECK(doc["predictions"]["beta_star"] == doctest::Approx(4.0 * std::log(2.0)));
    CHECK(doc["extrapolation"][0]["points"] == 3);
    const std::string hash = doc["metadata"]["content_hash"];
    CHECK(hash.rfind("fnv1a64:", 0) == 0);

    // Timestamps do not participate in the hash.
    report.generated_at = "2030-12-31T23:59:59Z";
    const auto doc2 = nlohmann::json::parse(to_json(report));
    CHECK(doc2["metadata"]["content_hash"] == hash);
    CHECK(doc2["metadata"]["generated_at"] != doc["metadata"]["generated_at"]);

    // Payload changes do change the hash.
    report.rows[0].f_mean = 0.71;
    const auto doc3 = nlohmann::json::parse(to_json(report));
    CHECK(doc3["metadata"]["content_hash"] != hash);
}

TEST_CASE("fnv1a64 matches reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("zero cross finds the synthetic REM root") {
    std::vector<int> ns = {8, 12, 16, 20};
    auto eval = [&](double beta) {
        std::vector<double> means, ses;
        for (int n : ns) {
            means.push_back(rem_entropy(InverseTemperature(beta)) + 0.8 / n);
            ses.push_back(1e-6);
        }
        return extrapolate_entropy(ns, means, ses);
    };
    const auto result = zero_cross(eval, 1.0, 3.0, 0.01);
    REQUIRE(result.crossed);
    CHECK(std::abs(result.beta_cross - 1.665109222315395513) <= 0.02);
    CHECK(result.ci_low <= result.beta_cross);
    CHECK(result.ci_high >= result.beta_cross);
    CHECK(result.evaluations > 2);
}

TEST_CASE("zero cross reports a bracket without a crossing") {
    std::vector<int> ns = {8, 12, 16};
    auto eval = [&](double beta) {
        std::vector<double> means, ses;
        for (int n : ns) {
            means.push_back(rem_entropy(InverseTemperature(beta)) + 0.8 / n);
            ses.push_back(1e-6);
        }
        return extrapolate_entropy(ns, means, ses);
    };
    const auto result = zero_cross(eval, 0.5, 1.0, 0.01);
    CHECK_FALSE(result.crossed);
    CHECK(result.intercept_at_low > 0.0);
    CHECK(result.intercept_at_high > 0.0);
    CHECK(result.intercept_at_low > result.intercept_at_high);

    CHECK_THROWS_AS(zero_cross(eval, 1.0, 0.5, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(zero_cross(eval, 0.5, 1.0, 0.0), std::invalid_argument);
}
