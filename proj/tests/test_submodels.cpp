#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "betagompertz/submodels.hpp"

using namespace bg;

TEST_CASE("family metadata") {
    CHECK(family_dim(Family::E) == 1);
    CHECK(family_dim(Family::GE) == 2);
    CHECK(family_dim(Family::BE) == 3);
    CHECK(family_dim(Family::G) == 2);
    CHECK(family_dim(Family::GG) == 3);
    CHECK(family_dim(Family::BG) == 4);
    for (Family f : {Family::E, Family::GE, Family::BE, Family::G, Family::GG, Family::BG}) {
        Family back;
        REQUIRE(family_from_name(family_name(f), back));
        CHECK(back == f);
        CHECK(static_cast<int>(family_param_names(f).size()) == family_dim(f));
        CHECK(family_param_names(f)[0] == "theta");
    }
    Family dummy;
    CHECK_FALSE(family_from_name("XX", dummy));
}

TEST_CASE("embeddings fix the pinned coordinates") {
    std::vector<double> q{0.4, 0.9, 1.7};
    BGParams gg = family_embed(Family::GG, q);
    CHECK(gg.theta == 0.4);
    CHECK(gg.gamma == 0.9);
    CHECK(gg.alpha == 1.7);
    CHECK(gg.beta == 1.0);
    std::vector<double> qg{0.4, 0.9};
    BGParams g = family_embed(Family::G, qg);
    CHECK(g.alpha == 1.0);
    CHECK(g.beta == 1.0);
    std::vector<double> qbe{0.4, 1.7, 2.2};
    BGParams be = family_embed(Family::BE, qbe);
    CHECK(be.gamma == 0.0);  // limit marker, not evaluable
}

TEST_CASE("three-parameter gompertz equals the full family at unit beta") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 4.0), xs(0.01, 5.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> q{u(rng), u(rng), u(rng)};
        std::vector<double> q4{q[0], q[1], q[2], 1.0};
        double x = xs(rng);
        CHECK(family_logpdf(Family::GG, q, x) ==
              Catch::Approx(family_logpdf(Family::BG, q4, x)).margin(1e-12));
        CHECK(family_cdf(Family::GG, q, x) ==
              Catch::Approx(family_cdf(Family::BG, q4, x)).margin(1e-12));
    }
}

TEST_CASE("exponential-type families are the small-gamma limits") {
    std::vector<double> qbe{0.8, 1.6, 2.4};
    for (double x : {0.1, 0.5, 1.2, 2.5}) {
        std::vector<double> q4{0.8, 1e-8, 1.6, 2.4};
        CHECK(family_logpdf(Family::BE, qbe, x) ==
              Catch::Approx(family_logpdf(Family::BG, q4, x)).margin(1e-5));
    }
    for (double x = 0.1; x < 4.0; x += 0.2) {
        std::vector<double> q4{0.8, 1e-7, 1.6, 2.4};
        CHECK(family_logpdf(Family::BE, qbe, x) ==
              Catch::Approx(family_logpdf(Family::BG, q4, x)).margin(1e-4));
    }
}

TEST_CASE("exponential log-density plugs in directly") {
    std::vector<double> q{0.0219};
    CHECK(family_logpdf(Family::E, q, 10.0) ==
          Catch::Approx(std::log(0.0219) - 0.219).epsilon(1e-14));
}

TEST_CASE("closed-form cdfs at hand-checked points") {
    std::vector<double> ge{0.7, 2.0};
    for (double x : {0.3, 1.0, 2.0})
        CHECK(family_cdf(Family::GE, ge, x) ==
              Catch::Approx(std::pow(-std::expm1(-0.7 * x), 2.0)).epsilon(1e-13));
    std::vector<double> e{1.3};
    CHECK(family_cdf(Family::E, e, 1.0) == Catch::Approx(-std::expm1(-1.3)).epsilon(1e-14));
    std::vector<double> be{1.0, 1.0, 1.0};
    CHECK(family_cdf(Family::BE, be, 0.9) == Catch::Approx(-std::expm1(-0.9)).epsilon(1e-12));
}

TEST_CASE("cdf endpoints and monotonicity per family") {
    std::vector<std::pair<Family, std::vector<double>>> cases{
        {Family::E, {0.9}},
        {Family::GE, {0.9, 1.7}},
        {Family::BE, {0.9, 1.7, 0.6}},
        {Family::G, {0.9, 0.4}},
        {Family::GG, {0.9, 0.4, 1.7}},
        {Family::BG, {0.9, 0.4, 1.7, 0.6}}};
    for (auto& [f, q] : cases) {
        CHECK(family_cdf(f, q, 0.0) == 0.0);
        double prev = 0.0;
        for (double x = 0.25; x <= 12.0; x += 0.25) {
            double v = family_cdf(f, q, x);
            CHECK(v >= prev);
            CHECK(v <= 1.0);
            prev = v;
        }
        CHECK(prev > 0.99);
    }
}

TEST_CASE("quantile roundtrips per family") {
    std::vector<std::pair<Family, std::vector<double>>> cases{
        {Family::E, {0.9}},
        {Family::GE, {0.9, 1.7}},
        {Family::BE, {0.9, 1.7, 0.6}},
        {Family::G, {0.9, 0.4}},
        {Family::GG, {0.9, 0.4, 1.7}},
        {Family::BG, {0.9, 0.4, 1.7, 0.6}}};
    for (auto& [f, q] : cases) {
        for (double u : {0.01, 0.2, 0.5, 0.8, 0.99}) {
            double x = family_quantile(f, q, u);
            CHECK(family_cdf(f, q, x) == Catch::Approx(u).margin(1e-9));
        }
        CHECK(family_quantile(f, q, 0.0) == 0.0);
        CHECK(std::isinf(family_quantile(f, q, 1.0)));
    }
}

TEST_CASE("log-likelihood is the sum of log densities") {
    std::vector<double> x{0.2, 0.9, 1.4, 2.2, 3.1};
    std::vector<double> q{0.9, 0.4, 1.7, 0.6};
    double s = 0.0;
    for (double xi : x) s += family_logpdf(Family::BG, q, xi);
    CHECK(family_loglik(Family::BG, q, x) == Catch::Approx(s).epsilon(1e-15));
}

TEST_CASE("analytic scores match finite differences of the log-likelihood") {
    std::vector<double> x{0.15, 0.4, 0.9, 1.3, 1.8, 2.6, 3.3, 0.7, 1.1, 2.0};
    std::vector<std::pair<Family, std::vector<double>>> cases{
        {Family::E, {0.8}},
        {Family::GE, {0.8, 1.4}},
        {Family::BE, {0.8, 1.4, 0.7}},
        {Family::G, {0.5, 0.3}},
        {Family::GG, {0.5, 0.3, 1.4}},
        {Family::BG, {0.5, 0.3, 1.4, 0.7}}};
    for (auto& [f, q] : cases) {
        auto sc = family_score(f, q, x);
        REQUIRE(static_cast<int>(sc.size()) == family_dim(f));
        for (int i = 0; i < family_dim(f); ++i) {
            double h = 1e-6 * std::max(1.0, std::fabs(q[i]));
            auto qp = q, qm = q;
            qp[i] += h;
            qm[i] -= h;
            double fd = (family_loglik(f, qp, x) - family_loglik(f, qm, x)) / (2.0 * h);
            CHECK(sc[i] == Catch::Approx(fd).epsilon(1e-6).margin(1e-8));
        }
    }
}
