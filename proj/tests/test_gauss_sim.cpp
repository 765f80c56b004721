#include "doctest.h"

#include <cmath>
#include <random>

#include "rpkit/definiteness.hpp"
#include "rpkit/errors.hpp"
#include "rpkit/gram.hpp"
#include "rpkit/monte_carlo.hpp"
#include "rpkit/process.hpp"
#include "rpkit/sampling.hpp"

using namespace rpkit;

TEST_CASE("covariance and increment form")
{
    const auto bm = ProcessSpec::brownian_two_sided();
    CHECK(covariance(bm, 3, 5) == 3.0);
    CHECK(covariance(bm, -2, 3) == 0.0);
    CHECK(covariance(ProcessSpec::fractional_brownian(0.3), 1.7, 1.7) == doctest::Approx(std::pow(1.7, 0.6)).epsilon(1e-15));
    CHECK(covariance(ProcessSpec::brownian_one_sided(), 2, 0.5) == 0.5);
    CHECK_THROWS_AS(covariance(ProcessSpec::brownian_one_sided(), -1, 0.5), DomainError);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 200; ++i) {
        const double s = u(rng), t = u(rng);
        CHECK(increment_form(bm, s, t) == doctest::Approx(std::abs(s - t)).epsilon(1e-13));
        CHECK(increment_form(ProcessSpec::fractional_brownian(0.3), s, t) ==
              doctest::Approx(std::pow(std::abs(s - t), 0.6)).epsilon(1e-12).scale(1.0));
        CHECK(increment_form(bm, s, s) == 0.0);
        for (auto p : {bm, ProcessSpec::fractional_brownian(0.8), ProcessSpec::fractional_brownian(0.1)})
            CHECK(increment_form(p, s, t) >= -1e-12);
    }
}

TEST_CASE("fBm at H = 1/2 is Brownian motion")
{
    const auto g = Grid::parse("-2:3:0.25");
    CHECK(gram(covariance_kernel(ProcessSpec::fractional_brownian(0.5)), g).entries ==
          gram(covariance_kernel(ProcessSpec::brownian_two_sided()), g).entries);
}

TEST_CASE("stationary increments")
{
    const auto grid = Grid::parse("0.25:2:0.25");
    CHECK(check_stationary_increments(ProcessSpec::brownian_two_sided(), grid).pass);
    const auto f = check_stationary_increments(ProcessSpec::fractional_brownian(0.3), grid);
    CHECK(f.pass);
    CHECK(f.max_deviation <= 1e-12);
    CHECK(f.pairs_checked > 2);
    CHECK(check_stationary_increments(ProcessSpec::brownian_one_sided(), grid).pass);

    // s^2 t^2: D(s,t) = (s^2 - t^2)^2 is not translation invariant; (1,2,1): 9 vs 25
    const auto sq = KernelSpec::tabulated(Grid({1, 2, 3}), [] {
        Eigen::MatrixXd m(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m(i, j) = (i + 1.0) * (i + 1.0) * (j + 1.0) * (j + 1.0);
        return m;
    }());
    const auto v = check_stationary_increments(ProcessSpec::custom(sq), Grid({1, 2}), 1e-12, std::vector<double>{1.0});
    CHECK_FALSE(v.pass);
    CHECK(v.max_deviation == doctest::Approx(16.0));

    const auto degenerate = check_stationary_increments(ProcessSpec::brownian_two_sided(), Grid({1.0}));
    CHECK(degenerate.degenerate);
}

TEST_CASE("normalized covariance")
{
    const auto n = normalize_covariance(ProcessSpec::brownian_one_sided());
    CHECK(covariance(n, 2.0, 8.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(covariance(n, 3.3, 3.3) == 1.0);
    CHECK(covariance(ProcessSpec::normalized_one_sided(), 1.0, std::exp(2.0)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK_THROWS_WITH_AS(covariance(normalize_covariance(ProcessSpec::brownian_two_sided()), 0.0, 1.0),
                         doctest::Contains("t = 0"), DomainError);

    const auto grid = Grid::parse("0.2:3:0.4");
    for (auto p : {ProcessSpec::brownian_one_sided(), ProcessSpec::fractional_brownian(0.3)}) {
        const auto g = gram(covariance_kernel(normalize_covariance(p)), grid);
        CHECK(g.entries.diagonal() == Eigen::VectorXd::Ones(grid.size()));
        CHECK(check_positive_semidefinite(g).pass);
    }
}

TEST_CASE("dilation stationarity")
{
    const std::vector<double> scales{0.5, 3.0};
    const Grid g({1, 2, 4});
    CHECK(check_dilation_stationarity(g, scales).pass);
    const std::vector<double> unit{1.0};
    const auto same = check_dilation_stationarity(g, unit);
    CHECK(same.pass);
    CHECK(same.max_deviation == 0.0);
    CHECK_FALSE(check_dilation_stationarity(g, scales, 1e-12, ProcessSpec::brownian_one_sided()).pass);
    const std::vector<double> many{0.01, 0.3, 1.7, 42.0};
    CHECK(check_dilation_stationarity(Grid::parse("0.1:5:0.1"), many).pass);
}

TEST_CASE("sampling")
{
    const auto grid = Grid::parse("0.25:2:0.25");
    const auto bm = ProcessSpec::brownian_two_sided();

    CHECK_THROWS_AS(sample_paths(bm, grid, 0, RandomSeed{1}), DomainError);

    SUBCASE("variance at a single point")
    {
        const auto e = sample_paths(bm, Grid({2.0}), 1'000'000, RandomSeed{7});
        const double var = e.paths.col(0).squaredNorm() / 1e6;
        CHECK(std::abs(var - 2.0) <= 0.02);
    }

    SUBCASE("seed determinism")
    {
        const auto a = sample_paths(ProcessSpec::fractional_brownian(0.3), grid, 1000, RandomSeed{99});
        const auto b = sample_paths(ProcessSpec::fractional_brownian(0.3), grid, 1000, RandomSeed{99});
        CHECK(a.paths == b.paths);
        const auto c = sample_paths(ProcessSpec::fractional_brownian(0.3), grid, 1000, RandomSeed{100});
        CHECK(a.paths != c.paths);
        // a prefix of a larger ensemble is the smaller ensemble
        const auto d = sample_paths(ProcessSpec::fractional_brownian(0.3), grid, 1500, RandomSeed{99});
        CHECK(d.paths.topRows(1000) == a.paths);
    }

    SUBCASE("fBm with H = 1/2 reproduces Brownian paths")
    {
        CHECK(sample_paths(ProcessSpec::fractional_brownian(0.5), grid, 600, RandomSeed{5}).paths ==
              sample_paths(bm, grid, 600, RandomSeed{5}).paths);
    }

    SUBCASE("zero kernel")
    {
        const auto zero = ProcessSpec::custom(KernelSpec::tabulated(Grid({1, 2}), Eigen::MatrixXd::Zero(2, 2)));
        const auto e = sample_paths(zero, Grid({1, 2}), 300, RandomSeed{1});
        CHECK(e.paths.isZero(0.0));
        CHECK(empirical_covariance(e).matrix.isZero(0.0));
    }

    SUBCASE("non-PSD custom kernels are rejected")
    {
        Eigen::MatrixXd anti(2, 2);
        anti << 0, 1, 1, 0;
        const auto bad = ProcessSpec::custom(KernelSpec::tabulated(Grid({1, 2}), anti));
        CHECK_THROWS_AS(sample_paths(bad, Grid({1, 2}), 10, RandomSeed{1}), NotPositiveSemidefinite);
    }

    SUBCASE("jitter rescues near-singular Gram matrices")
    {
        // rank-one Gram: plain Cholesky breaks down on the zero pivot
        Eigen::VectorXd v(3);
        v << 1, 2, 3;
        const auto rank1 = ProcessSpec::custom(KernelSpec::tabulated(Grid({1, 2, 3}), v * v.transpose()));
        double jitter = -1.0;
        const auto l = covariance_factor(rank1, Grid({1, 2, 3}), &jitter);
        CHECK(jitter >= 0.0);
        CHECK((l * l.transpose() - v * v.transpose()).cwiseAbs().maxCoeff() <= 1e-5);
    }

    SUBCASE("empirical covariance")
    {
        const auto e = sample_paths(bm, Grid({1, 2, 3}), 20'000, RandomSeed{2024});
        CHECK(empirical_covariance(e).max_abs_deviation <= 0.15);
        const auto centered = empirical_covariance(e, true);
        CHECK(centered.max_abs_deviation <= 0.15);

        const auto f = sample_paths(ProcessSpec::fractional_brownian(0.3), grid, 50'000, RandomSeed{42});
        CHECK(empirical_covariance(f).max_abs_deviation <= 0.05);
        CHECK(f.generator.find("mt19937_64") != std::string::npos);
    }

    SUBCASE("deviation decays like 1/sqrt(M)")
    {
        const auto f = sample_paths(bm, grid, 100'000, RandomSeed{8});
        std::vector<double> dev;
        for (std::size_t m : {1'000, 10'000, 100'000}) {
            PathEnsemble sub = f;
            sub.paths = f.paths.topRows(static_cast<Eigen::Index>(m));
            dev.push_back(empirical_covariance(sub).max_abs_deviation);
        }
        for (std::size_t i = 0; i + 1 < dev.size(); ++i) {
            const double ratio = dev[i] / dev[i + 1];
            CAPTURE(ratio);
            CHECK(ratio >= std::sqrt(10.0) / 2);
            CHECK(ratio <= std::sqrt(10.0) * 2);
        }
    }
}

TEST_CASE("Monte Carlo")
{
    const std::vector<double> zero{0, 0, 0};
    const auto z = mc_characteristic(zero, 1000, RandomSeed{1});
    CHECK(z.estimate == std::complex<double>(1.0, 0.0));
    CHECK(z.target == 1.0);

    const std::vector<double> e1{1, 0, 0};
    const auto r = mc_characteristic(e1, 1'000'000, RandomSeed{17});
    CHECK(r.target == doctest::Approx(std::exp(-0.5)));
    CHECK(r.abs_error <= 0.005);
    CHECK(r.half_width == doctest::Approx(0.003));
    CHECK(r.pass());

    const std::vector<double> v{1, 0}, w{0, 1};
    const auto cov = mc_field_covariance(v, w, 1'000'000, RandomSeed{17});
    CHECK(cov.target == 0.0);
    CHECK(cov.abs_error <= 0.005);

    const auto fock = mc_fock_kernel(v, w, 1'000'000, RandomSeed{17});
    CHECK(fock.kernel.target == doctest::Approx(std::exp(-1.0)));
    CHECK(fock.kernel.abs_error <= 0.005);
    CHECK(fock.normalized.target == 1.0);
    CHECK(fock.normalized.abs_error <= 0.01);

    const auto same = mc_fock_kernel(v, v, 1000, RandomSeed{3});
    CHECK(same.kernel.estimate == std::complex<double>(1.0, 0.0));
    CHECK(same.normalized.estimate.real() == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(same.normalized.target == doctest::Approx(std::exp(1.0)).epsilon(1e-15));

    const std::vector<double> short_v{1.0};
    CHECK_THROWS_AS(mc_fock_kernel(short_v, v, 10, RandomSeed{1}), DomainError);
    CHECK_THROWS_AS(mc_characteristic(e1, 0, RandomSeed{1}), DomainError);

    SUBCASE("determinism")
    {
        const auto a = mc_characteristic(e1, 50'000, RandomSeed{5});
        const auto b = mc_characteristic(e1, 50'000, RandomSeed{5});
        CHECK(a.estimate == b.estimate);
    }
}
