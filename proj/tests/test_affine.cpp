#include "doctest.h"

#include <cmath>
#include <random>

#include "rpkit/cocycle.hpp"
#include "rpkit/errors.hpp"
#include "rpkit/kernel.hpp"
#include "rpkit/step_function.hpp"

using namespace rpkit;

namespace {

StepFunction chi(double a, double b) { return StepFunction::indicator(a, b); }

StepFunction random_step(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-5, 5);
    std::uniform_int_distribution<int> pieces(1, 6);
    std::vector<double> bp(static_cast<std::size_t>(pieces(rng)) + 1);
    for (auto& b : bp)
        b = u(rng);
    std::sort(bp.begin(), bp.end());
    std::vector<double> vals(bp.size() - 1);
    for (auto& v : vals)
        v = u(rng);
    return StepFunction(bp, vals);
}

} // namespace

TEST_CASE("canonical form")
{
    const StepFunction f({0, 1, 2, 3}, {0, 1, 1});
    CHECK(f.breakpoints() == std::vector<double>{1, 3});
    CHECK(f.values() == std::vector<double>{1});
    CHECK(StepFunction({0, 1}, {0}).is_zero());
    CHECK((chi(0, 1) - chi(0, 1)).is_zero());
    CHECK(chi(0, 1) + chi(1, 2) == chi(0, 2));
    CHECK(chi(0, 1) + chi(1 + 1e-16, 2) == chi(0, 2));
    CHECK_THROWS_AS(StepFunction({1, 0}, {1}), DomainError);
    CHECK_THROWS_AS(StepFunction({0, 1}, {1, 2}), DomainError);
    CHECK(chi(0, 2)(1.0) == 1.0);
    CHECK(chi(0, 2)(2.0) == 0.0);
    CHECK(chi(0, 2)(0.0) == 1.0);
}

TEST_CASE("inner products are exact")
{
    CHECK(inner(chi(0, 1), chi(0, 1)) == 1.0);
    CHECK(inner(cocycle(CocycleKind::Brownian, 1), cocycle(CocycleKind::Brownian, -1)) == 0.0);
    CHECK(inner(cocycle(CocycleKind::Brownian, 2), cocycle(CocycleKind::Brownian, 3)) == 2.0);

    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 200; ++i) {
        const double s = u(rng), t = u(rng);
        const auto bs = cocycle(CocycleKind::Brownian, s), bt = cocycle(CocycleKind::Brownian, t);
        CHECK(std::abs(inner(bs, bt) - 0.5 * (std::abs(s) + std::abs(t) - std::abs(s - t))) <= 1e-14 * 10);
        const auto f = random_step(rng), g = random_step(rng), h = random_step(rng);
        const double c = u(rng);
        CHECK(inner(f, g) == inner(g, f));
        CHECK(inner(c * f + g, h) == doctest::Approx(c * inner(f, h) + inner(g, h)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("cocycles")
{
    const auto m1 = cocycle(CocycleKind::Brownian, -1);
    CHECK(m1 == -1.0 * chi(-1, 0));
    CHECK(cocycle(CocycleKind::Brownian, 0).is_zero());
    CHECK(cocycle(CocycleKind::OneSidedIndicator, 2) == chi(0, 2));
    CHECK_THROWS_AS(cocycle(CocycleKind::OneSidedIndicator, 0), DomainError);
    CHECK_THROWS_AS(cocycle(CocycleKind::OneSidedIndicator, -1), DomainError);
    CHECK(psi_of(CocycleKind::Brownian, -5) == 5.0);
    CHECK(psi_of(CocycleKind::Brownian, 0) == 0.0);
    CHECK(psi_of(CocycleKind::OneSidedIndicator, 3) == 3.0);
    CHECK(norm_squared(normalized_indicator(7.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dilation_cocycle(1.0).is_zero());
}

TEST_CASE("operators")
{
    CHECK(shift(chi(0, 1), 1) == chi(1, 2));
    CHECK(reflect(chi(0, 1)) == chi(-1, 0));
    const auto b1 = cocycle(CocycleKind::Brownian, 1);
    CHECK(b1 + shift(b1, 1) == cocycle(CocycleKind::Brownian, 2));
    for (double t : {0.5, -0.5, 2.0, -2.0}) {
        CHECK(reflect_odd(cocycle(CocycleKind::Brownian, t)) == cocycle(CocycleKind::Brownian, -t));
        // the even reflection maps b_t to -b_{-t}
        CHECK(reflect(cocycle(CocycleKind::Brownian, t)) == -cocycle(CocycleKind::Brownian, -t));
        CHECK(check_theta_equivariance(CocycleKind::Brownian, t).distance == 0.0);
    }
    CHECK_THROWS_AS(check_theta_equivariance(CocycleKind::OneSidedIndicator, 1.0), DomainError);

    const double e = std::exp(1.0);
    const auto d = dilate(chi(0, 1), 1.0);
    REQUIRE(d.breakpoints().size() == 2);
    CHECK(d.breakpoints()[1] == doctest::Approx(1 / e).epsilon(1e-15));
    CHECK(d.values()[0] == doctest::Approx(std::sqrt(e)).epsilon(1e-15));

    for (double t : {-2.0, -1.0, 0.5, 1.0, 3.0})
        CHECK(std::abs(inner(chi(0, 1), dilate(chi(0, 1), t)) - std::exp(-std::abs(t) / 2)) <= 1e-14);
    for (double t : {-3.0, -1.0, 0.0, 0.5, 2.0}) {
        const auto b = normalized_indicator(1.0);
        CHECK(std::abs(inner(b, dilate(b, t)) - std::exp(-std::abs(t) / 2)) <= 1e-12);
    }

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int i = 0; i < 100; ++i) {
        const auto f = random_step(rng);
        const double s = u(rng), t = u(rng);
        const double n2 = norm_squared(f);
        CHECK(norm_squared(shift(f, t)) == doctest::Approx(n2).epsilon(1e-12));
        CHECK(norm_squared(reflect(f)) == doctest::Approx(n2).epsilon(1e-14));
        CHECK(norm_squared(dilate(f, t)) == doctest::Approx(n2).epsilon(1e-12));
        CHECK(reflect(reflect(f)) == f);
        CHECK(reflect_odd(reflect_odd(f)) == f);
        CHECK(norm_squared(reflect_odd(f)) == doctest::Approx(n2).epsilon(1e-14));
        CHECK(norm(shift(shift(f, s), t) - shift(f, s + t)) <= 1e-12);
        CHECK(norm(dilate(dilate(f, s), t) - dilate(f, s + t)) <= 1e-10);
    }
}

TEST_CASE("cocycle identity and duality")
{
    CHECK(check_cocycle_identity(CocycleKind::Brownian, 1, 1).distance == 0.0);
    CHECK(check_cocycle_identity(CocycleKind::Brownian, 2, -3).pass);
    CHECK(check_cocycle_identity(CocycleKind::Brownian, 2, 0).pass);
    CHECK(check_cocycle_identity(CocycleKind::OneSidedIndicator, 3, 1).pass);

    const auto d = check_duality(CocycleKind::Brownian, 2, 3);
    CHECK(d.pass);
    CHECK(d.covariance_error == 0.0);
    CHECK(check_duality(CocycleKind::Brownian, 1, -1).pass);
    CHECK(check_duality(CocycleKind::Brownian, 4, 4).pass);

    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-10, 10);
    std::uniform_real_distribution<double> pos(0.05, 10);
    for (int i = 0; i < 100; ++i) {
        const double s = u(rng), t = u(rng);
        CHECK(check_cocycle_identity(CocycleKind::Brownian, s, t).pass);
        CHECK(check_duality(CocycleKind::Brownian, s, t).pass);
        CHECK(psi_of(CocycleKind::Brownian, t) == psi_of(CocycleKind::Brownian, -t));
        const double a = pos(rng), b = pos(rng);
        CHECK(check_cocycle_identity(CocycleKind::OneSidedIndicator, a, b).pass);
        const auto od = check_duality(CocycleKind::OneSidedIndicator, a, b);
        CAPTURE(od.covariance_error);
        CAPTURE(od.increment_error);
        CHECK(od.pass);
    }
}

TEST_CASE("hat triviality")
{
    const std::vector<double> g{0.5, 1, 2};
    const auto v = check_hat_triviality(CocycleKind::Brownian, g);
    CHECK(v.all_orthogonal);
    CHECK(v.max_abs_inner == 0.0);
    CHECK_FALSE(v.degenerate);

    const auto f = check_hat_triviality(KernelSpec::fractional_brownian(0.3), g);
    CHECK_FALSE(f.all_orthogonal);
    const std::vector<double> one{1.0};
    CHECK(check_hat_triviality(KernelSpec::fractional_brownian(0.3), one).max_abs_inner ==
          doctest::Approx(0.242141716744801).epsilon(1e-12));
    CHECK(check_hat_triviality(KernelSpec::brownian_two_sided(), g).all_orthogonal);

    const auto empty = check_hat_triviality(CocycleKind::Brownian, std::span<const double>{});
    CHECK(empty.all_orthogonal);
    CHECK(empty.degenerate);
    CHECK_THROWS_AS(check_hat_triviality(CocycleKind::OneSidedIndicator, g), DomainError);
}
