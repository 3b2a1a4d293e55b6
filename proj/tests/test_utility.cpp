#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rtb/errors.hpp"
#include "rtb/utility.hpp"

using namespace rtb;

TEST_CASE("click utility is the identity on [0,1]") {
    const auto spec = UtilitySpec::click();
    CHECK(eval_utility(spec, 0.003) == doctest::Approx(0.003));
    CHECK(eval_utility(spec, 0.0) == 0.0);
    CHECK(eval_utility(spec, 1.0) == 1.0);
}

TEST_CASE("net-profit utility") {
    const auto spec = UtilitySpec::net_profit(1000.0);
    CHECK(eval_utility(spec, 0.01, 5.0) == doctest::Approx(5.0));
    CHECK(eval_utility(spec, 0.0, 3.0) == doctest::Approx(-3.0));
}

TEST_CASE("net-profit is affine in r and z") {
    const auto spec = UtilitySpec::net_profit(250.0);
    const double base = eval_utility(spec, 0.01, 2.0);
    CHECK(eval_utility(spec, 0.02, 2.0) - base == doctest::Approx(250.0 * 0.01));
    CHECK(eval_utility(spec, 0.01, 3.0) - base == doctest::Approx(-1.0));
}

TEST_CASE("utility argument errors") {
    CHECK_THROWS_AS(eval_utility(UtilitySpec::net_profit(100.0), 0.01), ArgumentError);
    CHECK_THROWS_AS(eval_utility(UtilitySpec::click(), 1.5), DomainError);
    CHECK_THROWS_AS(eval_utility(UtilitySpec::click(), -0.1), DomainError);
    CHECK_THROWS_AS(UtilitySpec::net_profit(0.0), DomainError);
    CHECK_THROWS_AS(UtilitySpec::net_profit(-10.0), DomainError);
}
