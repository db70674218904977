#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "psrgan/losses.hpp"
#include "psrgan/numerics.hpp"

using namespace psrgan;

TEST_CASE("baseline_loss values") {
    CHECK(baseline_loss({1, 2, 3}, {1, 2, 3}) == doctest::Approx(0.0));
    CHECK(baseline_loss({1, 2}, {2, 4}) == doctest::Approx(2.5));
    CHECK(baseline_loss({5}, {2}) == doctest::Approx(9.0));
    CHECK_THROWS_AS(baseline_loss({1, 2}, {1}), LengthMismatch);
}

TEST_CASE("l_sce closed forms") {
    CHECK(l_sce({0}, {1}) == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(l_sce({0}, {0}) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(l_sce({10}, {1}) == doctest::Approx(4.5399e-5).epsilon(1e-4));
    CHECK_THROWS_AS(l_sce({0, 1}, {1}), LengthMismatch);
    CHECK_THROWS_AS(l_sce({0}, {0.5}), TargetOutOfRange);
}

TEST_CASE("l_sce stable form matches naive form on moderate logits") {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        // keep |a| moderate so the naive form itself stays accurate
        const double a = rng.uniform(-15, 15);
        const double b = rng.next_double() < 0.5 ? 0.0 : 1.0;
        const double naive =
            -(b * std::log(sigmoid(a)) + (1.0 - b) * std::log(1.0 - sigmoid(a)));
        CHECK(l_sce({a}, {b}) == doctest::Approx(naive).epsilon(1e-9));
        CHECK(l_sce({a}, {b}) >= 0.0);
    }
}

TEST_CASE("l_adv_g values and monotonicity") {
    CHECK(l_adv_g(0.0) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(l_adv_g(20.0) == doctest::Approx(2.06e-9).epsilon(1e-2));
    CHECK(l_adv_g(-5.0) > l_adv_g(0.0));
    CHECK(l_adv_g(0.0) > l_adv_g(5.0));
}

TEST_CASE("l_p norms") {
    CHECK(l_p({1, 2}, {1, 2}, 2) == doctest::Approx(0.0));
    CHECK(l_p({3, 4}, {0, 0}, 2) == doctest::Approx(5.0));
    CHECK(l_p({1, -2}, {0, 0}, 1) == doctest::Approx(3.0));
    CHECK_THROWS_AS(l_p({1}, {1, 2}, 2), LengthMismatch);
    CHECK_THROWS_AS(l_p({1}, {1}, 3), InvalidParams);
}

TEST_CASE("l_dpl sign cases") {
    CHECK(l_dpl(10, 12, 11) == doctest::Approx(0.0)); // both up
    CHECK(l_dpl(10, 12, 9) == doctest::Approx(2.0));  // opposite
    CHECK(l_dpl(10, 12, 10) == doctest::Approx(1.0)); // flat vs up
    CHECK(l_dpl(10, 10, 10) == doctest::Approx(0.0)); // both flat
}

TEST_CASE("generator_loss composes its terms") {
    LossWeights w{0, 1, 0, 2};
    PredictionPair same{{1, 2}, {1, 2}, 0.5};
    CHECK(generator_loss(same, 0.0, w).total == doctest::Approx(0.0));

    LossWeights ones{1, 1, 1, 2};
    PredictionPair pair{{0, 0}, {3, 4}, -1.0}; // diff [3,4], both moves up
    const auto b = generator_loss(pair, 0.0, ones);
    CHECK(b.adv == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(b.p_norm == doctest::Approx(5.0));
    CHECK(b.dpl == doctest::Approx(0.0));
    CHECK(b.total == doctest::Approx(5.693147).epsilon(1e-6));
}

TEST_CASE("generator_loss is linear in the lambdas") {
    PredictionPair pair{{1.0, 2.0}, {1.5, 1.0}, 1.8};
    for (double scale : {2.0, 3.0, 7.5}) {
        LossWeights w{0.7, 1.3, 0.4, 2};
        LossWeights scaled{w.lambda_adv * scale, w.lambda_p * scale,
                           w.lambda_dpl * scale, 2};
        const double base = generator_loss(pair, 0.3, w).total;
        const double big = generator_loss(pair, 0.3, scaled).total;
        CHECK(big == doctest::Approx(scale * base).epsilon(1e-12));
    }
}

TEST_CASE("loss weight validation") {
    CHECK_THROWS_AS((LossWeights{-1, 1, 1, 2}).validate(), InvalidParams);
    CHECK_THROWS_AS((LossWeights{0, 0, 0, 2}).validate(), InvalidParams);
    CHECK_THROWS_AS((LossWeights{1, 1, 1, 3}).validate(), InvalidParams);
}

TEST_CASE("discriminator_loss values") {
    CHECK(discriminator_loss(0, 0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
    CHECK(discriminator_loss(20, -20) == doctest::Approx(4.1e-9).epsilon(1e-1));
    CHECK(discriminator_loss(-20, 20) == doctest::Approx(40.0).epsilon(1e-6));
}
