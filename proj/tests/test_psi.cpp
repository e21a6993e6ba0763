#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "harq/psi.hpp"

TEST_CASE("decoding-failure series matches the convolution oracle") {
    for (int m = 1; m <= 5; ++m)
        for (double r : {0.5, 1.0, 2.0, 3.0}) {
            INFO("m=" << m << " R=" << r);
            const double series = harq::psi_series(m, r);
            const double oracle = harq::psi_convolution_oracle(m, r);
            CHECK(std::abs(series - oracle) < 1e-8);
        }
}

TEST_CASE("series anchor values") {
    CHECK(harq::psi_series(0, 1.7) == 1.0);
    for (double r : {0.5, 1.0, 2.0, 3.0}) {
        CHECK(harq::psi_series(1, r) == Catch::Approx(std::expm1(r)).epsilon(1e-14));
        // two accumulated transmissions: e^R (R - 1) + 1
        CHECK(harq::psi_series(2, r) ==
              Catch::Approx(std::exp(r) * (r - 1.0) + 1.0).margin(1e-13));
    }
    CHECK(harq::psi_series(2, 1.0) == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(harq::psi_series(3, 1.0) == Catch::Approx(std::exp(1.0) / 2.0 - 1.0).epsilon(1e-13));
}

TEST_CASE("series stays positive over the working range") {
    for (int m = 0; m <= 8; ++m)
        for (double r : {0.5, 1.0, 2.0, 3.0}) {
            INFO("m=" << m << " R=" << r);
            CHECK(harq::psi_series(m, r) > 0.0);
        }
}

TEST_CASE("precomputed table agrees with direct evaluation") {
    const harq::PsiTable table(8, 2.0);
    REQUIRE(table.values.size() == 9);
    for (int m = 0; m <= 8; ++m)
        CHECK(table.values[m] == harq::psi_series(m, 2.0));
}
