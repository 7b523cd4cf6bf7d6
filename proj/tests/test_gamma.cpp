#include <catch2/catch_amalgamated.hpp>

#include "qlambda/qlambda.hpp"

using namespace qlambda;

TEST_CASE("smoke") {
    RingPtr ring = GammaRing::create(LambdaSpec::rational(2, 3));
    REQUIRE(GammaElement::one(ring).sign() == 1);
}
