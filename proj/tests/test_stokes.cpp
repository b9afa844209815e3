#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pi2/stokes.hpp"

using namespace pi2;
using namespace pi2::stokes;
using model_curve::Family;

TEST_CASE("all 14 tritronquee presets satisfy the cyclic relation to 1e-14") {
    for (auto fam : {Family::typeI, Family::typeII})
        for (int m = 0; m < 7; ++m) CHECK(validate(preset(fam, m)) < 1e-14);
}

TEST_CASE("typeII m=0 preset matches s_{+-1} = s_{+-2} = 0, s_0 = s_{+-3} = -i") {
    const auto sv = preset(Family::typeII, 0);
    const cplx mi(0.0, -1.0);
    CHECK(sv.at(0) == mi);
    CHECK(sv.at(3) == mi);
    CHECK(sv.at(-3) == mi);
    CHECK(sv.at(1) == cplx(0.0));
    CHECK(sv.at(-1) == cplx(0.0));
    CHECK(sv.at(2) == cplx(0.0));
    CHECK(sv.at(-2) == cplx(0.0));
}

TEST_CASE("typeI m=0 preset matches s_{+-3} = s_{+-2} = 0, s_0 = s_{+-1} = -i") {
    const auto sv = preset(Family::typeI, 0);
    const cplx mi(0.0, -1.0);
    CHECK(sv.at(0) == mi);
    CHECK(sv.at(1) == mi);
    CHECK(sv.at(-1) == mi);
    CHECK(sv.at(2) == cplx(0.0));
    CHECK(sv.at(3) == cplx(0.0));
}

TEST_CASE("perturbing s_2 without rebalancing breaks the constraint") {
    auto sv = preset(Family::typeII, 0);
    sv.at(2) += 0.1;
    CHECK(validate(sv) > 1e-3);
}

TEST_CASE("rotate: n = 0 and n = 7 are identities") {
    const auto sv = preset(Family::typeII, 3);
    for (int n : {0, 7}) {
        const auto r = rotate(sv, n);
        for (int k = -3; k <= 3; ++k) CHECK(r.at(k) == sv.at(k));
    }
}

TEST_CASE("rotate by 3 maps preset m to preset m+1 within each family") {
    for (auto fam : {Family::typeI, Family::typeII})
        for (int m = 0; m < 7; ++m) {
            const auto r = rotate(preset(fam, m), 3);
            const auto want = preset(fam, (m + 1) % 7);
            for (int k = -3; k <= 3; ++k) CHECK(r.at(k) == want.at(k));
        }
}

TEST_CASE("rotate composed 7 times is the identity on a generic vector") {
    StokesVector sv;
    for (int k = -3; k <= 3; ++k) sv.at(k) = cplx(0.1 * k, 0.3 - 0.05 * k);
    auto r = sv;
    for (int i = 0; i < 7; ++i) r = rotate(r, 1);
    for (int k = -3; k <= 3; ++k) CHECK(r.at(k) == sv.at(k));
}

TEST_CASE("rotation preserves the constraint residual") {
    auto sv = preset(Family::typeII, 0);
    sv.at(2) += cplx(0.05, 0.02);  // off-manifold probe
    const double r0 = validate(sv);
    for (int n = 1; n < 7; ++n) {
        // residual set is permuted, max is unchanged
        CHECK(validate(rotate(sv, n)) == doctest::Approx(r0).epsilon(1e-12));
    }
}

TEST_CASE("preset names round-trip") {
    for (auto fam : {Family::typeI, Family::typeII})
        for (int m = 0; m < 7; ++m) {
            const auto sv = preset_by_name(preset_name(fam, m));
            const auto want = preset(fam, m);
            for (int k = -3; k <= 3; ++k) CHECK(sv.at(k) == want.at(k));
        }
}
