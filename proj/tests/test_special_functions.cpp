#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "slitscat/special_functions.hpp"

using namespace slitscat;
using namespace slitscat::bessel;

namespace {

struct Reference {
    int n;
    double x;
    double j;
    double y;
};

// 30-digit mpmath values, rounded to 17 significant digits.
constexpr Reference kReference[] = {
    {0, 0.001, 0.99999975000001562, -4.4714166113759233},
    {0, 0.5, 0.9384698072408129, -0.44451873350670656},
    {1, 1.0, 0.44005058574493352, -0.78121282130028872},
    {0, 2.5, -0.048383776468197996, 0.49807035961523189},
    {3, 0.1, 2.0820315754756265e-5, -5099.332378612904},
    {5, 1.3, 0.00090084135768150699, -73.323528504453081},
    {10, 2.0, 2.5153862827167367e-7, -129184.54220803928},
    {2, 7.5, -0.23027341052579026, -0.18641422227783963},
    {20, 15.0, 0.0073602340792234853, -3.3087330924737645},
    {35, 1.5, 4.0376092387699422e-45, -2.2545368278483493e+42},
    {0, 50.0, 0.055812327669251815, -0.098064995470077079},
    {7, 120.0, -0.0027152923138992941, 0.072847745152549377},
    {1, 250.0, -0.04326903841033075, 0.025966992185484582},
    {40, 30.0, 0.00036120236088965853, -33.393668907330314},
    {12, 12.0, 0.19528018273883224, -0.33855826409567555},
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(Bessel, MatchesHighPrecisionReference) {
    for (const auto& r : kReference) {
        EXPECT_LT(rel(bessel_j(r.n, r.x), r.j), 1e-12) << "J_" << r.n << "(" << r.x << ")";
        EXPECT_LT(rel(bessel_y(r.n, r.x), r.y), 1e-12) << "Y_" << r.n << "(" << r.x << ")";
    }
}

TEST(Bessel, J1AtOne) { EXPECT_NEAR(bessel_j(1, 1.0), 0.44005058574493352, 1e-15); }

TEST(Bessel, WronskianHoldsAcrossOrdersAndArguments) {
    for (double x : {1e-3, 0.07, 0.6, 3.3, 17.0, 64.0, 199.9, 200.1, 900.0}) {
        const CylinderTable t(x, 45);
        for (int n = 0; n <= 40; ++n) {
            const double w = t.j(n + 1) * t.y(n) - t.j(n) * t.y(n + 1);
            const double expected = 2.0 / (std::numbers::pi * x);
            // Y grows like (2n/ex)^n for small x; the Wronskian is a difference of
            // products, so compare against the size of those products.
            const double scale = std::max(std::abs(t.j(n + 1) * t.y(n)), std::abs(expected));
            if (scale > 1e250) continue;
            EXPECT_LT(std::abs(w - expected) / scale, 1e-12) << "n=" << n << " x=" << x;
        }
    }
}

TEST(Bessel, ThreeTermRecurrence) {
    for (double x : {0.3, 2.0, 11.0, 45.0, 310.0}) {
        const CylinderTable t(x, 40);
        for (int n = 1; n < 40; ++n) {
            const double lhs = t.j(n - 1) + t.j(n + 1);
            const double rhs = 2.0 * n / x * t.j(n);
            EXPECT_LE(std::abs(lhs - rhs), 1e-13 * std::max({std::abs(t.j(n - 1)), std::abs(t.j(n + 1)), 1e-300}) +
                                               1e-300)
                << "J n=" << n << " x=" << x;
            const double ly = t.y(n - 1) + t.y(n + 1);
            const double ry = 2.0 * n / x * t.y(n);
            EXPECT_LE(std::abs(ly - ry), 1e-12 * std::max(std::abs(t.y(n + 1)), std::abs(t.y(n - 1))))
                << "Y n=" << n << " x=" << x;
        }
    }
}

TEST(Bessel, NegativeOrdersUseParity) {
    const CylinderTable t(3.7, 10);
    for (int n = 1; n <= 10; ++n) {
        const double s = (n % 2 == 0) ? 1.0 : -1.0;
        EXPECT_DOUBLE_EQ(t.j(-n), s * t.j(n));
        EXPECT_DOUBLE_EQ(t.y(-n), s * t.y(n));
        EXPECT_DOUBLE_EQ(t.dj(-n), s * t.dj(n));
    }
}

TEST(Bessel, DerivativesMatchCentralDifferences) {
    const double h = 1e-5;
    for (int n : {0, 1, 4, 9}) {
        for (double x : {0.8, 5.0, 30.0}) {
            const double fd_j = (bessel_j(n, x + h) - bessel_j(n, x - h)) / (2 * h);
            const double fd_y = (bessel_y(n, x + h) - bessel_y(n, x - h)) / (2 * h);
            EXPECT_NEAR(deriv_j(n, x), fd_j, 1e-8 * std::max(1.0, std::abs(fd_j)));
            EXPECT_NEAR(deriv_y(n, x), fd_y, 1e-8 * std::max(1.0, std::abs(fd_y)));
            const cplx dh = deriv_h1(n, x);
            EXPECT_DOUBLE_EQ(dh.real(), deriv_j(n, x));
            EXPECT_DOUBLE_EQ(dh.imag(), deriv_y(n, x));
        }
    }
}

TEST(Bessel, HankelIsJPlusIY) {
    const cplx h = hankel1(3, 4.2);
    EXPECT_DOUBLE_EQ(h.real(), bessel_j(3, 4.2));
    EXPECT_DOUBLE_EQ(h.imag(), bessel_y(3, 4.2));
}

TEST(Bessel, SecondKindContinuousAcrossAsymptoticSwitch) {
    // The jump across the switch must match the slope over the 2e-9 gap.
    for (int n : {0, 1, 5}) {
        const double below = bessel_y(n, 200.0 - 1e-9);
        const double above = bessel_y(n, 200.0 + 1e-9);
        EXPECT_NEAR(above - below, 2e-9 * deriv_y(n, 200.0), 1e-14);
        EXPECT_NEAR(bessel_j(n, 200.0 + 1e-9) - bessel_j(n, 200.0 - 1e-9), 2e-9 * deriv_j(n, 200.0), 1e-14);
    }
}

TEST(Bessel, ZeroArgumentAllowedForFirstKindOnly) {
    EXPECT_DOUBLE_EQ(bessel_j(0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(bessel_j(3, 0.0), 0.0);
    EXPECT_THROW(bessel_y(0, 0.0), DomainError);
    EXPECT_THROW(hankel1(1, 0.0), DomainError);
}

TEST(Bessel, RejectsInvalidArguments) {
    EXPECT_THROW(bessel_j(0, -1.0), DomainError);
    EXPECT_THROW(bessel_j(0, std::numeric_limits<double>::quiet_NaN()), DomainError);
    EXPECT_THROW(bessel_y(2, std::numeric_limits<double>::infinity()), DomainError);
}
