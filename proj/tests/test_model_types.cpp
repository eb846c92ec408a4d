#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "slitscat/model_types.hpp"

using namespace slitscat;

namespace {

SlitCylinder four_slit() { return SlitCylinder::periodic(0.0275, 0.002, 4, 0.004); }

bool has_field(const std::vector<Violation>& v, const std::string& field, Violation::Severity s) {
    for (const auto& x : v) {
        if (x.field.find(field) != std::string::npos && x.severity == s) return true;
    }
    return false;
}

}  // namespace

TEST(Geometry, PeriodicRingLayout) {
    const auto ring = four_slit();
    ASSERT_EQ(ring.slits.size(), 4u);
    EXPECT_DOUBLE_EQ(ring.inner_radius(), 0.0255);
    for (std::size_t l = 0; l < 4; ++l) {
        EXPECT_NEAR(ring.slits[l].center, l * std::numbers::pi / 2, 1e-15);
        EXPECT_NEAR(ring.slit_width(l), 0.004, 1e-15);
    }
    EXPECT_TRUE(ring.periodic_identical());
}

TEST(Geometry, FillingFraction) {
    EXPECT_NEAR(filling_fraction(four_slit()), 0.09259923961710274, 1e-15);
    EXPECT_DOUBLE_EQ(filling_fraction(SlitCylinder{0.03, 0.002, {}}), 0.0);
    SlitCylinder uneven{0.03, 0.002, {{0.0, 0.1}, {1.0, 0.1}}};
    EXPECT_FALSE(uneven.periodic_identical());
    EXPECT_THROW(filling_fraction(uneven), UnsupportedConfiguration);
}

TEST(Geometry, PeriodicDetectionIgnoresOrderAndWrap) {
    SlitCylinder r{0.03, 0.002, {{3 * std::numbers::pi / 2, 0.1}, {std::numbers::pi / 2, 0.1}, {-3 * std::numbers::pi, 0.1}, {2 * std::numbers::pi, 0.1}}};
    EXPECT_TRUE(r.periodic_identical());
}

TEST(Geometry, RotateAndPolar) {
    const Vec2 v = rotate({1.0, 0.0}, std::numbers::pi / 2);
    EXPECT_NEAR(v.x, 0.0, 1e-15);
    EXPECT_NEAR(v.y, 1.0, 1e-15);
    EXPECT_NEAR((Vec2{3.0, 4.0}).norm(), 5.0, 1e-15);
    EXPECT_NEAR((Vec2{-1.0, 0.0}).angle(), std::numbers::pi, 1e-15);
}

TEST(Geometry, RectangularLattice) {
    Scatterer proto;
    proto.ring = four_slit();
    const auto layout = ArrayLayout::rectangular(3, 7, 0.086, {1.586, 0.0}, proto);
    ASSERT_EQ(layout.size(), 21u);
    double xmin = 1e9, xmax = -1e9, ymin = 1e9, ymax = -1e9;
    for (const auto& s : layout.scatterers) {
        xmin = std::min(xmin, s.position.x);
        xmax = std::max(xmax, s.position.x);
        ymin = std::min(ymin, s.position.y);
        ymax = std::max(ymax, s.position.y);
    }
    EXPECT_NEAR(xmin, 1.5, 1e-12);
    EXPECT_NEAR(xmax, 1.672, 1e-12);
    EXPECT_NEAR(ymax, 0.258, 1e-12);
    EXPECT_NEAR(ymin, -0.258, 1e-12);
    EXPECT_FALSE(has_errors(validate(layout)));
}

TEST(Materials, DilatationalSpeedOfCalibratedLatex) {
    const cplx cs = dilatational_speed(ShellMaterial::latex_calibrated());
    EXPECT_NEAR(cs.real(), 68.394, 1e-3);
    EXPECT_DOUBLE_EQ(cs.imag(), 0.0);
}

TEST(Materials, LossyModulusGivesNonPositiveImaginarySpeed) {
    ShellMaterial m = ShellMaterial::latex_calibrated();
    m.youngs_modulus *= cplx(1.0, -0.1);
    EXPECT_LT(dilatational_speed(m).imag(), 0.0);
}

TEST(Materials, PoissonRatioAtOneIsRejected) {
    ShellMaterial m{cplx(1e6, 0.0), 1.0, 1000.0};
    EXPECT_THROW(dilatational_speed(m), DomainError);
}

TEST(Validation, ReferenceGeometryIsClean) {
    Scatterer s;
    s.position = {1.5, 0.0};
    s.ring = four_slit();
    EXPECT_TRUE(validate(s).empty());
    s.core = RigidCore{0.011};
    EXPECT_TRUE(validate(s).empty());
    s.core = ElasticShell{0.02, 0.00025, ShellMaterial::latex_calibrated()};
    EXPECT_TRUE(validate(s).empty());
}

TEST(Validation, OverlappingSlits) {
    SlitCylinder r{0.03, 0.002, {{0.0, 0.2}, {0.1, 0.2}}};
    EXPECT_TRUE(has_field(validate(r), "slits", Violation::Severity::Error));
}

TEST(Validation, SlitsCoveringEverything) {
    SlitCylinder r = SlitCylinder::periodic(0.03, 0.002, 4, 0.05);
    EXPECT_TRUE(has_errors(validate(r)));
}

TEST(Validation, ThickWallWarnsOnly) {
    SlitCylinder r = SlitCylinder::periodic(0.03, 0.01, 1, 0.004);
    const auto v = validate(r);
    EXPECT_FALSE(has_errors(v));
    EXPECT_TRUE(has_field(v, "wall_thickness", Violation::Severity::Warning));
}

TEST(Validation, CoreMustFitInsideWall) {
    EXPECT_TRUE(has_errors(validate(CoreSpec{RigidCore{0.026}}, 0.0255)));
    EXPECT_TRUE(has_errors(validate(CoreSpec{RigidCore{0.0}}, 0.0255)));
    EXPECT_TRUE(has_errors(validate(CoreSpec{ElasticShell{0.03, 0.00025, ShellMaterial::latex_calibrated()}}, 0.0255)));
}

TEST(Validation, ThickShellWarns) {
    const auto v = validate(CoreSpec{ElasticShell{0.02, 0.006, ShellMaterial::latex_calibrated()}}, 0.0255);
    EXPECT_FALSE(has_errors(v));
    EXPECT_TRUE(has_field(v, "thickness", Violation::Severity::Warning));
}

TEST(Validation, SourceInsideScatterer) {
    Scatterer s;
    s.position = {0.01, 0.0};
    s.ring = four_slit();
    EXPECT_TRUE(has_field(validate(s), "position", Violation::Severity::Error));
}

TEST(Validation, ArrayOverlapAndEmpty) {
    EXPECT_TRUE(has_errors(validate(ArrayLayout{})));
    Scatterer proto;
    proto.ring = four_slit();
    const auto tight = ArrayLayout::rectangular(2, 1, 0.05, {1.5, 0.0}, proto);
    EXPECT_TRUE(has_field(validate(tight), "overlap", Violation::Severity::Error) ||
                has_errors(validate(tight)));
    EXPECT_THROW(require_valid(validate(tight)), GeometryError);
}
