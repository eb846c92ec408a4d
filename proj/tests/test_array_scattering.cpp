#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "slitscat/array_scattering.hpp"
#include "slitscat/spectra.hpp"

using namespace slitscat;

namespace {

const AcousticMedium air;

Scatterer prototype(int slits, CoreSpec core = EmptyCore{}) {
    Scatterer s;
    s.ring = SlitCylinder::periodic(0.0275, 0.002, slits, 0.004);
    s.core = core;
    return s;
}

Scatterer at(Scatterer s, Vec2 p) {
    s.position = p;
    return s;
}

// Hankel function from the standard library, used as an independent oracle.
cplx std_hankel(int n, double x) {
    const int a = std::abs(n);
    const double sign = (n < 0 && (a % 2 == 1)) ? -1.0 : 1.0;
    return sign * cplx(std::cyl_bessel_j(a, x), std::cyl_neumann(a, x));
}

// Total field summed directly from every centre (no addition theorem).
cplx direct_field(const ArrayModalSolution& sol, Vec2 x) {
    const double k = sol.wavenumber;
    cplx p = std_hankel(0, k * x.norm());
    const int M = sol.truncation;
    for (std::size_t m = 0; m < sol.layout.size(); ++m) {
        const Vec2 d = x - sol.layout.scatterers[m].position;
        for (int n = -M; n <= M; ++n) p += sol.coefficient(m, n) * std_hankel(n, k * d.norm()) * std::polar(1.0, n * d.angle());
    }
    return p;
}

}  // namespace

TEST(Translation, AdditionTheoremReproducesShiftedWave) {
    const double k = 30.0;
    const Vec2 from{1.2, 0.3}, to{1.29, 0.21};
    const int M = 4;
    std::vector<cplx> coeffs(2 * M + 1);
    for (int n = -M; n <= M; ++n) coeffs[n + M] = cplx(std::cos(0.7 * n), std::sin(0.3 * n + 0.1)) / (1.0 + n * n);
    for (double r : {0.005, 0.02, 0.04}) {
        for (double th : {0.0, 1.1, 2.9, -2.0}) {
            const Vec2 point = to + Vec2{r * std::cos(th), r * std::sin(th)};
            const cplx direct = scattered_field(coeffs, M, from, 1e-6, point, k);
            const cplx shifted = translated_field(coeffs, M, from, to, point, k, 40);
            EXPECT_LT(std::abs(direct - shifted), 1e-10 * std::abs(direct)) << r << " " << th;
        }
    }
}

TEST(Translation, BlockMatchesScalarRule) {
    const auto T = translation_block({0.5, 0.2}, {0.4, -0.1}, 12.0, 3);
    const Vec2 d = Vec2{0.5, 0.2} - Vec2{0.4, -0.1};
    for (int v = -3; v <= 3; ++v) {
        for (int n = -3; n <= 3; ++n) {
            const cplx expected = std_hankel(n - v, 12.0 * d.norm()) * std::polar(1.0, (n - v) * (std::numbers::pi + d.angle()));
            EXPECT_LT(std::abs(T(v + 3, n + 3) - expected), 1e-12 * std::abs(expected));
        }
    }
    EXPECT_THROW(translation_block({1.0, 1.0}, {1.0, 1.0}, 3.0, 2), GeometryError);
}

TEST(Array, SingleMemberReducesToSingleScatterer) {
    const Scatterer s = at(prototype(4, RigidCore{0.011}), {1.5, 0.1});
    const ArrayLayout layout{{s}};
    for (double f : {600.0, 2100.0}) {
        const double k = air.wavenumber(f);
        const auto full = solve_full_array(layout, air, k, 20);
        const auto single = solve_modal(s, air, k, 20);
        const auto approx = solve_approx_array(layout, air, k, 6);
        const auto approx_single = approx_modal(s, air, k, 6);
        for (int n = -20; n <= 20; ++n) {
            EXPECT_LT(std::abs(full.coefficient(0, n) - single.coefficient(n)), 1e-12 * std::abs(single.coefficient(n)) + 1e-300);
        }
        for (int n = -6; n <= 6; ++n) {
            EXPECT_LT(std::abs(approx.coefficient(0, n) - approx_single.coefficient(n)),
                      1e-12 * std::abs(approx_single.coefficient(n)) + 1e-300);
        }
    }
}

TEST(Array, RigidArraySatisfiesNeumannConditionDirectly) {
    // Unslit walls: the total normal velocity must vanish on every surface.
    Scatterer rigid = prototype(0);
    const auto layout = ArrayLayout::rectangular(2, 2, 0.086, {1.55, 0.02}, rigid);
    const double k = air.wavenumber(1800.0);
    const int M = 14;
    const auto sol = solve_full_array(layout, air, k, M);
    double incident_scale = 0.0, worst = 0.0;
    for (const auto& s : layout.scatterers) {
        const double ro = s.ring.outer_radius;
        const double h = 1e-6 * ro;
        for (int i = 0; i < 24; ++i) {
            const double th = 2 * std::numbers::pi * i / 24.0;
            const Vec2 n{std::cos(th), std::sin(th)};
            const Vec2 out = s.position + Vec2{(ro + h) * n.x, (ro + h) * n.y};
            const Vec2 in = s.position + Vec2{(ro - h) * n.x, (ro - h) * n.y};
            const cplx dp = (direct_field(sol, out) - direct_field(sol, in)) / (2 * h);
            const cplx dinc = (std_hankel(0, k * out.norm()) - std_hankel(0, k * in.norm())) / (2 * h);
            worst = std::max(worst, std::abs(dp));
            incident_scale = std::max(incident_scale, std::abs(dinc));
        }
    }
    EXPECT_LT(worst / incident_scale, 1e-6);
}

TEST(Array, IncomingCoefficientsMatchDirectFieldSampling) {
    // About each member, the field of the source and the other members is
    // regular; its angular Fourier coefficients on a small circle must equal
    // a^p + sum_s T^{ps} A^s.
    const auto layout = ArrayLayout::rectangular(2, 2, 0.086, {1.55, 0.0}, prototype(4));
    const double k = air.wavenumber(1300.0);
    const int M = 16;
    const auto sol = solve_full_array(layout, air, k, M);
    for (std::size_t p = 0; p < layout.size(); ++p) {
        const Vec2 c = layout.scatterers[p].position;
        ComplexVector incoming = source_coefficients(c, k, M);
        for (std::size_t s = 0; s < layout.size(); ++s) {
            if (s == p) continue;
            const Eigen::Map<const ComplexVector> a(sol.blocks[s].data(), 2 * M + 1);
            incoming += translation_block(layout.scatterers[s].position, c, k, M) * a;
        }
        const double r = 0.03;
        const int points = 128;
        for (int v = -5; v <= 5; ++v) {
            cplx sum{0.0, 0.0};
            for (int i = 0; i < points; ++i) {
                const double th = 2 * std::numbers::pi * i / points;
                const Vec2 x = c + Vec2{r * std::cos(th), r * std::sin(th)};
                cplx field = std_hankel(0, k * x.norm());
                for (std::size_t s = 0; s < layout.size(); ++s) {
                    if (s == p) continue;
                    const Vec2 d = x - layout.scatterers[s].position;
                    for (int n = -M; n <= M; ++n) {
                        field += sol.coefficient(s, n) * std_hankel(n, k * d.norm()) * std::polar(1.0, n * d.angle());
                    }
                }
                sum += field * std::polar(1.0, -v * th);
            }
            const cplx sampled = sum / (static_cast<double>(points) * std::cyl_bessel_j(std::abs(v), k * r) *
                                        ((v < 0 && std::abs(v) % 2 == 1) ? -1.0 : 1.0));
            EXPECT_LT(std::abs(sampled - incoming(v + M)), 1e-7 * std::abs(incoming(M))) << "p=" << p << " v=" << v;
        }
    }
}

TEST(Array, MemberOrderDoesNotMatter) {
    const Scatterer a = at(prototype(4), {1.5, 0.05}), b = at(prototype(1), {1.6, -0.04});
    const Vec2 rx{1.75, 0.01};
    const double f = 1400.0;
    for (auto variant : {ModelVariant::Full, ModelVariant::Approx}) {
        const int M = variant == ModelVariant::Full ? 25 : 6;
        const double ab = array_insertion_loss(ArrayLayout{{a, b}}, air, rx, f, M, variant);
        const double ba = array_insertion_loss(ArrayLayout{{b, a}}, air, rx, f, M, variant);
        EXPECT_NEAR(ab, ba, 1e-9);
    }
}

TEST(Array, MirrorSymmetricLayoutGivesMirrorSymmetricLoss) {
    const auto layout = ArrayLayout::rectangular(2, 3, 0.086, {1.55, 0.0}, prototype(4));
    const double f = 1700.0;
    for (auto variant : {ModelVariant::Full, ModelVariant::Approx}) {
        const int M = variant == ModelVariant::Full ? 20 : 6;
        const double up = array_insertion_loss(layout, air, {1.7, 0.03}, f, M, variant);
        const double down = array_insertion_loss(layout, air, {1.7, -0.03}, f, M, variant);
        EXPECT_NEAR(up, down, 1e-8);
    }
}

TEST(Array, FieldContinuousBetweenMembers) {
    const auto layout = ArrayLayout::rectangular(2, 2, 0.086, {1.55, 0.0}, prototype(4));
    const auto sol = solve_approx_array(layout, air, air.wavenumber(1200.0), 6);
    const Vec2 x{1.55, 0.0};
    const Vec2 dx{1e-7, 1e-7};
    EXPECT_LT(std::abs(array_total_field(sol, x + dx) - array_total_field(sol, x)), 1e-5 * std::abs(array_total_field(sol, x)));
}

TEST(Array, BlocksDecayAtConvergedTruncation) {
    const auto layout = ArrayLayout::rectangular(2, 2, 0.086, {1.55, 0.0}, prototype(4, RigidCore{0.011}));
    const auto sol = solve_full_array(layout, air, air.wavenumber(2000.0), 30);
    EXPECT_LT(block_decay(sol), 1e-6);
}

TEST(Array, SystemSizes) {
    const auto layout = ArrayLayout::rectangular(3, 7, 0.086, {1.586, 0.0}, prototype(4));
    const double k = air.wavenumber(1000.0);
    EXPECT_EQ(assemble_approx_array_system(layout, air, k, 6).system.matrix.rows(), 273);
    EXPECT_EQ(assemble_approx_array_system(layout, air, k, 35).system.matrix.rows(), 1491);
    EXPECT_EQ(assemble_full_array_system(layout, air, k, 6).matrix.rows(), 273);
}

TEST(Array, InvalidLayoutsAreRejected) {
    const double k = air.wavenumber(1000.0);
    EXPECT_THROW(solve_full_array(ArrayLayout{}, air, k, 5), GeometryError);
    const auto overlap = ArrayLayout{{at(prototype(4), {1.5, 0.0}), at(prototype(4), {1.54, 0.0})}};
    EXPECT_THROW(solve_full_array(overlap, air, k, 5), GeometryError);
    EXPECT_THROW(solve_approx_array(overlap, air, k, 5), GeometryError);
    const auto layout = ArrayLayout::rectangular(2, 2, 0.086, {1.55, 0.0}, prototype(4));
    const auto sol = solve_approx_array(layout, air, k, 5);
    EXPECT_THROW(array_total_field(sol, layout.scatterers[0].position + Vec2{0.01, 0.0}), DomainError);
    EXPECT_THROW(array_il_spectrum(layout, air, layout.scatterers[0].position, {500.0}, 5), GeometryError);
}

TEST(Array, ApproxTracksFullAtLowFrequency) {
    const auto layout = ArrayLayout::rectangular(2, 2, 0.086, {1.55, 0.0}, prototype(4));
    const Vec2 rx{1.7, 0.0};
    const double full = array_insertion_loss(layout, air, rx, 300.0, 20, ModelVariant::Full);
    const double approx = array_insertion_loss(layout, air, rx, 300.0, 6, ModelVariant::Approx);
    EXPECT_NEAR(full, approx, 0.5);
}

TEST(Array, HighOrderApproxSolveStaysWellScaledAtLowFrequency) {
    // H_{2M}(kQ) Z_M spans tens of decades at 300 Hz; equilibration keeps
    // the solve accurate and the result independent of M.
    const auto layout = ArrayLayout::rectangular(3, 7, 0.086, {1.586, 0.0}, prototype(4));
    const Vec2 rx{1.7495, 0.0};
    const double m6 = array_insertion_loss(layout, air, rx, 300.0, 6, ModelVariant::Approx);
    const double m10 = array_insertion_loss(layout, air, rx, 300.0, 10, ModelVariant::Approx);
    EXPECT_NEAR(m6, m10, 1e-6);
}
