#pragma once

// Low-frequency model: the slitted wall is replaced by a homogeneous fluid
// annulus of the same thickness. Its parameters follow from equating the
// plane-wave transmission of a fluid layer with that of a slitted plate:
//
//     Z = rho_l c_l / (rho c) = 1 / F,     k_l = k (h + 2 Delta) / h,
//
// so c_l = c h / (h + 2 Delta) and rho_l = rho (h + 2 Delta) / (h F), where F
// is the filling fraction and Delta the end correction of one slit face.
//
// With the layered cylinder in place the scattering coefficients decouple
// per order, A_n = -Z_n a_n, and closed-form resonance estimates follow.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "slitscat/errors.hpp"
#include "slitscat/modal_kernel.hpp"
#include "slitscat/model_types.hpp"
#include "slitscat/single_scattering.hpp"
#include "slitscat/special_functions.hpp"

namespace slitscat {

enum class EndCorrectionModel {
    LowerLimit,  // (d / pi) log(1 / sin(pi F / 2))
    Series,      // d / (F^2 pi^3) sum_n sin(F pi n) / n^3
};

namespace detail {

inline void require_periodic_slits(const SlitCylinder& ring) {
    if (ring.slits.empty()) throw UnsupportedConfiguration("effective layer needs at least one slit");
    if (!ring.periodic_identical()) {
        throw UnsupportedConfiguration("effective layer needs identical, equally spaced slits");
    }
}

}  // namespace detail

inline double end_correction(const SlitCylinder& ring) {
    detail::require_periodic_slits(ring);
    const double F = filling_fraction(ring);
    if (!(F < 1.0)) throw DomainError("end correction needs filling fraction < 1");
    const double d = ring.slit_width(0);
    return d / std::numbers::pi * std::log(1.0 / std::sin(0.5 * std::numbers::pi * F));
}

// Series estimator; summed until the 1/n^3 tail bound drops below 1e-10 of
// the partial sum.
inline double end_correction_series(const SlitCylinder& ring) {
    detail::require_periodic_slits(ring);
    const double F = filling_fraction(ring);
    if (!(F < 1.0)) throw DomainError("end correction needs filling fraction < 1");
    const double d = ring.slit_width(0);
    double sum = 0.0;
    for (long n = 1;; ++n) {
        const double nn = static_cast<double>(n);
        sum += std::sin(F * std::numbers::pi * nn) / (nn * nn * nn);
        // sum_{j>n} 1/j^3 < 1 / (2 n^2)
        if (0.5 / (nn * nn) < 1e-10 * std::abs(sum) || n > 10'000'000) break;
    }
    return d / (F * F * std::pow(std::numbers::pi, 3)) * sum;
}

inline double end_correction(const SlitCylinder& ring, EndCorrectionModel model) {
    return model == EndCorrectionModel::Series ? end_correction_series(ring) : end_correction(ring);
}

struct FluidLayer {
    double sound_speed = 0.0;
    double density = 0.0;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    double end_correction = 0.0;
    double filling_fraction = 0.0;
    // False when F >= 1/4; the layer is still built but lies outside the
    // regime where it tracks the slitted wall.
    bool filling_fraction_valid = true;

    double thickness() const { return outer_radius - inner_radius; }
    double wavenumber(double frequency) const {
        return 2.0 * std::numbers::pi * frequency / sound_speed;
    }
    double relative_impedance(const AcousticMedium& m) const {
        return density * sound_speed / (m.density * m.sound_speed);
    }
};

inline constexpr double max_valid_filling_fraction = 0.25;

inline FluidLayer layer_parameters(const SlitCylinder& ring, const AcousticMedium& medium,
                                   EndCorrectionModel model = EndCorrectionModel::LowerLimit) {
    const double F = filling_fraction(ring);
    const double delta = end_correction(ring, model);
    const double h = ring.wall_thickness;
    FluidLayer layer;
    layer.sound_speed = h / (h + 2.0 * delta) * medium.sound_speed;
    layer.density = (h + 2.0 * delta) / (h * F) * medium.density;
    layer.inner_radius = ring.inner_radius();
    layer.outer_radius = ring.outer_radius;
    layer.end_correction = delta;
    layer.filling_fraction = F;
    layer.filling_fraction_valid = F < max_valid_filling_fraction;
    return layer;
}

// Second validity condition: wavelength longer than the filling fraction
// (both dimensionless in the original statement; compared in metres here).
inline bool wavelength_condition(const FluidLayer& layer, const AcousticMedium& medium, double frequency) {
    return medium.sound_speed / frequency > layer.filling_fraction;
}

// Normal-incidence plane-wave transmission through a fluid layer of
// thickness h.
inline cplx layer_transmission(const FluidLayer& layer, const AcousticMedium& medium, double frequency) {
    const cplx i{0.0, 1.0};
    const double k = medium.wavenumber(frequency);
    const double kl = layer.wavenumber(frequency);
    const double h = layer.thickness();
    const double z = 1.0 / layer.relative_impedance(medium);
    const cplx num = 4.0 * z * std::exp(-i * k * h);
    const cplx den = (1.0 + z) * (1.0 + z) * std::exp(-i * kl * h) - (1.0 - z) * (1.0 - z) * std::exp(i * kl * h);
    return num / den;
}

// Transmission through the slitted plate with piston-like slit motion,
// using the wall impedance Zhat = F - i k Delta.
inline cplx perforated_transmission(const SlitCylinder& ring, const AcousticMedium& medium,
                                    double frequency,
                                    EndCorrectionModel model = EndCorrectionModel::LowerLimit) {
    const cplx i{0.0, 1.0};
    const double F = filling_fraction(ring);
    const double delta = end_correction(ring, model);
    const double k = medium.wavenumber(frequency);
    const double h = ring.wall_thickness;
    const cplx z = F - i * k * delta;
    const cplx num = 4.0 * F * std::exp(-i * k * h);
    const cplx den = (1.0 + z) * (1.0 + z) * std::exp(-i * k * h) - (1.0 - z) * (1.0 - z) * std::exp(i * k * h);
    return num / den;
}

// ---------------------------------------------------------------------------
// Layered-cylinder scattering

namespace detail {

// Numerator and denominator of Z_n. `outer` selects the outer radial
// function: H_n^(1) for scattering, Y_n for the resonance determinant.
struct LayeredRatio {
    cplx numerator;
    cplx denominator;
};

enum class OuterFunction { Hankel, SecondKind };

inline LayeredRatio layered_ratio(const FluidLayer& layer, const AcousticMedium& medium, cplx core,
                                  double k, double kl, int n, const bessel::CylinderTable& k_ri,
                                  const bessel::CylinderTable& kl_ri, const bessel::CylinderTable& k_ro,
                                  const bessel::CylinderTable& kl_ro, OuterFunction outer) {
    const double rho = medium.density;
    const double rl = layer.density;
    // Radial derivatives d/dr.
    const double J_i = k_ri.j(n), dJ_i = k * k_ri.dj(n);
    const double Y_i = k_ri.y(n), dY_i = k * k_ri.dy(n);
    const double Jl_i = kl_ri.j(n), dJl_i = kl * kl_ri.dj(n);
    const double Yl_i = kl_ri.y(n), dYl_i = kl * kl_ri.dy(n);

    // Layer field D J_n(k_l r) + E Y_n(k_l r), D : E = W1 : W2, from
    // continuity of rho p and dp/dr at the inner face.
    const cplx w1 = (-rho * dYl_i * Y_i + rl * Yl_i * dY_i) * core + rl * dJ_i * Yl_i - rho * J_i * dYl_i;
    const cplx w2 = (rho * dJl_i * Y_i - rl * Jl_i * dY_i) * core - rl * dJ_i * Jl_i + rho * J_i * dJl_i;

    // Layer value and slope at the outer face (W1 W3 and the bracket).
    const cplx value = w1 * kl_ro.j(n) + w2 * kl_ro.y(n);
    const cplx slope = kl * (w1 * kl_ro.dj(n) + w2 * kl_ro.dy(n));

    const double J_o = k_ro.j(n), dJ_o = k * k_ro.dj(n);
    const cplx H_o = outer == OuterFunction::Hankel ? k_ro.h1(n) : cplx{k_ro.y(n), 0.0};
    const cplx dH_o = outer == OuterFunction::Hankel ? k * k_ro.dh1(n) : cplx{k * k_ro.dy(n), 0.0};
    return {rl * value * dJ_o - rho * J_o * slope, rl * value * dH_o - rho * H_o * slope};
}

}  // namespace detail

struct ApproxOptions {
    EndCorrectionModel end_correction = EndCorrectionModel::LowerLimit;
    ShellThicknessConvention shell_convention = ShellThicknessConvention::HalfThickness;
};

// Z_n for n = -M..M of one scatterer at wavenumber k.
inline std::vector<cplx> approx_scattering_coefficients(const Scatterer& scatterer,
                                                        const AcousticMedium& medium, double k,
                                                        int truncation, ApproxOptions options = {}) {
    const FluidLayer layer = layer_parameters(scatterer.ring, medium, options.end_correction);
    const double omega = k * medium.sound_speed;
    const double kl = omega / layer.sound_speed;
    const int M = truncation;
    const KernelTable kernel = build_kernel(scatterer, medium, k, M, FourierTable{},
                                            KernelOptions{options.shell_convention});
    const bessel::CylinderTable k_ri(k * layer.inner_radius, M), kl_ri(kl * layer.inner_radius, M);
    const bessel::CylinderTable k_ro(k * layer.outer_radius, M), kl_ro(kl * layer.outer_radius, M);
    std::vector<cplx> z;
    z.reserve(static_cast<std::size_t>(2 * M + 1));
    for (int n = -M; n <= M; ++n) {
        const auto r = detail::layered_ratio(layer, medium, kernel.core_at(n), k, kl, n, k_ri, kl_ri, k_ro,
                                             kl_ro, detail::OuterFunction::Hankel);
        detail::check_pole(r.denominator, std::abs(r.numerator), n, k, "layered scattering coefficient");
        z.push_back(r.numerator / r.denominator);
    }
    return z;
}

// Single-order form taking an explicit layer and core factor.
inline cplx approx_scattering_coefficient(const FluidLayer& layer, const AcousticMedium& medium,
                                          cplx core, double k, int n) {
    const double kl = k * medium.sound_speed / layer.sound_speed;
    const int a = std::abs(n);
    const bessel::CylinderTable k_ri(k * layer.inner_radius, a), kl_ri(kl * layer.inner_radius, a);
    const bessel::CylinderTable k_ro(k * layer.outer_radius, a), kl_ro(kl * layer.outer_radius, a);
    const auto r = detail::layered_ratio(layer, medium, core, k, kl, n, k_ri, kl_ri, k_ro, kl_ro,
                                         detail::OuterFunction::Hankel);
    detail::check_pole(r.denominator, std::abs(r.numerator), n, k, "layered scattering coefficient");
    return r.numerator / r.denominator;
}

inline ModalSolution approx_modal(const Scatterer& scatterer, const AcousticMedium& medium, double k,
                                  int truncation, ApproxOptions options = {}) {
    const auto z = approx_scattering_coefficients(scatterer, medium, k, truncation, options);
    const ComplexVector a = source_coefficients(scatterer.position, k, truncation);
    ModalSolution sol{truncation, {}, scatterer, k};
    for (int n = -truncation; n <= truncation; ++n) {
        const auto idx = static_cast<std::size_t>(n + truncation);
        sol.coefficients.push_back(-z[idx] * a(n + truncation));
    }
    return sol;
}

// Real determinant whose zeros are the standing-wave resonances of order n
// (outer field of the second kind only). Used as a numerical cross-check of
// the closed-form estimates below.
inline double approx_resonance_determinant(const Scatterer& scatterer, const AcousticMedium& medium,
                                           double frequency, int n = 0, ApproxOptions options = {}) {
    const FluidLayer layer = layer_parameters(scatterer.ring, medium, options.end_correction);
    const double k = medium.wavenumber(frequency);
    const double kl = layer.wavenumber(frequency);
    const int a = std::abs(n);
    const cplx core = core_factor(scatterer.core, medium, k, k * medium.sound_speed, n,
                                  options.shell_convention);
    const bessel::CylinderTable k_ri(k * layer.inner_radius, a), kl_ri(kl * layer.inner_radius, a);
    const bessel::CylinderTable k_ro(k * layer.outer_radius, a), kl_ro(kl * layer.outer_radius, a);
    return detail::layered_ratio(layer, medium, core, k, kl, n, k_ri, kl_ri, k_ro, kl_ro,
                                 detail::OuterFunction::SecondKind)
        .denominator.real();
}

// ---------------------------------------------------------------------------
// Closed-form resonance estimates (breathing mode, n = 0)

struct HelmholtzEstimate {
    double log_form = 0.0;        // uses log(r_o / r_i) and the layer density
    double thin_wall_form = 0.0;  // log(r_o/r_i) ~ h / r_i, explicit in N and d
};

inline HelmholtzEstimate helmholtz_resonance(const SlitCylinder& ring, double core_radius,
                                             const AcousticMedium& medium,
                                             EndCorrectionModel model = EndCorrectionModel::LowerLimit) {
    const double ri = ring.inner_radius();
    const double ro = ring.outer_radius;
    if (!(core_radius < ri)) throw DomainError("core radius must be smaller than r_i");
    if (core_radius < 0.0) throw DomainError("core radius must be non-negative");
    const FluidLayer layer = layer_parameters(ring, medium, model);
    const double area = ri * ri - core_radius * core_radius;
    const double c_over_2pi = medium.sound_speed / (2.0 * std::numbers::pi);
    HelmholtzEstimate out;
    out.log_form = c_over_2pi * std::sqrt(2.0 * medium.density / (layer.density * area * std::log(ro / ri)));
    const double open_width = static_cast<double>(ring.slits.size()) * ring.slit_width(0);
    out.thin_wall_form =
        c_over_2pi *
        std::sqrt(open_width / (std::numbers::pi * area * (ring.wall_thickness + 2.0 * layer.end_correction)));
    return out;
}

inline double shell_axisymmetric_resonance(const ElasticShell& shell, const AcousticMedium& medium) {
    const double R = shell.mid_radius();
    const double hs = shell.half_thickness();
    const cplx cs = dilatational_speed(shell.material);
    const double cs2 = (cs * cs).real();
    const double c = medium.sound_speed;
    return c / (2.0 * std::numbers::pi) / R *
           std::sqrt(cs2 / (c * c) + (R / hs) * (medium.density / shell.material.density));
}

// Both roots of the coupled breathing resonance of slitted wall + shell,
// ascending. Uses Re(c_s^2) for lossy shells.
inline std::pair<double, double> coupled_resonances(const SlitCylinder& ring, const ElasticShell& shell,
                                                    const AcousticMedium& medium,
                                                    EndCorrectionModel model = EndCorrectionModel::LowerLimit) {
    const double ri = ring.inner_radius();
    const double ro = ring.outer_radius;
    const double R = shell.mid_radius();
    const double hs = shell.half_thickness();
    if (!(shell.outer_radius < ri)) throw DomainError("shell must fit inside the slitted wall");
    const FluidLayer layer = layer_parameters(ring, medium, model);
    const cplx cs = dilatational_speed(shell.material);
    const double cs2 = (cs * cs).real();
    const double c = medium.sound_speed;
    const double rho = medium.density;
    const double to_shell = rho / shell.material.density;
    const double to_layer = rho / layer.density;
    const double log_ratio = std::log(ro / ri);
    const double annulus = ri * ri - R * R;

    const double stiffness = (to_shell * ri * ri + cs2 / (c * c) * (hs / R) * annulus) * log_ratio;
    const double coupling = 2.0 * to_layer * hs * R;
    const double radicand = (stiffness - coupling) * (stiffness - coupling) +
                            8.0 * to_layer * to_shell * hs * R * R * R * log_ratio;
    if (!(radicand >= 0.0)) throw DomainError("coupled resonance radicand is negative");
    const double root = std::sqrt(radicand);
    const double denom = 2.0 * hs * R * annulus * log_ratio;
    const double lower = (stiffness + coupling - root) / denom;
    const double upper = (stiffness + coupling + root) / denom;
    if (!(lower > 0.0) || !(upper > 0.0)) throw DomainError("coupled resonance outside its asymptotic regime");
    const double scale = c / (2.0 * std::numbers::pi);
    return {scale * std::sqrt(lower), scale * std::sqrt(upper)};
}

}  // namespace slitscat
