#pragma once

// Per-order scalar factors that parameterise the wall boundary operators:
//
//   core factor      c_n = C_n / B_n, ratio of second- to first-kind content
//                    of the cavity field, set by what the cavity contains;
//   admittance       I_n = (J_n + c_n Y_n) / (J_n' + c_n Y_n') at the inner
//                    wall radius (derivatives taken with respect to r);
//   slit Fourier     F_n = int_0^{2pi} f(theta) e^{-i n theta} dtheta, with f
//                    the indicator of the open slits.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "slitscat/errors.hpp"
#include "slitscat/model_types.hpp"
#include "slitscat/special_functions.hpp"

namespace slitscat {

namespace detail {

inline constexpr double pole_ratio = 1e-30;

inline void check_pole(cplx denominator, double scale, int n, double k, const char* what) {
    if (!(std::abs(denominator) > pole_ratio * scale) || !std::isfinite(std::abs(denominator))) {
        throw PoleError(std::string(what) + " pole at order " + std::to_string(n) + ", k = " +
                            std::to_string(k) + " 1/m",
                        n, k);
    }
}

// Core factor from precomputed tables; `table` is at k*a1 (rigid) or k*R
// (shell). Derivatives are d/dr = k d/dx.
inline cplx core_factor_from_table(const CoreSpec& core, const AcousticMedium& medium,
                                   const bessel::CylinderTable* table, double k, double omega,
                                   int n, ShellThicknessConvention convention) {
    if (std::holds_alternative<EmptyCore>(core)) return {0.0, 0.0};
    if (std::holds_alternative<RigidCore>(core)) {
        const double dj = table->dj(n);
        const double dy = table->dy(n);
        check_pole(dy, std::abs(dj), n, k, "rigid core factor");
        return {-dj / dy, 0.0};
    }
    const auto& shell = std::get<ElasticShell>(core);
    const double R = shell.mid_radius();
    const double thickness = convention == ShellThicknessConvention::HalfThickness
                                 ? shell.half_thickness()
                                 : shell.thickness;
    const cplx cs = dilatational_speed(shell.material);
    const cplx ks_r = omega * R / cs;
    const cplx s = ks_r * ks_r;
    const double n2 = static_cast<double>(n) * n;
    const cplx membrane = 1.0 - s + n2;
    const cplx inextensional = n2 - s;
    const double coupling =
        medium.density / (shell.material.density * std::numbers::pi * R * thickness);
    const double dj = k * table->dj(n);
    const double dy = k * table->dy(n);
    const cplx numerator = -dj * dj * membrane;
    const cplx a = dj * dy * membrane;
    const cplx b = inextensional * coupling;
    const cplx denominator = a + b;
    check_pole(denominator, std::max({std::abs(numerator), std::abs(a), std::abs(b)}), n, k,
               "elastic shell core factor");
    return numerator / denominator;
}

}  // namespace detail

// c_n for one order. `omega` is the angular frequency (only the shell uses it
// beyond k).
inline cplx core_factor(const CoreSpec& core, const AcousticMedium& medium, double k, double omega,
                        int n,
                        ShellThicknessConvention convention = ShellThicknessConvention::HalfThickness) {
    if (std::holds_alternative<EmptyCore>(core)) return {0.0, 0.0};
    double radius = 0.0;
    if (const auto* r = std::get_if<RigidCore>(&core)) radius = r->radius;
    if (const auto* s = std::get_if<ElasticShell>(&core)) radius = s->mid_radius();
    const bessel::CylinderTable table(k * radius, std::abs(n));
    return detail::core_factor_from_table(core, medium, &table, k, omega, n, convention);
}

// I_n from c_n using a table at k*r_i.
inline cplx admittance_factor(cplx core, const bessel::CylinderTable& at_inner_wall, double k, int n) {
    const cplx numerator = at_inner_wall.j(n) + core * at_inner_wall.y(n);
    const cplx denominator = k * (at_inner_wall.dj(n) + core * at_inner_wall.dy(n));
    detail::check_pole(denominator, std::abs(numerator) * k, n, k, "wall admittance");
    return numerator / denominator;
}

inline cplx admittance_factor(cplx core, double k, double inner_radius, int n) {
    if (!(k * inner_radius > 0.0)) throw DomainError("admittance factor needs k r_i > 0");
    return admittance_factor(core, bessel::CylinderTable(k * inner_radius, std::abs(n)), k, n);
}

// Closed-form Fourier coefficient of the slit indicator for arbitrary layouts.
inline cplx slit_fourier(const SlitCylinder& ring, int n) {
    cplx sum{0.0, 0.0};
    if (n == 0) {
        for (const auto& s : ring.slits) sum += s.width;
        return sum;
    }
    const double nn = static_cast<double>(n);
    for (const auto& s : ring.slits) {
        sum += (2.0 / nn) * std::sin(0.5 * nn * s.width) * std::polar(1.0, -nn * s.center);
    }
    return sum;
}

// F_n for n in [-max_order, max_order].
class FourierTable {
public:
    FourierTable() = default;
    FourierTable(const SlitCylinder& ring, int max_order) : max_order_(max_order) {
        values_.reserve(static_cast<std::size_t>(2 * max_order + 1));
        for (int n = -max_order; n <= max_order; ++n) values_.push_back(slit_fourier(ring, n));
    }

    int max_order() const noexcept { return max_order_; }
    cplx operator[](int n) const { return values_.at(static_cast<std::size_t>(n + max_order_)); }

private:
    int max_order_ = 0;
    std::vector<cplx> values_;
};

// All per-order factors of one scatterer at one frequency, n in [-M, M]
// (Fourier coefficients over [-2M, 2M]).
struct KernelTable {
    int truncation = 0;
    std::vector<cplx> core;
    std::vector<cplx> admittance;
    FourierTable fourier;

    cplx core_at(int n) const { return core.at(static_cast<std::size_t>(n + truncation)); }
    cplx admittance_at(int n) const { return admittance.at(static_cast<std::size_t>(n + truncation)); }
};

struct KernelOptions {
    ShellThicknessConvention shell_convention = ShellThicknessConvention::HalfThickness;
};

inline KernelTable build_kernel(const Scatterer& scatterer, const AcousticMedium& medium, double k,
                                int truncation, FourierTable fourier, KernelOptions options = {}) {
    if (!(k > 0.0)) throw DomainError("wavenumber must be positive");
    const int M = truncation;
    const double omega = k * medium.sound_speed;
    KernelTable table;
    table.truncation = M;
    table.fourier = std::move(fourier);

    double core_radius = 0.0;
    if (const auto* r = std::get_if<RigidCore>(&scatterer.core)) core_radius = r->radius;
    if (const auto* s = std::get_if<ElasticShell>(&scatterer.core)) core_radius = s->mid_radius();
    bessel::CylinderTable core_table;
    if (core_radius > 0.0) core_table = bessel::CylinderTable(k * core_radius, M);
    const bessel::CylinderTable wall(k * scatterer.ring.inner_radius(), M);

    table.core.reserve(static_cast<std::size_t>(2 * M + 1));
    table.admittance.reserve(static_cast<std::size_t>(2 * M + 1));
    for (int n = -M; n <= M; ++n) {
        const cplx c = detail::core_factor_from_table(scatterer.core, medium, &core_table, k, omega, n,
                                                      options.shell_convention);
        table.core.push_back(c);
        table.admittance.push_back(admittance_factor(c, wall, k, n));
    }
    return table;
}

inline KernelTable build_kernel(const Scatterer& scatterer, const AcousticMedium& medium, double k,
                                int truncation, KernelOptions options = {}) {
    return build_kernel(scatterer, medium, k, truncation,
                        FourierTable(scatterer.oriented_ring(), 2 * truncation), options);
}

}  // namespace slitscat
