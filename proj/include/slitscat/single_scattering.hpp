#pragma once

// Single scatterer: wall boundary operators, the truncated modal system, the
// rigid-cylinder closed form, and the exterior field.
//
// Near a scatterer the exterior field is sum_n [a_n J_n(k r) + A_n H_n(k r)]
// e^{i n theta} in local polar coordinates, with a_n the regular (incoming)
// part. Projecting the two slit/wall boundary conditions on e^{-i m theta}
// gives, row by row,
//
//     sum_n X_mn A_n + sum_n Y_mn a_n = 0,
//
// where X is built from H_n^(1) and Y from J_n at the outer radius:
//
//     X_mn = delta_mn 2 pi h H_n' - F_{m-n} (H_n - I_n H_n')
//            + (k^2 h / 2 pi) H_n S_mn,
//     S_mn = sum_j F_{m-j} F_{j-n} I_j.
//
// The source is a monopole H_0(k|r|) at the origin; by Graf's theorem its
// regular coefficients about a centre Q are a_n = H_n(kQ) e^{-i n (pi + alpha)}.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "slitscat/errors.hpp"
#include "slitscat/modal_kernel.hpp"
#include "slitscat/model_types.hpp"
#include "slitscat/special_functions.hpp"

namespace slitscat {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Tolerance on the relative residual of every dense solve.
inline constexpr double solve_residual_tolerance = 1e-8;

struct ModalSolution {
    int truncation = 0;
    std::vector<cplx> coefficients;  // A_n, n = -M..M
    Scatterer scatterer;
    double wavenumber = 0.0;

    cplx coefficient(int n) const {
        if (std::abs(n) > truncation) return {0.0, 0.0};
        return coefficients[static_cast<std::size_t>(n + truncation)];
    }
};

struct WallOperators {
    ComplexMatrix outgoing;  // X, acts on scattered coefficients A
    ComplexMatrix regular;   // Y, acts on incoming coefficients a
};

struct LinearSystem {
    ComplexMatrix matrix;
    ComplexVector rhs;
};

// Regular coefficients of the origin monopole about `center`.
inline ComplexVector source_coefficients(Vec2 center, double k, int truncation) {
    const int M = truncation;
    const double Q = center.norm();
    const double alpha = center.angle();
    const bessel::CylinderTable t(k * Q, M);
    ComplexVector a(2 * M + 1);
    for (int n = -M; n <= M; ++n) {
        a(n + M) = t.h1(n) * std::polar(1.0, -n * (std::numbers::pi + alpha));
    }
    return a;
}

inline WallOperators wall_operators(const Scatterer& scatterer, const KernelTable& kernel, double k,
                                    double frequency = std::numeric_limits<double>::quiet_NaN()) {
    const int M = kernel.truncation;
    const int size = 2 * M + 1;
    const double ro = scatterer.ring.outer_radius;
    const double h = scatterer.ring.wall_thickness;
    const bessel::CylinderTable outer(k * ro, M);

    ComplexMatrix fourier(size, size);
    for (int m = -M; m <= M; ++m) {
        for (int n = -M; n <= M; ++n) fourier(m + M, n + M) = kernel.fourier[m - n];
    }
    ComplexVector admittance(size);
    for (int n = -M; n <= M; ++n) admittance(n + M) = kernel.admittance_at(n);

    // S = F diag(I) F, shared by both operators.
    const ComplexMatrix convolution = fourier * admittance.asDiagonal() * fourier;
    const double volume_term = k * k * h / (2.0 * std::numbers::pi);

    WallOperators ops{ComplexMatrix(size, size), ComplexMatrix(size, size)};
    for (int n = -M; n <= M; ++n) {
        const int c = n + M;
        const cplx H = outer.h1(n);
        const cplx dH = k * outer.dh1(n);
        const double J = outer.j(n);
        const double dJ = k * outer.dj(n);
        const cplx In = admittance(c);
        const cplx h_bracket = H - In * dH;
        const cplx j_bracket = J - In * dJ;
        for (int r = 0; r < size; ++r) {
            ops.outgoing(r, c) = -fourier(r, c) * h_bracket + volume_term * H * convolution(r, c);
            ops.regular(r, c) = -fourier(r, c) * j_bracket + volume_term * J * convolution(r, c);
        }
        ops.outgoing(c, c) += 2.0 * std::numbers::pi * h * dH;
        ops.regular(c, c) += 2.0 * std::numbers::pi * h * dJ;
    }

    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            if (!std::isfinite(std::abs(ops.outgoing(r, c))) || !std::isfinite(std::abs(ops.regular(r, c)))) {
                throw AssemblyError("non-finite wall operator entry", 0, 0, r - M, c - M, frequency);
            }
        }
    }
    return ops;
}

inline LinearSystem assemble_single_system(const Scatterer& scatterer, double k, int truncation,
                                           const KernelTable& kernel,
                                           double frequency = std::numeric_limits<double>::quiet_NaN()) {
    if (truncation < 1) throw DomainError("truncation order must be >= 1");
    if (kernel.truncation != truncation) throw DomainError("kernel truncation mismatch");
    auto ops = wall_operators(scatterer, kernel, k, frequency);
    ComplexVector rhs = -(ops.regular * source_coefficients(scatterer.position, k, truncation));
    return {std::move(ops.outgoing), std::move(rhs)};
}

inline double relative_residual(const ComplexMatrix& a, const ComplexVector& x, const ComplexVector& b) {
    const double nb = b.norm();
    return (a * x - b).norm() / (nb > 0.0 ? nb : 1.0);
}

namespace detail {

// Power-of-two scale bringing max |v| near 1 (exact in floating point).
inline double binary_scale(double max_abs) {
    return max_abs > 0.0 && std::isfinite(max_abs) ? std::ldexp(1.0, -std::ilogb(max_abs)) : 1.0;
}

}  // namespace detail

// Dense LU solve with residual check. Rows, then columns, are equilibrated
// first: high multipole orders make raw entries span many decades (e.g.
// H_{2M}(kQ) Z_M at low frequency). The residual is measured on the
// equilibrated system.
inline ComplexVector dense_solve(const ComplexMatrix& a, const ComplexVector& b, double frequency) {
    const Eigen::Index n = a.rows();
    Eigen::VectorXd row(n), col(n);
    for (Eigen::Index i = 0; i < n; ++i) row(i) = detail::binary_scale(a.row(i).cwiseAbs().maxCoeff());
    ComplexMatrix s = row.asDiagonal() * a;
    for (Eigen::Index j = 0; j < n; ++j) col(j) = detail::binary_scale(s.col(j).cwiseAbs().maxCoeff());
    s = s * col.asDiagonal();
    const ComplexVector sb = row.asDiagonal() * b;

    const Eigen::PartialPivLU<ComplexMatrix> lu(s);
    const ComplexVector y = lu.solve(sb);
    if (!y.allFinite()) throw SolverError("singular modal system", frequency);
    const double residual = relative_residual(s, y, sb);
    if (!(residual < solve_residual_tolerance)) {
        throw SolverError("modal solve residual " + std::to_string(residual) + " above tolerance",
                          frequency);
    }
    return col.asDiagonal() * y;
}

inline ModalSolution to_solution(const ComplexVector& x, const Scatterer& s, double k, int M) {
    ModalSolution sol{M, std::vector<cplx>(x.data(), x.data() + x.size()), s, k};
    return sol;
}

inline ModalSolution solve_modal(const Scatterer& scatterer, const AcousticMedium& medium, double k,
                                 int truncation, KernelOptions options = {}) {
    const double frequency = k * medium.sound_speed / (2.0 * std::numbers::pi);
    const KernelTable kernel = build_kernel(scatterer, medium, k, truncation, options);
    const auto system = assemble_single_system(scatterer, k, truncation, kernel, frequency);
    return to_solution(dense_solve(system.matrix, system.rhs, frequency), scatterer, k, truncation);
}

// Closed-form coefficients of an unslit rigid cylinder of radius r_o at Q.
inline ModalSolution rigid_cylinder_coefficients(double outer_radius, Vec2 center, double k,
                                                 int truncation) {
    const int M = truncation;
    const bessel::CylinderTable wall(k * outer_radius, M);
    const bessel::CylinderTable src(k * center.norm(), M);
    const double alpha = center.angle();
    ModalSolution sol;
    sol.truncation = M;
    sol.wavenumber = k;
    sol.scatterer.position = center;
    sol.scatterer.ring = SlitCylinder{outer_radius, 0.0, {}};
    for (int m = -M; m <= M; ++m) {
        sol.coefficients.push_back(-(wall.dj(m) / wall.dh1(m)) * src.h1(m) *
                                   std::polar(1.0, -m * (std::numbers::pi + alpha)));
    }
    return sol;
}

inline cplx incident_field(Vec2 receiver, double k) {
    const double r = receiver.norm();
    if (!(r > 0.0)) throw DomainError("receiver coincides with the source");
    return bessel::hankel1(0, k * r);
}

// Scattered part of one expansion sum_n A_n H_n(k rhat) e^{i n thetahat}.
inline cplx scattered_field(const std::vector<cplx>& coefficients, int truncation, Vec2 center,
                            double outer_radius, Vec2 receiver, double k) {
    const Vec2 local = receiver - center;
    const double rhat = local.norm();
    if (!(rhat > outer_radius)) {
        throw DomainError("receiver lies inside or on a scatterer; interior field is not modelled");
    }
    const double theta = local.angle();
    const bessel::CylinderTable t(k * rhat, truncation);
    cplx sum{0.0, 0.0};
    for (int n = -truncation; n <= truncation; ++n) {
        sum += coefficients[static_cast<std::size_t>(n + truncation)] * t.h1(n) * std::polar(1.0, n * theta);
    }
    return sum;
}

inline cplx exterior_field(const ModalSolution& solution, Vec2 receiver) {
    const double k = solution.wavenumber;
    return incident_field(receiver, k) +
           scattered_field(solution.coefficients, solution.truncation, solution.scatterer.position,
                           solution.scatterer.ring.outer_radius, receiver, k);
}

// 20 log10 |incident / total|; +inf when the total field vanishes.
inline double insertion_loss(cplx incident, cplx total) {
    const double t = std::abs(total);
    if (t == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(std::abs(incident) / t);
}

inline double insertion_loss(const ModalSolution& solution, Vec2 receiver) {
    return insertion_loss(incident_field(receiver, solution.wavenumber), exterior_field(solution, receiver));
}

}  // namespace slitscat
