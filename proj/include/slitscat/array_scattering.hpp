#pragma once

// Finite arrays of slitted scatterers driven by the origin monopole.
//
// The field is H_0(k r) + sum_m sum_n A_n^m H_n(k r_m) e^{i n theta_m}.
// Around scatterer p, the outgoing field of scatterer s re-expands (Graf)
// into regular waves
//
//     H_n(k r_s) e^{i n theta_s}
//         = sum_v H_{n-v}(k Q_ps) e^{i (n-v)(pi + alpha_ps)} J_v(k r_p) e^{i v theta_p},
//
// with Q_ps, alpha_ps the polar form of (centre_s - centre_p), valid for
// r_p < Q_ps. The translation block T^{ps}_{vn} is that factor, and the
// incoming field at p is a^p + sum_s T^{ps} A^s. Substituting into the wall
// conditions of each scatterer gives the full system
//
//     X^p A^p + sum_{s != p} Y^p T^{ps} A^s = -Y^p a^p.
//
// In the low-frequency approximation each scatterer responds through its
// layered-cylinder coefficients, A^p = -Z^p (incoming at p). Writing
// A^p = Z^p B^p yields the well-conditioned form
//
//     B^p + sum_{s != p} T^{ps} Z^s B^s = -a^p.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "slitscat/effective_medium.hpp"
#include "slitscat/errors.hpp"
#include "slitscat/modal_kernel.hpp"
#include "slitscat/model_types.hpp"
#include "slitscat/single_scattering.hpp"
#include "slitscat/special_functions.hpp"
#include "slitscat/spectrum.hpp"

namespace slitscat {

// T_{vn}: regular order-v content about `to` of the outgoing order-n wave
// centred at `from`; v, n in [-M, M].
inline ComplexMatrix translation_block(Vec2 from, Vec2 to, double k, int truncation) {
    const int M = truncation;
    const Vec2 d = from - to;
    const double Q = d.norm();
    if (!(Q > 0.0)) throw GeometryError("translation between coincident centres");
    const double alpha = d.angle();
    const bessel::CylinderTable t(k * Q, 2 * M);
    std::vector<cplx> factor(static_cast<std::size_t>(4 * M + 1));
    for (int q = -2 * M; q <= 2 * M; ++q) {
        factor[static_cast<std::size_t>(q + 2 * M)] = t.h1(q) * std::polar(1.0, q * (std::numbers::pi + alpha));
    }
    ComplexMatrix T(2 * M + 1, 2 * M + 1);
    for (int v = -M; v <= M; ++v) {
        for (int n = -M; n <= M; ++n) T(v + M, n + M) = factor[static_cast<std::size_t>(n - v + 2 * M)];
    }
    return T;
}

// Re-expands sum_n A_n H_n(k r_from) e^{i n theta_from} about `to` and
// evaluates it at `point`; only valid for |point - to| < |from - to|.
inline cplx translated_field(const std::vector<cplx>& coefficients, int truncation, Vec2 from, Vec2 to,
                             Vec2 point, double k, int regular_orders) {
    const Vec2 d = from - to;
    const double Q = d.norm();
    const double alpha = d.angle();
    const Vec2 local = point - to;
    const double r = local.norm();
    if (!(r < Q)) throw DomainError("translation point outside the addition-theorem disc");
    const double theta = local.angle();
    const int V = regular_orders;
    const bessel::CylinderTable shift(k * Q, V + truncation);
    const bessel::CylinderTable reg(k * r, V);
    cplx sum{0.0, 0.0};
    for (int v = -V; v <= V; ++v) {
        cplx c{0.0, 0.0};
        for (int n = -truncation; n <= truncation; ++n) {
            const int q = n - v;
            c += coefficients[static_cast<std::size_t>(n + truncation)] * shift.h1(q) *
                 std::polar(1.0, q * (std::numbers::pi + alpha));
        }
        sum += c * reg.j(v) * std::polar(1.0, v * theta);
    }
    return sum;
}

struct ArrayModalSolution {
    int truncation = 0;
    std::vector<std::vector<cplx>> blocks;  // A_n^m, one block per scatterer
    ArrayLayout layout;
    double wavenumber = 0.0;

    cplx coefficient(std::size_t scatterer, int n) const {
        if (std::abs(n) > truncation) return {0.0, 0.0};
        return blocks.at(scatterer)[static_cast<std::size_t>(n + truncation)];
    }
};

namespace detail {

// Scatterers that differ only in position share wall operators and
// layered coefficients; this keys them.
inline std::string shape_key(const Scatterer& s) {
    Scatterer copy = s;
    copy.position = {};
    std::ostringstream os;
    describe_scatterer(os, copy);
    return os.str();
}

inline void require_array(const ArrayLayout& layout) {
    if (layout.scatterers.empty()) throw GeometryError("array layout has no scatterers");
    const auto v = validate(layout);
    if (has_errors(v)) throw GeometryError(describe(v));
}

inline void check_block(const ComplexMatrix& m, int p, int s, double frequency) {
    const int M = static_cast<int>(m.rows() - 1) / 2;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (!std::isfinite(std::abs(m(r, c)))) {
                throw AssemblyError("non-finite array system entry", p, s, static_cast<int>(r) - M,
                                    static_cast<int>(c) - M, frequency);
            }
        }
    }
}

inline double frequency_of(const AcousticMedium& medium, double k) {
    return k * medium.sound_speed / (2.0 * std::numbers::pi);
}

}  // namespace detail

inline LinearSystem assemble_full_array_system(const ArrayLayout& layout, const AcousticMedium& medium,
                                               double k, int truncation, KernelOptions options = {}) {
    detail::require_array(layout);
    if (truncation < 1) throw DomainError("truncation order must be >= 1");
    const int M = truncation;
    const int size = 2 * M + 1;
    const int count = static_cast<int>(layout.size());
    const double frequency = detail::frequency_of(medium, k);

    std::map<std::string, WallOperators> cache;
    std::vector<const WallOperators*> ops(static_cast<std::size_t>(count));
    for (int p = 0; p < count; ++p) {
        const Scatterer& s = layout.scatterers[static_cast<std::size_t>(p)];
        const std::string key = detail::shape_key(s);
        auto it = cache.find(key);
        if (it == cache.end()) {
            const KernelTable kernel = build_kernel(s, medium, k, M, options);
            it = cache.emplace(key, wall_operators(s, kernel, k, frequency)).first;
        }
        ops[static_cast<std::size_t>(p)] = &it->second;
    }

    LinearSystem sys{ComplexMatrix::Zero(count * size, count * size), ComplexVector(count * size)};
    for (int p = 0; p < count; ++p) {
        const auto& op = *ops[static_cast<std::size_t>(p)];
        const Vec2 at = layout.scatterers[static_cast<std::size_t>(p)].position;
        sys.matrix.block(p * size, p * size, size, size) = op.outgoing;
        sys.rhs.segment(p * size, size) = -(op.regular * source_coefficients(at, k, M));
        for (int s = 0; s < count; ++s) {
            if (s == p) continue;
            const Vec2 from = layout.scatterers[static_cast<std::size_t>(s)].position;
            const ComplexMatrix block = op.regular * translation_block(from, at, k, M);
            detail::check_block(block, p, s, frequency);
            sys.matrix.block(p * size, s * size, size, size) = block;
        }
    }
    return sys;
}

// System in the auxiliary unknowns B (A^p = Z^p B^p); `weights` receives Z
// per scatterer.
struct ApproxArraySystem {
    LinearSystem system;
    std::vector<std::vector<cplx>> weights;
};

inline ApproxArraySystem assemble_approx_array_system(const ArrayLayout& layout, const AcousticMedium& medium,
                                                      double k, int truncation, ApproxOptions options = {}) {
    detail::require_array(layout);
    if (truncation < 1) throw DomainError("truncation order must be >= 1");
    const int M = truncation;
    const int size = 2 * M + 1;
    const int count = static_cast<int>(layout.size());
    const double frequency = detail::frequency_of(medium, k);

    std::map<std::string, std::vector<cplx>> cache;
    ApproxArraySystem out;
    out.weights.reserve(static_cast<std::size_t>(count));
    for (const auto& s : layout.scatterers) {
        const std::string key = detail::shape_key(s);
        auto it = cache.find(key);
        if (it == cache.end()) {
            it = cache.emplace(key, approx_scattering_coefficients(s, medium, k, M, options)).first;
        }
        out.weights.push_back(it->second);
    }

    auto& sys = out.system;
    sys.matrix = ComplexMatrix::Identity(count * size, count * size);
    sys.rhs = ComplexVector(count * size);
    for (int p = 0; p < count; ++p) {
        const Vec2 at = layout.scatterers[static_cast<std::size_t>(p)].position;
        sys.rhs.segment(p * size, size) = -source_coefficients(at, k, M);
        for (int s = 0; s < count; ++s) {
            if (s == p) continue;
            const Vec2 from = layout.scatterers[static_cast<std::size_t>(s)].position;
            const auto& z = out.weights[static_cast<std::size_t>(s)];
            const Eigen::Map<const ComplexVector> zv(z.data(), size);
            const ComplexMatrix block = translation_block(from, at, k, M) * zv.asDiagonal();
            detail::check_block(block, p, s, frequency);
            sys.matrix.block(p * size, s * size, size, size) = block;
        }
    }
    return out;
}

inline ArrayModalSolution solve_full_array(const ArrayLayout& layout, const AcousticMedium& medium, double k,
                                           int truncation, KernelOptions options = {}) {
    const auto sys = assemble_full_array_system(layout, medium, k, truncation, options);
    const ComplexVector x = dense_solve(sys.matrix, sys.rhs, detail::frequency_of(medium, k));
    const int size = 2 * truncation + 1;
    ArrayModalSolution sol{truncation, {}, layout, k};
    for (std::size_t p = 0; p < layout.size(); ++p) {
        const auto* begin = x.data() + static_cast<Eigen::Index>(p) * size;
        sol.blocks.emplace_back(begin, begin + size);
    }
    return sol;
}

inline ArrayModalSolution solve_approx_array(const ArrayLayout& layout, const AcousticMedium& medium, double k,
                                             int truncation, ApproxOptions options = {}) {
    const auto approx = assemble_approx_array_system(layout, medium, k, truncation, options);
    const ComplexVector b =
        dense_solve(approx.system.matrix, approx.system.rhs, detail::frequency_of(medium, k));
    const int size = 2 * truncation + 1;
    ArrayModalSolution sol{truncation, {}, layout, k};
    for (std::size_t p = 0; p < layout.size(); ++p) {
        std::vector<cplx> block(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) {
            block[static_cast<std::size_t>(i)] =
                approx.weights[p][static_cast<std::size_t>(i)] * b(static_cast<Eigen::Index>(p) * size + i);
        }
        sol.blocks.push_back(std::move(block));
    }
    return sol;
}

inline cplx array_total_field(const ArrayModalSolution& solution, Vec2 receiver) {
    const double k = solution.wavenumber;
    cplx total = incident_field(receiver, k);
    for (std::size_t m = 0; m < solution.layout.size(); ++m) {
        const auto& s = solution.layout.scatterers[m];
        total += scattered_field(solution.blocks[m], solution.truncation, s.position, s.ring.outer_radius, receiver,
                                 k);
    }
    return total;
}

inline double insertion_loss(const ArrayModalSolution& solution, Vec2 receiver) {
    return insertion_loss(incident_field(receiver, solution.wavenumber), array_total_field(solution, receiver));
}

// max over scatterers of |A_{+-M}| / max_n |A_n| (0 for an all-zero block).
inline double block_decay(const ArrayModalSolution& solution) {
    double worst = 0.0;
    for (const auto& b : solution.blocks) {
        double peak = 0.0;
        for (const auto& c : b) peak = std::max(peak, std::abs(c));
        if (peak == 0.0) continue;
        worst = std::max(worst, std::max(std::abs(b.front()), std::abs(b.back())) / peak);
    }
    return worst;
}

inline double coefficient_decay(const ModalSolution& solution) {
    double peak = 0.0;
    for (const auto& c : solution.coefficients) peak = std::max(peak, std::abs(c));
    if (peak == 0.0) return 0.0;
    return std::max(std::abs(solution.coefficients.front()), std::abs(solution.coefficients.back())) / peak;
}

}  // namespace slitscat
