#pragma once

// Geometry, media and materials shared by every solver.
//
// All lengths are metres, angles radians, frequencies Hz. Values are plain
// aggregates: construct, validate once, then share read-only.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "slitscat/errors.hpp"

namespace slitscat {

using cplx = std::complex<double>;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double norm() const { return std::hypot(x, y); }
    double angle() const { return std::atan2(y, x); }

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

struct AcousticMedium {
    double sound_speed = 343.0;  // m/s, air at 20 C
    double density = 1.204;      // kg/m^3

    double wavenumber(double frequency) const {
        return 2.0 * std::numbers::pi * frequency / sound_speed;
    }
};

struct Slit {
    double center = 0.0;  // rad
    double width = 0.0;   // subtended angle, rad
};

struct SlitCylinder {
    double outer_radius = 0.0;
    double wall_thickness = 0.0;
    std::vector<Slit> slits;

    double inner_radius() const { return outer_radius - wall_thickness; }
    // Arc length of a slit measured on the outer surface.
    double slit_width(std::size_t l) const { return slits.at(l).width * outer_radius; }

    // N identical slits of arc width `slit_width`, equally spaced, the first
    // centred at `first_center`.
    static SlitCylinder periodic(double outer_radius, double wall_thickness, int count,
                                 double slit_width, double first_center = 0.0) {
        SlitCylinder ring{outer_radius, wall_thickness, {}};
        const double phi = slit_width / outer_radius;
        for (int l = 0; l < count; ++l) {
            ring.slits.push_back({first_center + 2.0 * std::numbers::pi * l / count, phi});
        }
        return ring;
    }

    // True when all slits share one width and are equally spaced on the circle.
    bool periodic_identical(double tol = 1e-12) const {
        const std::size_t n = slits.size();
        if (n <= 1) return true;
        std::vector<double> centers;
        for (const auto& s : slits) {
            if (std::abs(s.width - slits.front().width) > tol) return false;
            centers.push_back(std::remainder(s.center - slits.front().center, 2.0 * std::numbers::pi));
        }
        for (double& c : centers) {
            if (c < -tol) c += 2.0 * std::numbers::pi;
        }
        std::sort(centers.begin(), centers.end());
        const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
        for (std::size_t l = 0; l < n; ++l) {
            if (std::abs(centers[l] - step * static_cast<double>(l)) > 1e-9) return false;
        }
        return true;
    }
};

struct ShellMaterial {
    cplx youngs_modulus{0.0, 0.0};  // Pa; negative imaginary part adds loss
    double poisson_ratio = 0.0;
    double density = 0.0;  // kg/m^3

    // Latex calibrated so the bare-shell breathing resonance of the reference
    // shell (outer radius 0.02 m, thickness 0.25 mm) in default air sits at
    // 1270 Hz. E is the root of that condition; see tests/test_effective_medium.
    static ShellMaterial latex_calibrated() { return {cplx{3.860679342913366e6, 0.0}, 0.4997, 1100.0}; }
};

// Which length the shell/fluid coupling term of the elastic core factor uses.
// HalfThickness follows from a thin membrane ring of mass 2 rho_s h_s per unit
// area loaded by the cavity pressure; FullThickness is the literal alternative.
enum class ShellThicknessConvention { HalfThickness, FullThickness };

struct EmptyCore {};

struct RigidCore {
    double radius = 0.0;
};

struct ElasticShell {
    double outer_radius = 0.0;  // a1
    double thickness = 0.0;     // 2 h_s
    ShellMaterial material;

    double inner_radius() const { return outer_radius - thickness; }
    double mid_radius() const { return 0.5 * (outer_radius + inner_radius()); }
    double half_thickness() const { return 0.5 * thickness; }
};

using CoreSpec = std::variant<EmptyCore, RigidCore, ElasticShell>;

// Outer radius of whatever sits inside the cavity (0 for an empty cavity).
inline double core_outer_radius(const CoreSpec& core) {
    if (const auto* r = std::get_if<RigidCore>(&core)) return r->radius;
    if (const auto* s = std::get_if<ElasticShell>(&core)) return s->outer_radius;
    return 0.0;
}

inline const char* core_name(const CoreSpec& core) {
    if (std::holds_alternative<RigidCore>(core)) return "rigid";
    if (std::holds_alternative<ElasticShell>(core)) return "shell";
    return "empty";
}

struct Scatterer {
    Vec2 position;  // centre, relative to the line source at the origin
    SlitCylinder ring;
    CoreSpec core = EmptyCore{};
    double orientation = 0.0;  // rigid rotation of the slit pattern, rad

    // Slit layout in the global angular frame (orientation applied).
    SlitCylinder oriented_ring() const {
        SlitCylinder r = ring;
        for (auto& s : r.slits) s.center += orientation;
        return r;
    }
};

struct ArrayLayout {
    std::vector<Scatterer> scatterers;

    // nx columns along x, ny rows along y, lattice constant L, centred on
    // `center`. Every site receives a copy of `prototype` (its position is
    // overwritten).
    static ArrayLayout rectangular(int nx, int ny, double lattice_constant, Vec2 center,
                                   const Scatterer& prototype) {
        ArrayLayout layout;
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < ny; ++j) {
                Scatterer s = prototype;
                s.position = {center.x + (i - 0.5 * (nx - 1)) * lattice_constant,
                              center.y + (j - 0.5 * (ny - 1)) * lattice_constant};
                layout.scatterers.push_back(std::move(s));
            }
        }
        return layout;
    }

    std::size_t size() const { return scatterers.size(); }
};

// ---------------------------------------------------------------------------
// Derived quantities

// Dilatational (plate) wave speed sqrt(E / (rho_s (1 - nu^2))). The principal
// square root keeps Im(c_s) <= 0 when Im(E) <= 0.
inline cplx dilatational_speed(const ShellMaterial& m) {
    const double denom = 1.0 - m.poisson_ratio * m.poisson_ratio;
    if (!(denom > 0.0)) throw DomainError("Poisson ratio must satisfy nu^2 < 1");
    if (!(m.density > 0.0)) throw DomainError("shell density must be positive");
    return std::sqrt(m.youngs_modulus / (m.density * denom));
}

// Open fraction of the circumference, N d / (2 pi r_o).
inline double filling_fraction(const SlitCylinder& ring) {
    if (ring.slits.empty()) return 0.0;
    if (!ring.periodic_identical()) {
        throw UnsupportedConfiguration("filling fraction needs identical, equally spaced slits");
    }
    return static_cast<double>(ring.slits.size()) * ring.slits.front().width /
           (2.0 * std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    enum class Severity { Error, Warning };

    std::string field;
    std::string message;
    Severity severity = Severity::Error;
};

inline bool has_errors(const std::vector<Violation>& v) {
    return std::any_of(v.begin(), v.end(),
                       [](const Violation& x) { return x.severity == Violation::Severity::Error; });
}

inline std::string describe(const std::vector<Violation>& violations) {
    std::ostringstream os;
    for (const auto& v : violations) {
        os << (v.severity == Violation::Severity::Error ? "error: " : "warning: ") << v.field << ": "
           << v.message << '\n';
    }
    return os.str();
}

// Thin-wall ratio above which the wall model is flagged.
inline constexpr double thin_wall_limit = 0.2;

inline std::vector<Violation> validate(const AcousticMedium& m) {
    std::vector<Violation> out;
    if (!(m.sound_speed > 0.0)) out.push_back({"medium.sound_speed", "must be > 0"});
    if (!(m.density > 0.0)) out.push_back({"medium.density", "must be > 0"});
    return out;
}

inline std::vector<Violation> validate(const SlitCylinder& ring, const std::string& prefix = "ring") {
    std::vector<Violation> out;
    if (!(ring.outer_radius > 0.0)) out.push_back({prefix + ".outer_radius", "must be > 0"});
    if (!(ring.wall_thickness > 0.0)) {
        out.push_back({prefix + ".wall_thickness", "must be > 0"});
    } else if (ring.wall_thickness >= ring.outer_radius) {
        out.push_back({prefix + ".wall_thickness", "must be smaller than outer_radius"});
    } else if (ring.wall_thickness / ring.outer_radius > thin_wall_limit) {
        out.push_back({prefix + ".wall_thickness",
                       "h/r_o exceeds " + std::to_string(thin_wall_limit) + "; thin-wall model assumed",
                       Violation::Severity::Warning});
    }

    const double two_pi = 2.0 * std::numbers::pi;
    double total = 0.0;
    for (std::size_t l = 0; l < ring.slits.size(); ++l) {
        const auto& s = ring.slits[l];
        if (!(s.width > 0.0)) {
            out.push_back({prefix + ".slits[" + std::to_string(l) + "].width", "must be > 0"});
        }
        total += std::max(s.width, 0.0);
    }
    if (total >= two_pi) {
        out.push_back({prefix + ".slits", "slits cover the whole circumference"});
    }
    for (std::size_t a = 0; a < ring.slits.size(); ++a) {
        for (std::size_t b = a + 1; b < ring.slits.size(); ++b) {
            const double gap = std::abs(std::remainder(ring.slits[a].center - ring.slits[b].center, two_pi));
            if (gap < 0.5 * (ring.slits[a].width + ring.slits[b].width)) {
                out.push_back({prefix + ".slits",
                               "slits " + std::to_string(a) + " and " + std::to_string(b) + " overlap"});
            }
        }
    }
    return out;
}

inline std::vector<Violation> validate(const CoreSpec& core, double inner_radius,
                                       const std::string& prefix = "core") {
    std::vector<Violation> out;
    if (const auto* r = std::get_if<RigidCore>(&core)) {
        if (!(r->radius > 0.0)) out.push_back({prefix + ".radius", "must be > 0"});
        if (!(r->radius < inner_radius)) out.push_back({prefix + ".radius", "must be < inner radius r_i"});
    } else if (const auto* s = std::get_if<ElasticShell>(&core)) {
        if (!(s->outer_radius > 0.0)) out.push_back({prefix + ".outer_radius", "must be > 0"});
        if (!(s->outer_radius < inner_radius)) {
            out.push_back({prefix + ".outer_radius", "must be < inner radius r_i"});
        }
        if (!(s->thickness > 0.0) || !(s->thickness < s->outer_radius)) {
            out.push_back({prefix + ".thickness", "must lie in (0, outer_radius)"});
        } else if (s->half_thickness() / s->mid_radius() > 0.1) {
            out.push_back({prefix + ".thickness", "h_s/R > 0.1; thin-shell model assumed",
                           Violation::Severity::Warning});
        }
        const auto& m = s->material;
        if (!(m.density > 0.0)) out.push_back({prefix + ".material.density", "must be > 0"});
        if (!(std::abs(m.poisson_ratio) < 0.5 + 1e-9)) {
            out.push_back({prefix + ".material.poisson_ratio", "|nu| must not exceed 0.5"});
        }
        if (!(m.youngs_modulus.real() > 0.0)) {
            out.push_back({prefix + ".material.youngs_modulus", "real part must be > 0"});
        }
    }
    return out;
}

inline std::vector<Violation> validate(const Scatterer& s, const std::string& prefix = "scatterer") {
    auto out = validate(s.ring, prefix + ".ring");
    auto core = validate(s.core, s.ring.inner_radius(), prefix + ".core");
    out.insert(out.end(), core.begin(), core.end());
    if (!(s.position.norm() > s.ring.outer_radius)) {
        out.push_back({prefix + ".position", "source at the origin lies inside the scatterer"});
    }
    return out;
}

inline std::vector<Violation> validate(const ArrayLayout& layout) {
    std::vector<Violation> out;
    if (layout.scatterers.empty()) out.push_back({"array.scatterers", "layout is empty"});
    for (std::size_t m = 0; m < layout.size(); ++m) {
        auto v = validate(layout.scatterers[m], "array.scatterers[" + std::to_string(m) + "]");
        out.insert(out.end(), v.begin(), v.end());
    }
    for (std::size_t m = 0; m < layout.size(); ++m) {
        for (std::size_t p = m + 1; p < layout.size(); ++p) {
            const auto& a = layout.scatterers[m];
            const auto& b = layout.scatterers[p];
            if (!((a.position - b.position).norm() > a.ring.outer_radius + b.ring.outer_radius)) {
                out.push_back({"array.scatterers",
                               "scatterers " + std::to_string(m) + " and " + std::to_string(p) + " overlap"});
            }
        }
    }
    return out;
}

inline void require_valid(const std::vector<Violation>& v) {
    if (has_errors(v)) throw GeometryError(describe(v));
}

}  // namespace slitscat
