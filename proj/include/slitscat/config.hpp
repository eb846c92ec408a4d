#pragma once

// Run configuration: a versioned JSON document describing medium, scene,
// receivers, sweep, solver and output. Lengths in metres, frequencies in Hz,
// angles in radians unless given as a string with a "deg" (or "rad") suffix.
//
//   {
//     "schema_version": 1,
//     "name": "...", "description": "...",
//     "medium":   {"sound_speed": 343, "density": 1.204},
//     "scatterer": {...}            -- or --
//     "array":    {"lattice": {"columns": 3, "rows": 7, "constant": 0.086,
//                              "center": [1.586, 0]},
//                  "prototype": {...}}   or   {"scatterers": [{...}, ...]},
//     "receiver": [x, y]  or  "receivers": [[x, y], ...],
//     "sweep":    {"f_min": 100, "f_max": 5000, "step": 5},
//     "solver":   {"truncation": 35, "approx_truncation": 6,
//                  "variant": "full|approx|both",
//                  "end_correction": "lower_limit|series",
//                  "shell_thickness": "half|full"},
//     "output":   {"csv": "out.csv", "gnuplot": false}
//   }
//
// A scatterer is
//   {"position": [x, y], "outer_radius": r, "wall_thickness": h,
//    "orientation": 0,
//    "slits": {"count": N, "width": d, "first_center": 0}
//          or [{"center": "90deg", "width": d} | {"center": 0, "angular_width": phi}, ...],
//    "core": {"type": "empty"} | {"type": "rigid", "radius": a1}
//          | {"type": "shell", "outer_radius": a1, "thickness": t,
//             "material": "latex" | {"youngs_modulus": E or [re, im],
//                                    "poisson_ratio": nu, "density": rho_s}}}

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "slitscat/effective_medium.hpp"
#include "slitscat/model_types.hpp"
#include "slitscat/spectrum.hpp"

namespace slitscat {

inline constexpr int config_schema_version = 1;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class VariantSelection { Full, Approx, Both };

struct SweepConfig {
    double f_min = 100.0;
    double f_max = 5000.0;
    double step = 5.0;
};

struct SolverConfig {
    int truncation = 35;
    int approx_truncation = 0;  // 0: same as truncation
    VariantSelection variant = VariantSelection::Full;
    EndCorrectionModel end_correction = EndCorrectionModel::LowerLimit;
    ShellThicknessConvention shell_thickness = ShellThicknessConvention::HalfThickness;
};

struct OutputConfig {
    std::string csv;  // empty: standard output
    bool gnuplot = false;
};

struct RunConfig {
    int schema_version = config_schema_version;
    std::string name;
    std::string description;
    AcousticMedium medium;
    std::optional<Scatterer> scatterer;
    std::optional<ArrayLayout> array;
    std::vector<Vec2> receivers;
    SweepConfig sweep;
    SolverConfig solver;
    OutputConfig output;
};

namespace config_detail {

using nlohmann::json;

inline std::string where(const std::string& path, const std::string& msg) { return path + ": " + msg; }

inline const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(where(path, std::string("missing key '") + key + "'"));
    return j.at(key);
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(where(path, "expected a number"));
    return j.get<double>();
}

inline double number_or(const json& j, const char* key, double fallback, const std::string& path) {
    if (!j.contains(key)) return fallback;
    return number(j.at(key), path + "." + key);
}

// Radians from a number, or from "<value>deg" / "<value>rad".
inline double angle(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) throw ConfigError(where(path, "expected an angle (number or string with unit)"));
    std::string s = j.get<std::string>();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    double scale = 1.0;
    if (s.size() > 3 && s.compare(s.size() - 3, 3, "deg") == 0) {
        scale = std::numbers::pi / 180.0;
        s.resize(s.size() - 3);
    } else if (s.size() > 3 && s.compare(s.size() - 3, 3, "rad") == 0) {
        s.resize(s.size() - 3);
    } else {
        throw ConfigError(where(path, "angle string needs a 'deg' or 'rad' suffix"));
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
        if (used != s.size()) throw std::invalid_argument("trailing text");
        return v * scale;
    } catch (const std::exception&) {
        throw ConfigError(where(path, "malformed angle '" + j.get<std::string>() + "'"));
    }
}

inline Vec2 point(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) throw ConfigError(where(path, "expected [x, y]"));
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

inline ShellMaterial material(const json& j, const std::string& path) {
    if (j.is_string()) {
        if (j.get<std::string>() == "latex") return ShellMaterial::latex_calibrated();
        throw ConfigError(where(path, "unknown material preset '" + j.get<std::string>() + "'"));
    }
    ShellMaterial m;
    const json& e = require(j, "youngs_modulus", path);
    if (e.is_array()) {
        if (e.size() != 2) throw ConfigError(where(path + ".youngs_modulus", "expected [re, im]"));
        m.youngs_modulus = {number(e[0], path + ".youngs_modulus[0]"), number(e[1], path + ".youngs_modulus[1]")};
    } else {
        m.youngs_modulus = {number(e, path + ".youngs_modulus"), 0.0};
    }
    m.poisson_ratio = number(require(j, "poisson_ratio", path), path + ".poisson_ratio");
    m.density = number(require(j, "density", path), path + ".density");
    return m;
}

inline CoreSpec core(const json& j, const std::string& path) {
    const std::string type = require(j, "type", path).get<std::string>();
    if (type == "empty") return EmptyCore{};
    if (type == "rigid") return RigidCore{number(require(j, "radius", path), path + ".radius")};
    if (type == "shell") {
        ElasticShell s;
        s.outer_radius = number(require(j, "outer_radius", path), path + ".outer_radius");
        s.thickness = number(require(j, "thickness", path), path + ".thickness");
        s.material = material(require(j, "material", path), path + ".material");
        return s;
    }
    throw ConfigError(where(path + ".type", "unknown core type '" + type + "'"));
}

inline std::vector<Slit> slits(const json& j, double outer_radius, const std::string& path) {
    if (j.is_object()) {
        if (!j.contains("count")) throw ConfigError(where(path, "missing key 'count'"));
        const int count = j.at("count").get<int>();
        if (count < 0) throw ConfigError(where(path + ".count", "must be >= 0"));
        if (count == 0) return {};
        const double width = number(require(j, "width", path), path + ".width");
        const double first = j.contains("first_center") ? angle(j.at("first_center"), path + ".first_center") : 0.0;
        return SlitCylinder::periodic(outer_radius, 0.0, count, width, first).slits;
    }
    if (!j.is_array()) throw ConfigError(where(path, "expected an object or a list of slits"));
    std::vector<Slit> out;
    for (std::size_t l = 0; l < j.size(); ++l) {
        const std::string p = path + "[" + std::to_string(l) + "]";
        const double center = angle(require(j[l], "center", p), p + ".center");
        double width = 0.0;
        if (j[l].contains("angular_width")) {
            width = angle(j[l].at("angular_width"), p + ".angular_width");
        } else {
            width = number(require(j[l], "width", p), p + ".width") / outer_radius;
        }
        out.push_back({center, width});
    }
    return out;
}

inline Scatterer scatterer(const json& j, const std::string& path, bool needs_position) {
    Scatterer s;
    if (needs_position) s.position = point(require(j, "position", path), path + ".position");
    s.ring.outer_radius = number(require(j, "outer_radius", path), path + ".outer_radius");
    s.ring.wall_thickness = number(require(j, "wall_thickness", path), path + ".wall_thickness");
    if (!(s.ring.outer_radius > 0.0)) throw ConfigError(where(path + ".outer_radius", "must be > 0"));
    if (j.contains("slits")) s.ring.slits = slits(j.at("slits"), s.ring.outer_radius, path + ".slits");
    if (j.contains("orientation")) s.orientation = angle(j.at("orientation"), path + ".orientation");
    if (j.contains("core")) s.core = core(j.at("core"), path + ".core");
    return s;
}

inline ArrayLayout array(const json& j, const std::string& path) {
    if (j.contains("scatterers")) {
        ArrayLayout layout;
        const json& list = j.at("scatterers");
        if (!list.is_array()) throw ConfigError(where(path + ".scatterers", "expected a list"));
        for (std::size_t m = 0; m < list.size(); ++m) {
            layout.scatterers.push_back(scatterer(list[m], path + ".scatterers[" + std::to_string(m) + "]", true));
        }
        return layout;
    }
    const json& lattice = require(j, "lattice", path);
    const std::string lp = path + ".lattice";
    const int columns = require(lattice, "columns", lp).get<int>();
    const int rows = require(lattice, "rows", lp).get<int>();
    if (columns < 0 || rows < 0) throw ConfigError(where(lp, "columns and rows must be >= 0"));
    const double constant = number(require(lattice, "constant", lp), lp + ".constant");
    const Vec2 center = point(require(lattice, "center", lp), lp + ".center");
    const Scatterer proto = scatterer(require(j, "prototype", path), path + ".prototype", false);
    return ArrayLayout::rectangular(columns, rows, constant, center, proto);
}

template <class Enum>
Enum choice(const json& j, const std::string& path, std::initializer_list<std::pair<const char*, Enum>> options) {
    if (!j.is_string()) throw ConfigError(where(path, "expected a string"));
    const std::string v = j.get<std::string>();
    std::string allowed;
    for (const auto& [name, value] : options) {
        if (v == name) return value;
        allowed += std::string(allowed.empty() ? "" : "|") + name;
    }
    throw ConfigError(where(path, "expected one of " + allowed + ", got '" + v + "'"));
}

}  // namespace config_detail

inline VariantSelection parse_variant(const std::string& text) {
    return config_detail::choice<VariantSelection>(
        nlohmann::json(text), "variant",
        {{"full", VariantSelection::Full}, {"approx", VariantSelection::Approx}, {"both", VariantSelection::Both}});
}

inline RunConfig parse_config(const nlohmann::json& j) {
    using namespace config_detail;
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    RunConfig c;
    c.schema_version = require(j, "schema_version", "config").get<int>();
    if (c.schema_version != config_schema_version) {
        throw ConfigError("unsupported schema_version " + std::to_string(c.schema_version) + " (expected " +
                          std::to_string(config_schema_version) + ")");
    }
    c.name = j.value("name", "");
    c.description = j.value("description", "");

    if (j.contains("medium")) {
        const json& m = j.at("medium");
        c.medium.sound_speed = number_or(m, "sound_speed", c.medium.sound_speed, "medium");
        c.medium.density = number_or(m, "density", c.medium.density, "medium");
    }
    if (j.contains("scatterer") && j.contains("array")) {
        throw ConfigError("config: give either 'scatterer' or 'array', not both");
    }
    if (j.contains("scatterer")) c.scatterer = scatterer(j.at("scatterer"), "scatterer", true);
    if (j.contains("array")) c.array = array(j.at("array"), "array");

    if (j.contains("receiver")) c.receivers.push_back(point(j.at("receiver"), "receiver"));
    if (j.contains("receivers")) {
        const json& r = j.at("receivers");
        if (!r.is_array()) throw ConfigError("receivers: expected a list of [x, y]");
        for (std::size_t i = 0; i < r.size(); ++i) c.receivers.push_back(point(r[i], "receivers[" + std::to_string(i) + "]"));
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        c.sweep.f_min = number_or(s, "f_min", c.sweep.f_min, "sweep");
        c.sweep.f_max = number_or(s, "f_max", c.sweep.f_max, "sweep");
        c.sweep.step = number_or(s, "step", c.sweep.step, "sweep");
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        if (s.contains("truncation")) c.solver.truncation = s.at("truncation").get<int>();
        if (s.contains("approx_truncation")) c.solver.approx_truncation = s.at("approx_truncation").get<int>();
        if (s.contains("variant")) c.solver.variant = parse_variant(s.at("variant").get<std::string>());
        if (s.contains("end_correction")) {
            c.solver.end_correction = choice<EndCorrectionModel>(
                s.at("end_correction"), "solver.end_correction",
                {{"lower_limit", EndCorrectionModel::LowerLimit}, {"series", EndCorrectionModel::Series}});
        }
        if (s.contains("shell_thickness")) {
            c.solver.shell_thickness = choice<ShellThicknessConvention>(
                s.at("shell_thickness"), "solver.shell_thickness",
                {{"half", ShellThicknessConvention::HalfThickness}, {"full", ShellThicknessConvention::FullThickness}});
        }
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        c.output.csv = o.value("csv", "");
        c.output.gnuplot = o.value("gnuplot", false);
    }
    return c;
}

inline int truncation_for(const SolverConfig& s, ModelVariant v) {
    return v == ModelVariant::Approx && s.approx_truncation > 0 ? s.approx_truncation : s.truncation;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration '" + path + "'");
    try {
        return parse_config(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// Structural checks beyond per-object geometry validation.
inline std::vector<Violation> validate(const RunConfig& c) {
    std::vector<Violation> out = validate(c.medium);
    if (!(c.sweep.f_min > 0.0)) out.push_back({"sweep.f_min", "must be > 0"});
    if (!(c.sweep.step > 0.0)) out.push_back({"sweep.step", "must be > 0"});
    if (!(c.sweep.f_max >= c.sweep.f_min)) out.push_back({"sweep.f_max", "empty sweep range (f_max < f_min)"});
    if (c.solver.truncation < 1) out.push_back({"solver.truncation", "must be >= 1"});
    if (c.solver.approx_truncation < 0) out.push_back({"solver.approx_truncation", "must be >= 0"});
    if (c.scatterer) {
        auto v = validate(*c.scatterer);
        out.insert(out.end(), v.begin(), v.end());
    }
    if (c.array) {
        auto v = validate(*c.array);
        out.insert(out.end(), v.begin(), v.end());
    }
    std::vector<const Scatterer*> all;
    if (c.scatterer) all.push_back(&*c.scatterer);
    if (c.array) {
        for (const auto& s : c.array->scatterers) all.push_back(&s);
    }
    for (std::size_t i = 0; i < c.receivers.size(); ++i) {
        const std::string field = "receivers[" + std::to_string(i) + "]";
        if (!(c.receivers[i].norm() > 0.0)) out.push_back({field, "coincides with the source"});
        for (const auto* s : all) {
            if (!((c.receivers[i] - s->position).norm() > s->ring.outer_radius)) {
                out.push_back({field, "lies inside or on a scatterer"});
                break;
            }
        }
    }
    return out;
}

}  // namespace slitscat
