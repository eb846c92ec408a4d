// slitscat: batch front end. Subcommands single, array, resonances, converge.
// Exit codes: 0 success, 1 solver failure, 2 usage or validation error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "slitscat/config.hpp"
#include "slitscat/slitscat.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace slitscat;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_solver = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string preset;
    std::string config;
    std::string preset_dir;
    std::string output;
    std::string variant;
    int orders = 0;
    std::optional<double> f_min, f_max, step;
    bool gnuplot = false;
};

fs::path preset_directory(const CommonOptions& o) {
    if (!o.preset_dir.empty()) return o.preset_dir;
    if (const char* env = std::getenv("SLITSCAT_PRESET_DIR")) return env;
#ifdef SLITSCAT_PRESET_DIR
    return SLITSCAT_PRESET_DIR;
#else
    return "presets";
#endif
}

RunConfig load(const CommonOptions& o) {
    if (o.preset.empty() == o.config.empty()) throw UsageError("give exactly one of --preset or --config");
    const fs::path path = o.config.empty() ? preset_directory(o) / (o.preset + ".json") : fs::path(o.config);
    RunConfig c = load_config(path.string());
    if (o.orders > 0) c.solver.truncation = c.solver.approx_truncation = o.orders;
    if (!o.variant.empty()) c.solver.variant = parse_variant(o.variant);
    if (o.f_min) c.sweep.f_min = *o.f_min;
    if (o.f_max) c.sweep.f_max = *o.f_max;
    if (o.step) c.sweep.step = *o.step;
    if (!o.output.empty()) c.output.csv = o.output;
    if (o.gnuplot) c.output.gnuplot = true;
    return c;
}

// Prints warnings, throws on errors.
void check(const std::vector<Violation>& v) {
    for (const auto& x : v) {
        if (x.severity == Violation::Severity::Warning) std::cerr << "warning: " << x.field << ": " << x.message << '\n';
    }
    if (has_errors(v)) {
        std::ostringstream os;
        for (const auto& x : v) {
            if (x.severity == Violation::Severity::Error) os << "\n  " << x.field << ": " << x.message;
        }
        throw UsageError("invalid configuration:" + os.str());
    }
}

std::vector<std::string> warnings_of(const std::vector<Violation>& v) {
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (x.severity == Violation::Severity::Warning) out.push_back(x.field + ": " + x.message);
    }
    return out;
}

SolveOptions solve_options(const RunConfig& c) {
    SolveOptions o;
    o.kernel.shell_convention = c.solver.shell_thickness;
    o.approx.end_correction = c.solver.end_correction;
    o.approx.shell_convention = c.solver.shell_thickness;
    return o;
}

std::vector<ModelVariant> variants(VariantSelection v) {
    switch (v) {
        case VariantSelection::Full: return {ModelVariant::Full};
        case VariantSelection::Approx: return {ModelVariant::Approx};
        default: return {ModelVariant::Full, ModelVariant::Approx};
    }
}

// out.csv -> out_<suffix>.csv
fs::path with_suffix(const fs::path& base, const std::string& suffix) {
    if (suffix.empty()) return base;
    return base.parent_path() / (base.stem().string() + "_" + suffix + base.extension().string());
}

fs::path sidecar(const fs::path& csv, const std::string& ext) {
    return csv.parent_path() / (csv.stem().string() + ext);
}

json peaks_json(const std::vector<Peak>& peaks) {
    json a = json::array();
    for (const auto& p : peaks) {
        a.push_back({{"frequency_hz", std::stod(format_number(p.frequency))},
                     {"insertion_loss_db", std::stod(format_number(p.value))},
                     {"prominence_db", std::stod(format_number(p.prominence))}});
    }
    return a;
}

json metadata_json(const RunConfig& c, const Spectrum& s) {
    const auto& m = s.metadata;
    json j;
    j["name"] = c.name;
    j["description"] = c.description;
    j["variant"] = variant_name(m.variant);
    j["truncation"] = m.truncation;
    j["receiver"] = {m.receiver.x, m.receiver.y};
    j["geometry_digest"] = m.geometry_digest;
    j["medium"] = {{"sound_speed", c.medium.sound_speed}, {"density", c.medium.density}};
    j["sweep"] = {{"f_min", c.sweep.f_min}, {"f_max", c.sweep.f_max}, {"step", c.sweep.step}};
    j["samples"] = s.size();
    j["failures"] = json::array();
    for (const auto& f : m.failures) j["failures"].push_back({{"frequency_hz", f.frequency}, {"reason", f.reason}});
    j["infinite_samples_hz"] = m.infinite_samples;
    j["notes"] = m.notes;
    j["peaks"] = peaks_json(find_peaks(s));
    return j;
}

void write_gnuplot(const fs::path& csv, const std::string& title) {
    std::ofstream gp(sidecar(csv, ".gp"));
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 'Frequency [Hz]'\nset ylabel 'Insertion loss [dB]'\n"
       << "set title '" << title << "'\nset grid\n"
       << "plot '" << csv.filename().string() << "' using 1:2 with lines lw 2\n";
}

// Writes CSV (+ sidecar) or prints it; returns the peaks line for the log.
void emit(const RunConfig& c, const Spectrum& s, const std::string& suffix) {
    if (c.output.csv.empty()) {
        if (!suffix.empty()) std::cout << "# " << suffix << '\n';
        write_csv(std::cout, s);
    } else {
        const fs::path csv = with_suffix(c.output.csv, suffix);
        if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
        std::ofstream out(csv);
        if (!out) throw UsageError("cannot write '" + csv.string() + "'");
        write_csv(out, s);
        std::ofstream meta(sidecar(csv, ".meta.json"));
        meta << metadata_json(c, s).dump(2) << '\n';
        if (c.output.gnuplot) write_gnuplot(csv, c.name.empty() ? csv.stem().string() : c.name);
        std::cerr << "wrote " << csv.string() << '\n';
    }
    std::cerr << "peaks (" << (suffix.empty() ? variant_name(s.metadata.variant) : suffix) << "):";
    for (const auto& p : find_peaks(s)) std::cerr << ' ' << format_number(std::round(p.frequency * 10) / 10) << " Hz";
    std::cerr << '\n';
    for (const auto& f : s.metadata.failures) {
        std::cerr << "solver failure at " << format_number(f.frequency) << " Hz: " << f.reason << '\n';
    }
}

std::vector<double> grid_of(const RunConfig& c) {
    if (!(c.sweep.f_max >= c.sweep.f_min)) throw UsageError("empty sweep range (f_max < f_min)");
    return frequency_grid(c.sweep.f_min, c.sweep.f_max, c.sweep.step);
}

std::vector<std::string> layer_notes(const Scatterer& s, const AcousticMedium& medium, const RunConfig& c,
                                     const std::vector<double>& grid) {
    std::vector<std::string> notes;
    if (s.ring.slits.empty() || !s.ring.periodic_identical()) return notes;
    const FluidLayer layer = layer_parameters(s.ring, medium, c.solver.end_correction);
    if (!layer.filling_fraction_valid) {
        notes.push_back("filling fraction " + format_number(layer.filling_fraction) +
                        " exceeds the effective-layer validity bound");
    }
    for (double f : grid) {
        if (!wavelength_condition(layer, medium, f)) {
            notes.push_back("effective-layer wavelength condition fails from " + format_number(f) + " Hz");
            break;
        }
    }
    return notes;
}

std::string suffix_for(std::size_t receiver, std::size_t receivers, ModelVariant v, bool both) {
    std::string s;
    if (receivers > 1) s = "r" + std::to_string(receiver + 1);
    if (both) s += std::string(s.empty() ? "" : "_") + variant_name(v);
    return s;
}

int finish(const std::vector<Spectrum>& spectra) {
    for (const auto& s : spectra) {
        if (!s.metadata.failures.empty()) return exit_solver;
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------

int run_single(const CommonOptions& o) {
    const RunConfig c = load(o);
    if (!c.scatterer) throw UsageError("'single' needs a 'scatterer' in the configuration");
    if (c.receivers.empty()) throw UsageError("configuration has no receiver");
    const auto violations = validate(c);
    check(violations);
    const auto grid = grid_of(c);
    const bool both = c.solver.variant == VariantSelection::Both;
    std::vector<Spectrum> spectra;
    for (std::size_t r = 0; r < c.receivers.size(); ++r) {
        for (ModelVariant v : variants(c.solver.variant)) {
            Spectrum s = il_spectrum(*c.scatterer, c.medium, c.receivers[r], grid, truncation_for(c.solver, v), v,
                                     solve_options(c));
            s.metadata.notes = warnings_of(violations);
            if (v == ModelVariant::Approx) {
                for (auto& n : layer_notes(*c.scatterer, c.medium, c, grid)) s.metadata.notes.push_back(n);
            }
            emit(c, s, suffix_for(r, c.receivers.size(), v, both));
            spectra.push_back(std::move(s));
        }
    }
    return finish(spectra);
}

// Max |IL_a - IL_f| / max |IL_f| over common samples below `limit` Hz.
struct Discrepancy {
    double max_abs_db = 0.0;
    double relative = 0.0;
};

Discrepancy discrepancy(const Spectrum& full, const Spectrum& approx, double limit) {
    Discrepancy d;
    double scale = 0.0;
    std::size_t j = 0;
    for (const auto& p : full.samples) {
        if (p.frequency >= limit) break;
        while (j < approx.size() && approx.samples[j].frequency < p.frequency) ++j;
        if (j == approx.size() || approx.samples[j].frequency != p.frequency) continue;
        d.max_abs_db = std::max(d.max_abs_db, std::abs(approx.samples[j].insertion_loss - p.insertion_loss));
        scale = std::max(scale, std::abs(p.insertion_loss));
    }
    d.relative = scale > 0.0 ? d.max_abs_db / scale : 0.0;
    return d;
}

json band_gaps_json(const RunConfig& c, const Spectrum& s) {
    json a = json::array();
    for (const auto& g : band_gaps(s)) {
        a.push_back({{"center_hz", std::stod(format_number(g.center_hz))},
                     {"width_hz", std::stod(format_number(g.width_hz))},
                     {"peak_db", std::stod(format_number(g.peak_db))},
                     {"width_clipped", g.width_clipped},
                     {"provenance", c.name + " (" + variant_name(s.metadata.variant) + ", M=" +
                                        std::to_string(s.metadata.truncation) + ")"}});
    }
    return a;
}

int run_array(const CommonOptions& o) {
    const RunConfig c = load(o);
    if (!c.array) throw UsageError("'array' needs an 'array' in the configuration");
    if (c.array->scatterers.empty()) throw UsageError("invalid configuration:\n  array.scatterers: layout is empty");
    if (c.receivers.empty()) throw UsageError("configuration has no receiver");
    const auto violations = validate(c);
    check(violations);
    const auto grid = grid_of(c);
    const bool both = c.solver.variant == VariantSelection::Both;
    std::vector<Spectrum> spectra;
    for (std::size_t r = 0; r < c.receivers.size(); ++r) {
        std::vector<Spectrum> pair;
        for (ModelVariant v : variants(c.solver.variant)) {
            Spectrum s = array_il_spectrum(*c.array, c.medium, c.receivers[r], grid, truncation_for(c.solver, v), v,
                                           solve_options(c));
            s.metadata.notes = warnings_of(violations);
            if (v == ModelVariant::Approx) {
                for (auto& n : layer_notes(c.array->scatterers.front(), c.medium, c, grid)) s.metadata.notes.push_back(n);
            }
            const std::string suffix = suffix_for(r, c.receivers.size(), v, both);
            emit(c, s, suffix);
            const json gaps = band_gaps_json(c, s);
            if (c.output.csv.empty()) {
                std::cout << "# band gaps" << (suffix.empty() ? "" : " (" + suffix + ")") << '\n' << gaps.dump(2) << '\n';
            } else {
                std::ofstream(sidecar(with_suffix(c.output.csv, suffix), ".bandgaps.json")) << gaps.dump(2) << '\n';
            }
            pair.push_back(std::move(s));
        }
        if (both) {
            const Discrepancy d = discrepancy(pair[0], pair[1], 2000.0);
            const double speedup = pair[1].metadata.elapsed_seconds > 0.0
                                       ? pair[0].metadata.elapsed_seconds / pair[1].metadata.elapsed_seconds
                                       : 0.0;
            std::cerr << "full vs approx below 2000 Hz: max |dIL| = " << format_number(d.max_abs_db)
                      << " dB, relative to max |IL| = " << format_number(d.relative)
                      << ", speedup = " << format_number(speedup) << "x\n";
        }
        for (auto& s : pair) spectra.push_back(std::move(s));
    }
    return finish(spectra);
}

// First sign change of the n = 0 layered determinant in [f_lo, f_hi], refined
// by bisection.
std::optional<double> determinant_root(const Scatterer& s, const AcousticMedium& m, ApproxOptions opts,
                                       double f_lo, double f_hi, double step) {
    double a = f_lo;
    double fa = approx_resonance_determinant(s, m, a, 0, opts);
    for (double b = f_lo + step; b <= f_hi; b += step) {
        const double fb = approx_resonance_determinant(s, m, b, 0, opts);
        if (std::signbit(fa) != std::signbit(fb)) {
            double lo = a, hi = b, flo = fa;
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (lo + hi);
                const double fm = approx_resonance_determinant(s, m, mid, 0, opts);
                if (std::signbit(fm) == std::signbit(flo)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        a = b;
        fa = fb;
    }
    return std::nullopt;
}

int run_resonances(const CommonOptions& o, bool as_json) {
    const RunConfig c = load(o);
    const Scatterer* sp = c.scatterer ? &*c.scatterer
                          : (c.array && !c.array->scatterers.empty()) ? &c.array->scatterers.front()
                                                                      : nullptr;
    if (!sp) throw UsageError("'resonances' needs a scatterer or a non-empty array");
    Scatterer s = *sp;
    if (s.position.norm() <= s.ring.outer_radius) s.position = {1.0 + s.ring.outer_radius, 0.0};
    check(validate(s));
    if (s.ring.slits.empty()) throw UsageError("resonance estimates need at least one slit");

    struct Row {
        std::string estimator;
        double value;
        std::string unit;
        std::string note;
    };
    std::vector<Row> rows;
    const double core_radius = core_outer_radius(s.core);
    const int N = static_cast<int>(s.ring.slits.size());
    const auto model = c.solver.end_correction;
    rows.push_back({"end_correction_lower_limit", end_correction(s.ring), "m", ""});
    rows.push_back({"end_correction_series", end_correction_series(s.ring), "m", "alternative estimator"});
    const FluidLayer layer = layer_parameters(s.ring, c.medium, model);
    rows.push_back({"filling_fraction", layer.filling_fraction, "-",
                    layer.filling_fraction_valid ? "" : "outside effective-layer validity"});
    rows.push_back({"layer_sound_speed", layer.sound_speed, "m/s", ""});
    rows.push_back({"layer_density", layer.density, "kg/m^3", ""});

    const auto est = helmholtz_resonance(s.ring, core_radius, c.medium, model);
    rows.push_back({"helmholtz_log_form", est.log_form, "Hz", "core radius " + format_number(core_radius) + " m"});
    SlitCylinder single = SlitCylinder::periodic(s.ring.outer_radius, s.ring.wall_thickness, 1, s.ring.slit_width(0),
                                                 s.ring.slits.front().center);
    const double one = helmholtz_resonance(single, core_radius, c.medium, model).thin_wall_form;
    rows.push_back({"helmholtz_thin_wall", est.thin_wall_form, "Hz",
                    "N=" + std::to_string(N) + "; ratio to N=1 = " + format_number(est.thin_wall_form / one) +
                        " (sqrt N = " + format_number(std::sqrt(static_cast<double>(N))) + ")"});

    if (const auto* shell = std::get_if<ElasticShell>(&s.core)) {
        rows.push_back({"shell_breathing", shell_axisymmetric_resonance(*shell, c.medium), "Hz", "bare shell, n = 0"});
        try {
            const auto [lo, hi] = coupled_resonances(s.ring, *shell, c.medium, model);
            rows.push_back({"coupled_lower", lo, "Hz", "slitted wall + shell"});
            rows.push_back({"coupled_upper", hi, "Hz", "slitted wall + shell"});
        } catch (const DomainError& e) {
            rows.push_back({"coupled", std::nan(""), "Hz", e.what()});
        }
    }
    ApproxOptions opts{model, c.solver.shell_thickness};
    if (const auto root = determinant_root(s, c.medium, opts, 20.0, 10000.0, 5.0)) {
        rows.push_back({"layered_determinant_n0", *root, "Hz", "first zero of the breathing-mode determinant"});
    }

    if (as_json) {
        json a = json::array();
        for (const auto& r : rows) {
            a.push_back({{"estimator", r.estimator}, {"value", std::isfinite(r.value) ? json(r.value) : json(nullptr)},
                         {"unit", r.unit}, {"note", r.note}});
        }
        std::cout << json{{"name", c.name}, {"rows", a}}.dump(2) << '\n';
    } else {
        std::printf("%-28s %16s %-7s %s\n", "estimator", "value", "unit", "note");
        for (const auto& r : rows) {
            std::printf("%-28s %16s %-7s %s\n", r.estimator.c_str(), format_number(r.value).c_str(), r.unit.c_str(),
                        r.note.c_str());
        }
    }
    return exit_ok;
}

// |a - b| within half a unit of the third significant figure (1e-3 dB floor).
bool agree3(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= std::max(5e-3 * scale, 1e-3);
}

int run_converge(const CommonOptions& o, std::vector<int> orders) {
    RunConfig c = load(o);
    if (orders.empty()) throw UsageError("--orders needs at least one value");
    std::sort(orders.begin(), orders.end());
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    if (orders.front() < 1) throw UsageError("truncation orders must be >= 1");
    if (c.receivers.empty()) throw UsageError("configuration has no receiver");
    check(validate(c));
    const auto grid = grid_of(c);
    const ModelVariant v = c.solver.variant == VariantSelection::Approx ? ModelVariant::Approx : ModelVariant::Full;

    std::vector<Spectrum> spectra;
    for (int M : orders) {
        Spectrum s = c.scatterer ? il_spectrum(*c.scatterer, c.medium, c.receivers.front(), grid, M, v, solve_options(c))
                     : c.array   ? array_il_spectrum(*c.array, c.medium, c.receivers.front(), grid, M, v, solve_options(c))
                                 : throw UsageError("configuration has no scene");
        if (!c.output.csv.empty()) {
            RunConfig per = c;
            emit(per, s, "M" + std::to_string(M));
        }
        spectra.push_back(std::move(s));
    }

    std::printf("%6s %6s %14s %14s %10s\n", "M", "next", "max|dIL| dB", "agree3 frac", "agree3");
    for (std::size_t i = 0; i + 1 < spectra.size(); ++i) {
        const auto& a = spectra[i].samples;
        const auto& b = spectra[i + 1].samples;
        double worst = 0.0;
        std::size_t agree = 0, total = 0;
        for (std::size_t p = 0, q = 0; p < a.size() && q < b.size();) {
            if (a[p].frequency < b[q].frequency) {
                ++p;
            } else if (b[q].frequency < a[p].frequency) {
                ++q;
            } else {
                worst = std::max(worst, std::abs(a[p].insertion_loss - b[q].insertion_loss));
                agree += agree3(a[p].insertion_loss, b[q].insertion_loss);
                ++total;
                ++p;
                ++q;
            }
        }
        const double frac = total ? static_cast<double>(agree) / static_cast<double>(total) : 1.0;
        std::printf("%6d %6d %14s %14s %10s\n", orders[i], orders[i + 1], format_number(worst).c_str(),
                    format_number(frac).c_str(), agree == total ? "yes" : "no");
    }
    if (spectra.size() == 1) std::printf("single truncation order %d: nothing to compare\n", orders.front());
    return finish(spectra);
}

void add_common(CLI::App* cmd, CommonOptions& o, bool sweep = true) {
    cmd->add_option("--preset", o.preset, "Preset name (file <preset-dir>/<name>.json)");
    cmd->add_option("--config", o.config, "Configuration file (JSON, schema_version 1)");
    cmd->add_option("--preset-dir", o.preset_dir, "Directory holding preset files");
    if (!sweep) return;
    cmd->add_option("--variant", o.variant, "Model variant: full, approx or both")
        ->check(CLI::IsMember({"full", "approx", "both"}));
    cmd->add_option("--output,-o", o.output, "CSV output path (default: standard output)");
    cmd->add_option("--f-min", o.f_min, "Lowest frequency [Hz]");
    cmd->add_option("--f-max", o.f_max, "Highest frequency [Hz]");
    cmd->add_option("--step", o.step, "Frequency step [Hz]");
    cmd->add_flag("--gnuplot", o.gnuplot, "Also write a gnuplot script next to the CSV");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sound scattering by slitted cylinders and their arrays"};
    app.require_subcommand(1);
    CommonOptions o;
    std::vector<int> orders;
    bool as_json = false;

    auto* single = app.add_subcommand("single", "Insertion-loss spectrum of one scatterer");
    add_common(single, o);
    single->add_option("--orders", o.orders, "Truncation order M");
    auto* array = app.add_subcommand("array", "Insertion-loss spectrum and band gaps of an array");
    add_common(array, o);
    array->add_option("--orders", o.orders, "Truncation order M");
    auto* res = app.add_subcommand("resonances", "Closed-form resonance estimates");
    add_common(res, o, false);
    res->add_flag("--json", as_json, "Emit JSON instead of a table");
    auto* conv = app.add_subcommand("converge", "Truncation convergence study");
    add_common(conv, o);
    conv->add_option("--orders", orders, "Truncation orders, e.g. --orders 25 30 35 40")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*single) return run_single(o);
        if (*array) return run_array(o);
        if (*res) return run_resonances(o, as_json);
        if (*conv) return run_converge(o, orders);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const GeometryError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const UnsupportedConfiguration& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return exit_solver;
    }
    return exit_usage;
}
