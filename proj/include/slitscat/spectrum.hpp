#pragma once

// Insertion-loss spectra, peak picking and band-gap summaries, plus the CSV
// encoding shared by every command-line output.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "slitscat/model_types.hpp"

namespace slitscat {

enum class ModelVariant { Full, Approx };

inline const char* variant_name(ModelVariant v) { return v == ModelVariant::Full ? "full" : "approx"; }

struct SpectrumSample {
    double frequency = 0.0;       // Hz
    double insertion_loss = 0.0;  // dB
};

struct FailedSample {
    double frequency = 0.0;
    std::string reason;
};

struct SpectrumMetadata {
    ModelVariant variant = ModelVariant::Full;
    int truncation = 0;
    Vec2 receiver;
    std::string geometry_digest;
    std::string provenance;
    std::vector<FailedSample> failures;      // solver errors, skipped
    std::vector<double> infinite_samples;    // |p| = 0 at the receiver
    std::vector<std::string> notes;          // validity flags and the like
    double elapsed_seconds = 0.0;
};

struct Spectrum {
    std::vector<SpectrumSample> samples;  // strictly increasing frequency
    SpectrumMetadata metadata;

    bool empty() const { return samples.empty(); }
    std::size_t size() const { return samples.size(); }
};

// Fixed-precision number formatting used by every text output; identical
// input gives byte-identical output.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const Spectrum& s) {
    os << "frequency_hz,insertion_loss_db\n";
    for (const auto& p : s.samples) os << format_number(p.frequency) << ',' << format_number(p.insertion_loss) << '\n';
}

inline std::string to_csv(const Spectrum& s) {
    std::ostringstream os;
    write_csv(os, s);
    return os.str();
}

// ---------------------------------------------------------------------------
// Peaks

struct Peak {
    double frequency = 0.0;   // quadratic-interpolated
    double value = 0.0;       // dB at the interpolated vertex
    double prominence = 0.0;  // dB
    std::size_t index = 0;    // nearest grid sample
};

inline constexpr double default_peak_prominence = 1.0;  // dB

// Local maxima whose prominence (height above the higher of the two
// flanking minima, each taken up to the next higher sample or the edge) is
// at least `min_prominence`.
inline std::vector<Peak> find_peaks(const std::vector<SpectrumSample>& s,
                                    double min_prominence = default_peak_prominence) {
    std::vector<Peak> peaks;
    const std::size_t n = s.size();
    if (n < 3) return peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double v = s[i].insertion_loss;
        if (!(v > s[i - 1].insertion_loss)) continue;
        // plateau: advance to its right end
        std::size_t j = i;
        while (j + 1 < n && s[j + 1].insertion_loss == v) ++j;
        if (j + 1 >= n || !(v > s[j + 1].insertion_loss)) continue;

        double left_min = v;
        for (std::size_t l = i; l-- > 0;) {
            if (s[l].insertion_loss > v) break;
            left_min = std::min(left_min, s[l].insertion_loss);
        }
        double right_min = v;
        for (std::size_t r = j + 1; r < n; ++r) {
            if (s[r].insertion_loss > v) break;
            right_min = std::min(right_min, s[r].insertion_loss);
        }
        const double prominence = v - std::max(left_min, right_min);
        if (prominence < min_prominence) continue;

        Peak p{s[i].frequency, v, prominence, i};
        if (i == j) {
            const double f0 = s[i - 1].frequency, f1 = s[i].frequency, f2 = s[i + 1].frequency;
            const double y0 = s[i - 1].insertion_loss, y2 = s[i + 1].insertion_loss;
            const double step = 0.5 * (f2 - f0);
            const double curvature = y0 - 2.0 * v + y2;
            if (curvature < 0.0 && std::abs(f1 - f0 - (f2 - f1)) < 1e-9 * step) {
                const double offset = 0.5 * (y0 - y2) / curvature;
                p.frequency = f1 + offset * step;
                p.value = v - 0.25 * (y0 - y2) * offset;
            }
        } else {
            p.frequency = 0.5 * (s[i].frequency + s[j].frequency);
        }
        peaks.push_back(p);
        i = j;
    }
    return peaks;
}

inline std::vector<Peak> find_peaks(const Spectrum& s, double min_prominence = default_peak_prominence) {
    return find_peaks(s.samples, min_prominence);
}

// Lowest-frequency peak inside [f_lo, f_hi], if any.
inline const Peak* first_peak_in(const std::vector<Peak>& peaks, double f_lo, double f_hi) {
    for (const auto& p : peaks) {
        if (p.frequency >= f_lo && p.frequency <= f_hi) return &p;
    }
    return nullptr;
}

// Highest peak inside [f_lo, f_hi], if any.
inline const Peak* tallest_peak_in(const std::vector<Peak>& peaks, double f_lo, double f_hi) {
    const Peak* best = nullptr;
    for (const auto& p : peaks) {
        if (p.frequency >= f_lo && p.frequency <= f_hi && (!best || p.value > best->value)) best = &p;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Band gaps

struct BandGap {
    double center_hz = 0.0;
    double width_hz = 0.0;  // -3 dB width
    double peak_db = 0.0;
    bool width_clipped = false;  // spectrum edge reached before -3 dB
};

inline std::vector<BandGap> band_gaps(const Spectrum& s, double min_prominence = default_peak_prominence) {
    std::vector<BandGap> gaps;
    const auto& v = s.samples;
    for (const auto& p : find_peaks(s, min_prominence)) {
        const double level = v[p.index].insertion_loss - 3.0;
        BandGap g{p.frequency, 0.0, p.value, false};
        double lo = v.front().frequency;
        double hi = v.back().frequency;
        bool found_lo = false, found_hi = false;
        for (std::size_t l = p.index; l-- > 0;) {
            if (v[l].insertion_loss < level) {
                const double t = (level - v[l].insertion_loss) / (v[l + 1].insertion_loss - v[l].insertion_loss);
                lo = v[l].frequency + t * (v[l + 1].frequency - v[l].frequency);
                found_lo = true;
                break;
            }
        }
        for (std::size_t r = p.index + 1; r < v.size(); ++r) {
            if (v[r].insertion_loss < level) {
                const double t = (v[r - 1].insertion_loss - level) / (v[r - 1].insertion_loss - v[r].insertion_loss);
                hi = v[r - 1].frequency + t * (v[r].frequency - v[r - 1].frequency);
                found_hi = true;
                break;
            }
        }
        g.width_hz = hi - lo;
        g.width_clipped = !(found_lo && found_hi);
        gaps.push_back(g);
    }
    return gaps;
}

// ---------------------------------------------------------------------------
// Geometry digest (FNV-1a over a canonical text rendering)

inline std::string digest(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline void describe_scatterer(std::ostream& os, const Scatterer& s) {
    os << "pos(" << format_number(s.position.x) << ',' << format_number(s.position.y) << ")"
       << " ro=" << format_number(s.ring.outer_radius) << " h=" << format_number(s.ring.wall_thickness)
       << " orient=" << format_number(s.orientation) << " slits[";
    for (const auto& sl : s.ring.slits) os << format_number(sl.center) << ':' << format_number(sl.width) << ';';
    os << "] core=" << core_name(s.core);
    if (const auto* r = std::get_if<RigidCore>(&s.core)) os << ':' << format_number(r->radius);
    if (const auto* e = std::get_if<ElasticShell>(&s.core)) {
        os << ':' << format_number(e->outer_radius) << ':' << format_number(e->thickness) << ':'
           << format_number(e->material.youngs_modulus.real()) << ':' << format_number(e->material.youngs_modulus.imag())
           << ':' << format_number(e->material.poisson_ratio) << ':' << format_number(e->material.density);
    }
    os << '\n';
}

inline std::string geometry_digest(const std::vector<Scatterer>& scatterers, const AcousticMedium& medium) {
    std::ostringstream os;
    os << "c=" << format_number(medium.sound_speed) << " rho=" << format_number(medium.density) << '\n';
    for (const auto& s : scatterers) describe_scatterer(os, s);
    return digest(os.str());
}

}  // namespace slitscat
