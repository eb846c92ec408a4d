#pragma once

// Frequency sweeps: data-parallel map over a grid, one independent solve per
// sample. Per-sample failures are recorded in the metadata, never fatal.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "slitscat/array_scattering.hpp"
#include "slitscat/effective_medium.hpp"
#include "slitscat/single_scattering.hpp"
#include "slitscat/spectrum.hpp"

namespace slitscat {

inline constexpr const char* thread_env_var = "SLITSCAT_THREADS";

// Worker count: SLITSCAT_THREADS if set to a positive integer, otherwise
// the available hardware parallelism.
inline unsigned sweep_threads() {
    if (const char* env = std::getenv(thread_env_var)) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Calls fn(i) for i in [0, count) on up to `threads` workers. Results must be
// written to disjoint slots by fn; the first exception is rethrown.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                         unsigned threads = sweep_threads()) {
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i; !failed && (i = next.fetch_add(1)) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// f_min, f_min + step, ... up to f_max inclusive (within step/1000).
inline std::vector<double> frequency_grid(double f_min, double f_max, double step) {
    if (!(f_min > 0.0)) throw DomainError("f_min must be positive");
    if (!(step > 0.0)) throw DomainError("frequency step must be positive");
    if (!(f_max >= f_min)) throw DomainError("f_max must not be below f_min");
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor((f_max - f_min) / step + 1e-3)) + 1;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) grid.push_back(f_min + static_cast<double>(i) * step);
    return grid;
}

inline void require_increasing(const std::vector<double>& grid) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw DomainError("frequency grid must be strictly increasing");
    }
}

struct SolveOptions {
    KernelOptions kernel;
    ApproxOptions approx;
};

namespace detail {

// Evaluates il(f) over the grid and assembles the spectrum. Solver, pole and
// assembly errors are recorded per sample; anything else propagates.
template <class Fn>
Spectrum sweep(const std::vector<double>& grid, Fn&& il, SpectrumMetadata metadata) {
    require_increasing(grid);
    const auto start = std::chrono::steady_clock::now();
    struct Slot {
        double value = 0.0;
        std::string error;
    };
    std::vector<Slot> slots(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        try {
            slots[i].value = il(grid[i]);
        } catch (const SolverError& e) {
            slots[i].error = e.what();
        } catch (const PoleError& e) {
            slots[i].error = e.what();
        } catch (const AssemblyError& e) {
            slots[i].error = e.what();
        }
    });
    Spectrum out;
    out.metadata = std::move(metadata);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!slots[i].error.empty()) {
            out.metadata.failures.push_back({grid[i], slots[i].error});
        } else if (!std::isfinite(slots[i].value)) {
            out.metadata.infinite_samples.push_back(grid[i]);
        } else {
            out.samples.push_back({grid[i], slots[i].value});
        }
    }
    out.metadata.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace detail

inline double single_insertion_loss(const Scatterer& scatterer, const AcousticMedium& medium, Vec2 receiver,
                                    double frequency, int truncation, ModelVariant variant,
                                    const SolveOptions& options = {}) {
    const double k = medium.wavenumber(frequency);
    const ModalSolution sol = variant == ModelVariant::Full
                                  ? solve_modal(scatterer, medium, k, truncation, options.kernel)
                                  : approx_modal(scatterer, medium, k, truncation, options.approx);
    return insertion_loss(sol, receiver);
}

inline Spectrum il_spectrum(const Scatterer& scatterer, const AcousticMedium& medium, Vec2 receiver,
                            const std::vector<double>& grid, int truncation,
                            ModelVariant variant = ModelVariant::Full, const SolveOptions& options = {}) {
    require_valid(validate(scatterer));
    if (!((receiver - scatterer.position).norm() > scatterer.ring.outer_radius)) {
        throw GeometryError("receiver lies inside or on the scatterer");
    }
    SpectrumMetadata meta;
    meta.variant = variant;
    meta.truncation = truncation;
    meta.receiver = receiver;
    meta.geometry_digest = geometry_digest({scatterer}, medium);
    return detail::sweep(
        grid,
        [&](double f) {
            return single_insertion_loss(scatterer, medium, receiver, f, truncation, variant, options);
        },
        std::move(meta));
}

inline double array_insertion_loss(const ArrayLayout& layout, const AcousticMedium& medium, Vec2 receiver,
                                   double frequency, int truncation, ModelVariant variant,
                                   const SolveOptions& options = {}) {
    const double k = medium.wavenumber(frequency);
    const ArrayModalSolution sol = variant == ModelVariant::Full
                                       ? solve_full_array(layout, medium, k, truncation, options.kernel)
                                       : solve_approx_array(layout, medium, k, truncation, options.approx);
    return insertion_loss(sol, receiver);
}

inline Spectrum array_il_spectrum(const ArrayLayout& layout, const AcousticMedium& medium, Vec2 receiver,
                                  const std::vector<double>& grid, int truncation,
                                  ModelVariant variant = ModelVariant::Approx, const SolveOptions& options = {}) {
    if (layout.scatterers.empty()) throw GeometryError("array layout has no scatterers");
    require_valid(validate(layout));
    for (const auto& s : layout.scatterers) {
        if (!((receiver - s.position).norm() > s.ring.outer_radius)) {
            throw GeometryError("receiver lies inside or on a scatterer");
        }
    }
    SpectrumMetadata meta;
    meta.variant = variant;
    meta.truncation = truncation;
    meta.receiver = receiver;
    meta.geometry_digest = geometry_digest(layout.scatterers, medium);
    return detail::sweep(
        grid,
        [&](double f) {
            return array_insertion_loss(layout, medium, receiver, f, truncation, variant, options);
        },
        std::move(meta));
}

}  // namespace slitscat
