#pragma once

// Cylinder functions of integer order and real argument: J_n, Y_n, H_n^(1)
// and their first derivatives with respect to the argument.
//
// Every solver in this library needs a contiguous range of orders at a fixed
// argument, so the primary entry point evaluates a whole table 0..N at once:
//
//   * J_n by Miller's backward recurrence, normalised with
//     J_0 + 2 (J_2 + J_4 + ...) = 1;
//   * Y_0 and Y_1 from Neumann's expansions in the even/odd J_n of the same
//     table (x <= 200), or from Hankel's asymptotic expansion beyond that;
//   * Y_n by forward recurrence, which is stable for the second kind.
//
// Negative orders follow from f_{-n} = (-1)^n f_n.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "slitscat/errors.hpp"

namespace slitscat {

using cplx = std::complex<double>;

namespace bessel {

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;
inline constexpr double rescale_threshold = 1e250;
inline constexpr double asymptotic_switch = 200.0;

inline void check_argument(double x, bool allow_zero) {
    if (!std::isfinite(x)) {
        throw DomainError("cylinder function argument is not finite");
    }
    if (x < 0.0 || (!allow_zero && x == 0.0)) {
        throw DomainError("cylinder function argument must be positive, got " +
                          std::to_string(x));
    }
}

inline int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

// Hankel asymptotic expansion for order nu in {0, 1}; returns {J, Y}.
inline std::pair<double, double> hankel_asymptotic(int nu, double x) {
    const double mu = 4.0 * nu * nu;
    const double eight_x = 8.0 * x;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    // term_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! (8x)^k); P takes even k with
    // alternating sign, Q odd k.
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * eight_x);
        if (std::abs(term) < 1e-17 * std::abs(p)) break;
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            case 0: p += term; break;
        }
    }
    const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
    const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    return {amp * (p * std::cos(chi) - q * std::sin(chi)),
            amp * (p * std::sin(chi) + q * std::cos(chi))};
}

// Backward recurrence for J_0..J_top, normalised. Returns the full ladder up
// to the starting order so Neumann sums can use the even/odd tail.
inline std::vector<double> miller_ladder(double x, int needed) {
    const double scale = std::max<double>(needed, x);
    int start = static_cast<int>(scale + 20.0 + std::sqrt(160.0 * (scale + 1.0)));
    start += start % 2;  // even start keeps the normalisation sum aligned

    std::vector<double> ladder(static_cast<std::size_t>(start) + 2, 0.0);
    double above = 0.0;
    double current = 1e-30;
    double norm = 0.0;
    ladder[static_cast<std::size_t>(start)] = current;
    for (int n = start; n >= 1; --n) {
        const double below = (2.0 * n / x) * current - above;
        above = current;
        current = below;
        ladder[static_cast<std::size_t>(n - 1)] = current;
        if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * current;
        if (std::abs(current) > rescale_threshold) {
            const double s = 1.0 / rescale_threshold;
            current *= s;
            above *= s;
            norm *= s;
            for (int m = n - 1; m <= start; ++m) ladder[static_cast<std::size_t>(m)] *= s;
        }
    }
    norm += ladder[0];
    for (double& v : ladder) v /= norm;
    return ladder;
}

}  // namespace detail

// Table of J_n, Y_n for n = 0..max_order+1 at one argument. The extra order
// feeds the derivative recurrence f'_n = (f_{n-1} - f_{n+1}) / 2.
class CylinderTable {
public:
    CylinderTable() = default;

    CylinderTable(double x, int max_order, bool with_second_kind = true)
        : x_(x), max_order_(max_order), has_y_(with_second_kind) {
        detail::check_argument(x, !with_second_kind);
        if (max_order < 0) throw DomainError("negative maximum order");
        const int top = max_order + 1;
        j_.assign(static_cast<std::size_t>(top) + 1, 0.0);
        if (x == 0.0) {
            j_[0] = 1.0;
            return;
        }
        const auto ladder = detail::miller_ladder(x, top);
        for (int n = 0; n <= top; ++n) j_[static_cast<std::size_t>(n)] = ladder[static_cast<std::size_t>(n)];

        if (!with_second_kind) return;

        double y0 = 0.0;
        double y1 = 0.0;
        if (x <= detail::asymptotic_switch) {
            const double log_term = std::log(0.5 * x) + detail::euler_gamma;
            double even_sum = 0.0;
            double odd_sum = 0.0;
            const int kmax = static_cast<int>(ladder.size() - 2) / 2;
            for (int k = kmax; k >= 1; --k) {
                const double sign = (k % 2 == 1) ? 1.0 : -1.0;
                even_sum += sign * ladder[static_cast<std::size_t>(2 * k)] / k;
                odd_sum += sign *
                           (ladder[static_cast<std::size_t>(2 * k - 1)] -
                            ladder[static_cast<std::size_t>(2 * k + 1)]) /
                           k;
            }
            const double two_over_pi = 2.0 / std::numbers::pi;
            y0 = two_over_pi * (log_term * ladder[0] + 2.0 * even_sum);
            y1 = two_over_pi * (log_term * ladder[1] - ladder[0] / x - odd_sum);
        } else {
            y0 = detail::hankel_asymptotic(0, x).second;
            y1 = detail::hankel_asymptotic(1, x).second;
        }
        y_.assign(static_cast<std::size_t>(top) + 1, 0.0);
        y_[0] = y0;
        if (top >= 1) y_[1] = y1;
        for (int n = 1; n < top; ++n) {
            y_[static_cast<std::size_t>(n + 1)] =
                (2.0 * n / x) * y_[static_cast<std::size_t>(n)] - y_[static_cast<std::size_t>(n - 1)];
        }
    }

    double argument() const noexcept { return x_; }
    int max_order() const noexcept { return max_order_; }

    double j(int n) const { return signed_entry(j_, n); }
    double y(int n) const {
        if (!has_y_) throw DomainError("second-kind values were not tabulated");
        return signed_entry(y_, n);
    }
    cplx h1(int n) const { return {j(n), y(n)}; }

    double dj(int n) const { return derivative(j_, n); }
    double dy(int n) const {
        if (!has_y_) throw DomainError("second-kind values were not tabulated");
        return derivative(y_, n);
    }
    cplx dh1(int n) const { return {dj(n), dy(n)}; }

private:
    double signed_entry(const std::vector<double>& f, int n) const {
        const int a = std::abs(n);
        if (a > max_order_ + 1) throw DomainError("order " + std::to_string(n) + " outside table");
        const double v = f[static_cast<std::size_t>(a)];
        return n < 0 ? detail::parity_sign(a) * v : v;
    }

    double derivative(const std::vector<double>& f, int n) const {
        const int a = std::abs(n);
        if (a > max_order_) throw DomainError("order " + std::to_string(n) + " outside table");
        const double d = (a == 0) ? -f[1]
                                  : 0.5 * (f[static_cast<std::size_t>(a - 1)] -
                                           f[static_cast<std::size_t>(a + 1)]);
        return n < 0 ? detail::parity_sign(a) * d : d;
    }

    double x_ = 0.0;
    int max_order_ = 0;
    bool has_y_ = false;
    std::vector<double> j_;
    std::vector<double> y_;
};

inline double bessel_j(int n, double x) { return CylinderTable(x, std::abs(n), false).j(n); }
inline double bessel_y(int n, double x) { return CylinderTable(x, std::abs(n)).y(n); }
inline cplx hankel1(int n, double x) { return CylinderTable(x, std::abs(n)).h1(n); }
inline double deriv_j(int n, double x) { return CylinderTable(x, std::abs(n), false).dj(n); }
inline double deriv_y(int n, double x) { return CylinderTable(x, std::abs(n)).dy(n); }
inline cplx deriv_h1(int n, double x) { return CylinderTable(x, std::abs(n)).dh1(n); }

}  // namespace bessel
}  // namespace slitscat
