#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

namespace rmrelax::quad {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule of order n (cached per order).
const Rule& gauss_legendre(int n);

// A node/weight list on the real line.
struct LineGrid {
    std::vector<double> x;
    std::vector<double> w;

    std::size_t size() const { return x.size(); }
};

// Composite Gauss-Legendre over consecutive panel boundaries.
LineGrid composite(std::span<const double> breaks, int order);

template <class T>
struct Estimate {
    T value{};
    double error = 0.0;
    int intervals = 0;
    bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }

template <class F, class T>
void gk15(const F& f, double a, double b, T& result, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T kronrod = fc * kWgk[7];
    T gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        kronrod += (f1 + f2) * kWgk[j];
        if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
    }
    result = kronrod * h;
    err = magnitude((kronrod - gauss) * h);
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) over [a, b] with interior breakpoints.
template <class F>
auto adaptive(const F& f, std::span<const double> breaks, double abs_tol, double rel_tol,
              int max_intervals = 4000) -> Estimate<decltype(f(0.0))> {
    using T = decltype(f(0.0));
    struct Interval {
        double a, b;
        T value;
        double err;
        bool operator<(const Interval& o) const { return err < o.err; }
    };
    std::priority_queue<Interval> heap;
    T total{};
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        Interval iv{breaks[i], breaks[i + 1], T{}, 0.0};
        detail::gk15(f, iv.a, iv.b, iv.value, iv.err);
        total += iv.value;
        total_err += iv.err;
        heap.push(iv);
    }
    Estimate<T> out;
    int count = static_cast<int>(heap.size());
    while (!heap.empty() &&
           total_err > std::max(abs_tol, rel_tol * detail::magnitude(total))) {
        if (count >= max_intervals) {
            out.converged = false;
            break;
        }
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            out.converged = false;
            heap.push(worst);
            break;
        }
        Interval left{worst.a, mid, T{}, 0.0};
        Interval right{mid, worst.b, T{}, 0.0};
        detail::gk15(f, left.a, left.b, left.value, left.err);
        detail::gk15(f, right.a, right.b, right.value, right.err);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        ++count;
    }
    // Re-sum to shed the drift of the running update.
    T sum{};
    double err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().err;
        heap.pop();
    }
    out.value = sum;
    out.error = err;
    out.intervals = count;
    return out;
}

template <class F>
auto adaptive(const F& f, double a, double b, double abs_tol, double rel_tol,
              int max_intervals = 4000) {
    const std::array<double, 2> breaks{a, b};
    return adaptive(f, std::span<const double>(breaks), abs_tol, rel_tol, max_intervals);
}

}  // namespace rmrelax::quad
