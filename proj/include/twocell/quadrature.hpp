#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace twocell {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

struct QuadratureError : std::runtime_error {
    QuadratureResult partial;
    QuadratureError(const std::string& what, QuadratureResult p)
        : std::runtime_error(what), partial(p) {}
};

namespace detail {

// Gauss 7 / Kronrod 15 node-weight table on [-1, 1].
struct Gk15 {
    static constexpr double node[8] = {
        0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
        0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
    static constexpr double gauss_w[8] = {
        0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
        0.0, 0.0, 0.0, 0.0};
    static constexpr double kronrod_w[8] = {
        0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
        0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529};
};

template <class F>
inline QuadratureResult gk15(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double y0 = f(mid);
    double g = Gk15::gauss_w[0] * y0;
    double k = Gk15::kronrod_w[0] * y0;
    for (int n = 1; n < 8; ++n) {
        const double dx = half * Gk15::node[n];
        const double y = f(mid + dx) + f(mid - dx);
        g += Gk15::gauss_w[n] * y;
        k += Gk15::kronrod_w[n] * y;
    }
    g *= half;
    k *= half;
    const double diff = 200.0 * std::abs(g - k);
    return {k, diff * std::sqrt(diff), true};
}

}  // namespace detail

// Adaptive bisection with a G7/K15 core. Throws QuadratureError (carrying the
// achieved estimate and error bound) if the interval budget runs out.
template <class F>
inline QuadratureResult integrate(const F& f, double a, double b, double rel_tol = 1e-10,
                                  double abs_tol = 1e-300, int max_intervals = 4000) {
    struct Seg {
        double a, b;
    };
    std::vector<Seg> work{{a, b}};
    double sum = 0.0, err = 0.0;
    int used = 1;
    while (!work.empty()) {
        const Seg s = work.back();
        work.pop_back();
        const QuadratureResult r = detail::gk15(f, s.a, s.b);
        if (r.error <= rel_tol * std::abs(r.value) || r.error <= abs_tol ||
            (s.b - s.a) < 1e-14 * (std::abs(s.a) + std::abs(s.b) + 1.0)) {
            sum += r.value;
            err += r.error;
            continue;
        }
        if (used + 2 > max_intervals) {
            QuadratureResult partial{sum + r.value, err + r.error, false};
            std::ostringstream os;
            os << "quadrature did not converge: estimate " << partial.value << ", error bound "
               << partial.error;
            throw QuadratureError(os.str(), partial);
        }
        const double mid = 0.5 * (s.a + s.b);
        work.push_back({s.a, mid});
        work.push_back({mid, s.b});
        used += 2;
    }
    return {sum, err, true};
}

// Integral of f over [a, +inf): a finite stretch plus a 1/x-mapped tail.
// Assumes f decays at least like x^{-p} with p > 1.
template <class F>
inline QuadratureResult integrate_halfline(const F& f, double a, double rel_tol = 1e-10) {
    const double switch_radius = std::max(10.0 * (std::abs(a) + 1.0), 64.0);
    const QuadratureResult head = integrate(f, a, switch_radius, rel_tol);
    const auto tail_f = [&f](double u) { return f(1.0 / u) / (u * u); };
    const QuadratureResult tail = integrate(tail_f, 0.0, 1.0 / switch_radius, rel_tol);
    return {head.value + tail.value, head.error + tail.error, head.converged && tail.converged};
}

// Integral of f over R \ (-w, w), the two-sided interferer window.
template <class F>
inline QuadratureResult integrate_outside_window(const F& f, double w, double rel_tol = 1e-10) {
    const QuadratureResult right = integrate_halfline(f, w, rel_tol);
    const auto mirrored = [&f](double x) { return f(-x); };
    const QuadratureResult left = integrate_halfline(mirrored, w, rel_tol);
    return {right.value + left.value, right.error + left.error,
            right.converged && left.converged};
}

}  // namespace twocell
