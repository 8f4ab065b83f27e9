#include "iondeco/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "iondeco/error.hpp"

namespace iondeco::numerics {

void QuadratureSpec::validate() const {
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0))
        throw InputError("quadrature tolerances must be non-negative");
    if (abs_tol == 0.0 && rel_tol == 0.0)
        throw InputError("quadrature abs_tol and rel_tol cannot both be zero");
    if (max_subdivisions < 1)
        throw InputError("quadrature max_subdivisions must be at least 1");
}

void OdeSpec::validate() const {
    if (!(step > 0.0) || !std::isfinite(step))
        throw InputError("ODE step must be positive and finite");
    if (!(error_tol >= 0.0))
        throw InputError("ODE error_tol must be non-negative");
}

namespace {

// Samples at a, a+h/4, a+h/2, a+3h/4, b.
struct Panel {
    double a, b;
    double f0, f1, f2, f3, f4;
    double value;
    double error;
};

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

double checked(const RealFunction& f, double x) {
    const double y = f(x);
    if (!std::isfinite(y)) {
        std::ostringstream msg;
        msg << "integrand is not finite at x = " << x;
        throw InputError(msg.str());
    }
    return y;
}

void score(Panel& p) {
    const double h = p.b - p.a;
    const double coarse = h / 6.0 * (p.f0 + 4.0 * p.f2 + p.f4);
    const double fine = h / 12.0 * (p.f0 + 4.0 * p.f1 + 2.0 * p.f2 + 4.0 * p.f3 + p.f4);
    p.value = fine + (fine - coarse) / 15.0;
    p.error = std::abs(fine - coarse) / 15.0;
}

Panel make_panel(const RealFunction& f, double a, double b, double fa, double fm, double fb) {
    const double h = b - a;
    Panel p{a, b, fa, checked(f, a + 0.25 * h), fm, checked(f, a + 0.75 * h), fb, 0.0, 0.0};
    score(p);
    return p;
}

constexpr std::size_t kInitialPanels = 4;

}  // namespace

double integrate(const RealFunction& f, double a, double b, const QuadratureSpec& spec,
                 double& error_estimate) {
    spec.validate();
    if (!(a <= b)) throw InputError("integrate requires a <= b");
    error_estimate = 0.0;
    if (a == b) return 0.0;

    std::priority_queue<Panel, std::vector<Panel>, ByError> open;
    std::vector<Panel> closed;  // too narrow to split further

    const std::size_t initial = std::min(kInitialPanels, spec.max_subdivisions);
    const double width = (b - a) / static_cast<double>(initial);
    double left = a;
    double f_left = checked(f, a);
    for (std::size_t i = 0; i < initial; ++i) {
        const double right = (i + 1 == initial) ? b : a + width * static_cast<double>(i + 1);
        const double f_right = checked(f, right);
        const double mid = 0.5 * (left + right);
        open.push(make_panel(f, left, right, f_left, checked(f, mid), f_right));
        left = right;
        f_left = f_right;
    }

    std::size_t count = initial;
    double total = 0.0, total_err = 0.0, total_abs = 0.0;
    auto resum = [&] {
        total = total_err = total_abs = 0.0;
        std::vector<Panel> tmp;
        tmp.reserve(open.size());
        while (!open.empty()) {
            tmp.push_back(open.top());
            open.pop();
        }
        for (const auto& p : tmp) {
            total += p.value;
            total_err += p.error;
            total_abs += std::abs(p.value);
        }
        for (const auto& p : closed) {
            total += p.value;
            total_err += p.error;
            total_abs += std::abs(p.value);
        }
        for (auto& p : tmp) open.push(std::move(p));
    };
    resum();

    auto converged = [&] {
        const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * total_abs;
        return total_err <= target || total_err <= roundoff;
    };

    std::size_t since_resum = 0;
    while (!converged()) {
        if (open.empty() || count >= spec.max_subdivisions) {
            resum();
            if (converged()) break;
            error_estimate = total_err;
            std::ostringstream msg;
            msg << "quadrature on [" << a << ", " << b << "] exhausted " << count
                << " panels; estimate " << total << " with error " << total_err;
            throw QuadratureError(msg.str(), total, total_err);
        }
        Panel p = open.top();
        open.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b) || !(p.a + 0.25 * (p.b - p.a) > p.a)) {
            closed.push_back(p);
            continue;
        }
        Panel lo = make_panel(f, p.a, mid, p.f0, p.f1, p.f2);
        Panel hi = make_panel(f, mid, p.b, p.f2, p.f3, p.f4);
        total += lo.value + hi.value - p.value;
        total_err += lo.error + hi.error - p.error;
        total_abs += std::abs(lo.value) + std::abs(hi.value) - std::abs(p.value);
        open.push(lo);
        open.push(hi);
        ++count;
        if (++since_resum == 1024) {
            resum();
            since_resum = 0;
        }
    }
    resum();
    error_estimate = total_err;
    return total;
}

double integrate(const RealFunction& f, double a, double b, const QuadratureSpec& spec) {
    double err = 0.0;
    return integrate(f, a, b, spec, err);
}

double integrate_semi_infinite(const RealFunction& f, double a, double decay_scale,
                               const QuadratureSpec& spec) {
    if (!(decay_scale > 0.0) || !std::isfinite(decay_scale))
        throw InputError("decay_scale must be positive and finite");
    const double b = a + kTailScales * decay_scale;
    for (double probe : {a, a + decay_scale, b}) checked(f, probe);
    return integrate(f, a, b, spec);
}

double principal_value(const RealFunction& f, double pole, double half_width,
                       const QuadratureSpec& spec) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw InputError("principal_value half_width must be positive");
    // Below this offset the paired difference is dominated by rounding.
    const double h = std::cbrt(std::numeric_limits<double>::epsilon()) *
                     std::max(1.0, std::abs(pole));
    const double limit = (checked(f, pole + h) - checked(f, pole - h)) / h;
    auto paired = [&](double x) {
        if (x < h) return limit;
        return (f(pole + x) - f(pole - x)) / x;
    };
    return integrate(paired, 0.0, half_width, spec);
}

namespace {

Eigen::VectorXd rk4_run(const Eigen::MatrixXd& rhs, const Eigen::VectorXd& y0, double h,
                        std::size_t steps, std::size_t sample_every, OdePath* path) {
    Eigen::VectorXd y = y0;
    Eigen::VectorXd k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size());
    if (path) {
        path->times.push_back(0.0);
        path->states.push_back(y);
    }
    for (std::size_t i = 1; i <= steps; ++i) {
        k1.noalias() = rhs * y;
        k2.noalias() = rhs * (y + 0.5 * h * k1);
        k3.noalias() = rhs * (y + 0.5 * h * k2);
        k4.noalias() = rhs * (y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!y.allFinite()) {
            std::ostringstream msg;
            msg << "non-finite state at step " << i << " (t = " << h * static_cast<double>(i)
                << ")";
            throw AccuracyError(msg.str());
        }
        if (path && (i % sample_every == 0 || i == steps)) {
            path->times.push_back(h * static_cast<double>(i));
            path->states.push_back(y);
        }
    }
    return y;
}

}  // namespace

OdePath rk4_evolve(const Eigen::MatrixXd& rhs, const Eigen::VectorXd& y0, double t_end,
                   const OdeSpec& spec, std::size_t sample_every) {
    spec.validate();
    if (rhs.rows() != rhs.cols() || rhs.cols() != y0.size())
        throw InputError("rk4_evolve: operator and state dimensions differ");
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
        throw InputError("rk4_evolve: t_end must be finite and non-negative");
    if (sample_every < 1) throw InputError("rk4_evolve: sample_every must be positive");
    if (!y0.allFinite()) throw InputError("rk4_evolve: initial state is not finite");

    OdePath path;
    if (t_end == 0.0) {
        path.times.push_back(0.0);
        path.states.push_back(y0);
        return path;
    }
    // The tolerance absorbs t_end/step ratios that are integers up to rounding.
    const double ratio = t_end / spec.step;
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(ratio * (1.0 - 1e-12))));
    const double h = t_end / static_cast<double>(steps);
    const Eigen::VectorXd y_end = rk4_run(rhs, y0, h, steps, sample_every, &path);
    path.times.back() = t_end;

    if (spec.error_check) {
        const Eigen::VectorXd y_half = rk4_run(rhs, y0, 0.5 * h, 2 * steps, 1, nullptr);
        const double diff = (y_half - y_end).cwiseAbs().maxCoeff();
        if (diff > spec.error_tol) {
            std::ostringstream msg;
            msg << "step-doubling check failed: |y(h) - y(h/2)| = " << diff << " > "
                << spec.error_tol;
            throw AccuracyError(msg.str());
        }
    }
    return path;
}

}  // namespace iondeco::numerics
