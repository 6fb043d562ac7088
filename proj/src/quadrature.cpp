#include "steinpairs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "steinpairs/errors.hpp"

namespace steinpairs {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod abscissae (descending), Kronrod weights, Gauss weights for the
// odd-indexed abscissae; QUADPACK qk21 table.
const double kXgk[11] = {0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
                         0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
                         0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
                         0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
                         0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
                         0.0};
const double kWgk[11] = {0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
                         0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
                         0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
                         0.123491976262065851077888056226180, 0.134709217311473325928054001771707,
                         0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
                         0.149445554002916905664936468389821};
const double kWg[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                       0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                       0.295524224714752870173892994651338};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  double abs_value;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// Non-finite samples poison the sum so the caller sees a failed integral.
double checked(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN(); }

Panel gk21(const RealFunction& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double fc = checked(f(center));
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double resabs = std::fabs(resk);
  for (int j = 0; j < 10; ++j) {
    double dx = half * kXgk[j];
    double f1 = checked(f(center - dx));
    double f2 = checked(f(center + dx));
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  double err = std::fabs((resk - resg) * half);
  return {lo, hi, resk * half, err, resabs * std::fabs(half)};
}

QuadratureResult run_adaptive(const RealFunction& f, const std::vector<double>& breaks,
                              const QuadratureOptions& opts) {
  std::priority_queue<Panel> heap;
  QuadratureResult out;
  double total = 0.0;
  double total_err = 0.0;
  double total_abs = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Panel p = gk21(f, breaks[i], breaks[i + 1]);
    out.evaluations += 21;
    total += p.value;
    total_err += p.error;
    total_abs += p.abs_value;
    heap.push(p);
  }
  auto done = [&] {
    double target = std::max(opts.abs_tol, opts.rel_tol * std::fabs(total));
    return total_err <= target || total_err <= 50.0 * kEps * total_abs;
  };
  // Splits that leave both the value and the error unchanged mean the error
  // estimate is integrand noise (e.g. cancellation inside f).
  int stalled = 0;
  while (!heap.empty() && !done() && static_cast<int>(heap.size()) < opts.max_intervals) {
    if (!std::isfinite(total)) break;
    Panel worst = heap.top();
    double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;  // interval exhausted
    heap.pop();
    Panel left = gk21(f, worst.lo, mid);
    Panel right = gk21(f, mid, worst.hi);
    out.evaluations += 42;
    double children = left.value + right.value;
    if (left.error + right.error >= 0.99 * worst.error &&
        std::fabs(children - worst.value) <= 1e-5 * std::fabs(children)) {
      ++stalled;
    }
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    if (stalled >= 20) {
      out.roundoff_limited = true;
      break;
    }
  }
  // Re-sum to shed accumulated update drift.
  total = 0.0;
  total_err = 0.0;
  total_abs = 0.0;
  out.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    total_abs += heap.top().abs_value;
    heap.pop();
  }
  out.value = total;
  out.error = total_err;
  const double target = std::max(opts.abs_tol, opts.rel_tol * std::fabs(total));
  out.converged = std::isfinite(total) && (done() || (out.roundoff_limited && total_err <= 1e3 * target));
  return out;
}

}  // namespace

QuadratureResult integrate(const RealFunction& f, double lo, double hi, const QuadratureOptions& opts) {
  if (lo == hi) return {0.0, 0.0, 0, 0, true};
  if (hi < lo) {
    QuadratureResult r = integrate(f, hi, lo, opts);
    r.value = -r.value;
    return r;
  }
  return run_adaptive(f, {lo, hi}, opts);
}

QuadratureResult integrate_panels(const RealFunction& f, const std::vector<double>& breakpoints,
                                  const QuadratureOptions& opts) {
  return run_adaptive(f, breakpoints, opts);
}

QuadratureResult integrate_semi_infinite(const RealFunction& f, const QuadratureOptions& opts) {
  auto mapped = [&f](double t) {
    double om = 1.0 - t;
    double s = t / om;
    if (!std::isfinite(s)) return 0.0;
    double v = f(s);
    if (v == 0.0) return 0.0;
    return v / (om * om);
  };
  return run_adaptive(mapped, {0.0, 0.5, 0.75, 0.875, 1.0}, opts);
}

QuadratureResult integrate_from_endpoint(const RealFunction& f, double length, double power,
                                         const QuadratureOptions& opts) {
  if (length == 0.0) return {0.0, 0.0, 0, 0, true};
  if (std::isinf(length)) {
    // Split at 1: the singular part near 0 and the tail.
    QuadratureResult head = integrate_from_endpoint(f, 1.0, power, opts);
    QuadratureResult tail = integrate_semi_infinite([&f](double s) { return f(1.0 + s); }, opts);
    return {head.value + tail.value, head.error + tail.error, head.evaluations + tail.evaluations,
            head.intervals + tail.intervals, head.converged && tail.converged};
  }
  if (std::isfinite(power) && power > 0.0) {
    const double inv = 1.0 / power;
    auto mapped = [&f, length, inv](double u) {
      double s = length * std::pow(u, inv);
      if (s <= 0.0) return 0.0;
      double v = f(s);
      if (v == 0.0) return 0.0;
      // ds = (s / (power*u)) du
      return v * s * inv / u;
    };
    return run_adaptive(mapped, {0.0, 0.25, 0.5, 1.0}, opts);
  }
  auto mapped = [&f, length](double t) {
    // v = t/(1-t), s = length*exp(-v), ds = s dv, dv = dt/(1-t)^2
    double om = 1.0 - t;
    double v = t / om;
    double s = length * std::exp(-v);
    if (!(s > 0.0)) return 0.0;
    double fv = f(s);
    if (fv == 0.0) return 0.0;
    return fv * s / (om * om);
  };
  return run_adaptive(mapped, {0.0, 0.5, 0.75, 0.875, 0.9375, 1.0}, opts);
}

double require_converged(const QuadratureResult& r, const char* context) {
  if (!r.converged) {
    throw ConvergenceError(std::string(context) + ": quadrature did not converge", r.evaluations, r.error);
  }
  return r.value;
}

}  // namespace steinpairs
