#pragma once

// Scalar profiles of cosmological time: scale factors a(t), weight functions
// f(t), fluid densities and the like.  A profile carries its value and first
// two derivatives as callables plus the interval on which it is defined.
// Named constructors cover the closed forms used by the model library and
// record analytic derivatives; arbitrary callables fall back to central
// differences.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace raylab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool open_lo = false;
  bool open_hi = false;

  bool contains(double t) const {
    if (open_lo ? !(t > lo) : !(t >= lo)) return false;
    if (open_hi ? !(t < hi) : !(t <= hi)) return false;
    return true;
  }
  double length() const { return hi - lo; }
  bool empty() const { return !(lo < hi) && !(lo == hi && !open_lo && !open_hi); }

  // Largest closed sub-interval usable for numerics: open endpoints are
  // shrunk inward by a relative margin so profile singularities at the edge
  // (big-bang power laws etc.) are never evaluated exactly on them.
  Interval inner(double rel = 1e-12) const {
    double pad = rel * std::max({1.0, std::fabs(lo), std::fabs(hi)});
    return {open_lo ? lo + pad : lo, open_hi ? hi - pad : hi, false, false};
  }
  Interval reversed() const { return {-hi, -lo, open_hi, open_lo}; }
};

class ScalarProfile {
 public:
  using Fn = std::function<double(double)>;

  ScalarProfile() = default;

  static ScalarProfile analytic(std::string name, Fn v, Fn d1, Fn d2, Interval dom) {
    ScalarProfile p;
    p.name_ = std::move(name);
    p.value_ = std::move(v);
    p.d1_ = std::move(d1);
    p.d2_ = std::move(d2);
    p.domain_ = dom;
    p.analytic_ = true;
    return p;
  }

  // Derivatives by second-order central differences of the supplied callable.
  static ScalarProfile from_callable(std::string name, Fn v, Interval dom, double h = 0.0) {
    ScalarProfile p;
    p.name_ = std::move(name);
    p.domain_ = dom;
    p.analytic_ = false;
    if (h <= 0.0) h = 1e-5 * std::max(1.0, std::fabs(dom.hi - dom.lo));
    auto vv = v;
    p.d1_ = [vv, h](double t) { return (vv(t + h) - vv(t - h)) / (2.0 * h); };
    p.d2_ = [vv, h](double t) { return (vv(t + h) - 2.0 * vv(t) + vv(t - h)) / (h * h); };
    p.value_ = std::move(v);
    return p;
  }

  static ScalarProfile constant(double c, Interval dom) {
    return analytic("const", [c](double) { return c; }, [](double) { return 0.0; },
                    [](double) { return 0.0; }, dom);
  }

  // coef * t^p
  static ScalarProfile power(double coef, double p, Interval dom) {
    return analytic(
        "power", [coef, p](double t) { return coef * std::pow(t, p); },
        [coef, p](double t) { return coef * p * std::pow(t, p - 1.0); },
        [coef, p](double t) { return coef * p * (p - 1.0) * std::pow(t, p - 2.0); }, dom);
  }

  // coef * exp(rate * t)
  static ScalarProfile exponential(double coef, double rate, Interval dom) {
    return analytic(
        "exp", [coef, rate](double t) { return coef * std::exp(rate * t); },
        [coef, rate](double t) { return coef * rate * std::exp(rate * t); },
        [coef, rate](double t) { return coef * rate * rate * std::exp(rate * t); }, dom);
  }

  // cosh(rate * t)
  static ScalarProfile cosh_profile(double rate, Interval dom) {
    return analytic(
        "cosh", [rate](double t) { return std::cosh(rate * t); },
        [rate](double t) { return rate * std::sinh(rate * t); },
        [rate](double t) { return rate * rate * std::cosh(rate * t); }, dom);
  }

  // cos(rate * t)
  static ScalarProfile cos_profile(double rate, Interval dom) {
    return analytic(
        "cos", [rate](double t) { return std::cos(rate * t); },
        [rate](double t) { return -rate * std::sin(rate * t); },
        [rate](double t) { return -rate * rate * std::cos(rate * t); }, dom);
  }

  // sinh(rate * t)^p, the matter-plus-Lambda scale factor family for p = 2/3
  static ScalarProfile sinh_pow(double p, double rate, Interval dom) {
    auto v = [p, rate](double t) { return std::pow(std::sinh(rate * t), p); };
    auto d1 = [p, rate](double t) {
      double s = std::sinh(rate * t);
      return p * rate * std::pow(s, p - 1.0) * std::cosh(rate * t);
    };
    auto d2 = [p, rate](double t) {
      double s = std::sinh(rate * t), c = std::cosh(rate * t);
      return p * rate * rate * ((p - 1.0) * std::pow(s, p - 2.0) * c * c + std::pow(s, p));
    };
    return analytic("sinh_pow", v, d1, d2, dom);
  }

  // c0 + c1 t + c2 t^2 + ...
  static ScalarProfile polynomial(std::vector<double> coeffs, Interval dom) {
    auto horner = [](const std::vector<double>& c, double t) {
      double r = 0.0;
      for (std::size_t i = c.size(); i-- > 0;) r = r * t + c[i];
      return r;
    };
    auto deriv = [](const std::vector<double>& c) {
      std::vector<double> d;
      for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<double>(i));
      return d;
    };
    std::vector<double> c1 = deriv(coeffs), c2 = deriv(c1);
    return analytic(
        "poly", [coeffs, horner](double t) { return horner(coeffs, t); },
        [c1, horner](double t) { return horner(c1, t); },
        [c2, horner](double t) { return horner(c2, t); }, dom);
  }

  // c0 + amp * sin(freq * t)
  static ScalarProfile sinusoid(double c0, double amp, double freq, Interval dom) {
    return analytic(
        "sinusoid", [c0, amp, freq](double t) { return c0 + amp * std::sin(freq * t); },
        [amp, freq](double t) { return amp * freq * std::cos(freq * t); },
        [amp, freq](double t) { return -amp * freq * freq * std::sin(freq * t); }, dom);
  }

  static ScalarProfile sum(const ScalarProfile& a, const ScalarProfile& b) {
    Interval dom{std::max(a.domain_.lo, b.domain_.lo), std::min(a.domain_.hi, b.domain_.hi),
                 a.domain_.lo >= b.domain_.lo ? a.domain_.open_lo : b.domain_.open_lo,
                 a.domain_.hi <= b.domain_.hi ? a.domain_.open_hi : b.domain_.open_hi};
    return analytic(
        a.name_ + "+" + b.name_, [a, b](double t) { return a.value(t) + b.value(t); },
        [a, b](double t) { return a.d1(t) + b.d1(t); },
        [a, b](double t) { return a.d2(t) + b.d2(t); }, dom);
  }

  static ScalarProfile product(const ScalarProfile& a, const ScalarProfile& b) {
    Interval dom{std::max(a.domain_.lo, b.domain_.lo), std::min(a.domain_.hi, b.domain_.hi),
                 a.domain_.lo >= b.domain_.lo ? a.domain_.open_lo : b.domain_.open_lo,
                 a.domain_.hi <= b.domain_.hi ? a.domain_.open_hi : b.domain_.open_hi};
    return analytic(
        a.name_ + "*" + b.name_, [a, b](double t) { return a.value(t) * b.value(t); },
        [a, b](double t) { return a.d1(t) * b.value(t) + a.value(t) * b.d1(t); },
        [a, b](double t) {
          return a.d2(t) * b.value(t) + 2.0 * a.d1(t) * b.d1(t) + a.value(t) * b.d2(t);
        },
        dom);
  }

  static ScalarProfile scaled(const ScalarProfile& a, double c) {
    return analytic(
        a.name_ + "_scaled", [a, c](double t) { return c * a.value(t); },
        [a, c](double t) { return c * a.d1(t); }, [a, c](double t) { return c * a.d2(t); },
        a.domain_);
  }

  // -log(p), chain rule; p must be positive on its domain.
  static ScalarProfile neg_log_of(const ScalarProfile& p) {
    return analytic(
        "neg_log_" + p.name_, [p](double t) { return -std::log(p.value(t)); },
        [p](double t) { return -p.d1(t) / p.value(t); },
        [p](double t) {
          double v = p.value(t), d = p.d1(t);
          return -p.d2(t) / v + (d / v) * (d / v);
        },
        p.domain_);
  }

  double value(double t) const { return value_(t); }
  double d1(double t) const { return d1_(t); }
  double d2(double t) const { return d2_(t); }
  const Interval& domain() const { return domain_; }
  const std::string& name() const { return name_; }
  bool analytic_derivatives() const { return analytic_; }

  ScalarProfile time_reversed() const {
    auto v = value_, g = d1_, h = d2_;
    ScalarProfile p;
    p.name_ = name_ + "_rev";
    p.value_ = [v](double t) { return v(-t); };
    p.d1_ = [g](double t) { return -g(-t); };
    p.d2_ = [h](double t) { return h(-t); };
    p.domain_ = domain_.reversed();
    p.analytic_ = analytic_;
    return p;
  }

  // Max of the profile over a dense sample of its domain interior.
  double sampled_max(std::size_t n = 512) const { return sampled_extremum(n, true); }
  double sampled_min(std::size_t n = 512) const { return sampled_extremum(n, false); }
  double sampled_max_abs_d1(std::size_t n = 512) const {
    Interval in = domain_.inner();
    double m = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      double t = in.lo + (in.hi - in.lo) * static_cast<double>(i) / static_cast<double>(n);
      m = std::max(m, std::fabs(d1(t)));
    }
    return m;
  }

 private:
  double sampled_extremum(std::size_t n, bool want_max) const {
    Interval in = domain_.inner();
    double best = want_max ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= n; ++i) {
      double t = in.lo + (in.hi - in.lo) * static_cast<double>(i) / static_cast<double>(n);
      double v = value(t);
      best = want_max ? std::max(best, v) : std::min(best, v);
    }
    return best;
  }

  std::string name_;
  Fn value_, d1_, d2_;
  Interval domain_;
  bool analytic_ = false;
};

// Consistency of stored derivatives against central differences of value();
// returns the worst scaled discrepancy over interior samples.
inline double validate_profile(const ScalarProfile& p, std::size_t n = 128, double h = 0.0) {
  Interval in = p.domain().inner(0.05);  // stay away from edge singularities
  if (h <= 0.0) h = 1e-4 * std::max(1.0, in.hi - in.lo);
  double worst = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    double t = in.lo + (in.hi - in.lo) * static_cast<double>(i) / static_cast<double>(n);
    double fd1 = (p.value(t + h) - p.value(t - h)) / (2.0 * h);
    double fd2 = (p.value(t + h) - 2.0 * p.value(t) + p.value(t - h)) / (h * h);
    double s1 = std::max({1.0, std::fabs(p.d1(t))});
    double s2 = std::max({1.0, std::fabs(p.d2(t))});
    worst = std::max(worst, std::fabs(fd1 - p.d1(t)) / s1);
    worst = std::max(worst, std::fabs(fd2 - p.d2(t)) / s2);
  }
  return worst;
}

}  // namespace raylab
