#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "noarb/error.hpp"

namespace noarb::quad {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct SimpsonOptions {
  double abs_tol = 1e-10;
  /// Initial uniform panels before adaptive refinement begins.
  std::size_t initial_panels = 2;
  /// Hard cap on accepted plus pending panels.
  std::size_t max_panels = std::size_t{1} << 20;
};

/// Adaptive Simpson with Richardson correction. Each initial panel receives a
/// share of the tolerance proportional to its width; refinement uses an
/// explicit work stack so depth never touches the call stack.
/// Throws Error{QuadratureFailure} when the panel cap is exceeded.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, const SimpsonOptions& opt = {}) {
  if (!(b > a)) return 0.0;
  struct Panel {
    double a, b, fa, fm, fb, whole, tol;
  };
  auto simpson = [](double a0, double b0, double fa, double fm, double fb) {
    return (b0 - a0) / 6.0 * (fa + 4.0 * fm + fb);
  };

  const std::size_t initial = opt.initial_panels < 1 ? 1 : opt.initial_panels;
  const double width = (b - a) / static_cast<double>(initial);
  std::vector<Panel> stack;
  stack.reserve(64);
  for (std::size_t k = 0; k < initial; ++k) {
    const double lo = a + width * static_cast<double>(k);
    const double hi = (k + 1 == initial) ? b : lo + width;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    stack.push_back({lo, hi, flo, fmid, fhi, simpson(lo, hi, flo, fmid, fhi),
                     opt.abs_tol * (hi - lo) / (b - a)});
  }

  CompensatedSum total;
  std::size_t panels = stack.size();
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(p.a, m, p.fa, flm, p.fm);
    const double right = simpson(m, p.b, p.fm, frm, p.fb);
    const double diff = left + right - p.whole;
    if (std::abs(diff) <= 15.0 * p.tol || !(m > p.a && p.b > m)) {
      total.add(left + right + diff / 15.0);
      continue;
    }
    if (++panels > opt.max_panels) {
      throw Error(ErrorKind::QuadratureFailure, "adaptive Simpson exceeded its panel cap");
    }
    stack.push_back({p.a, m, p.fa, flm, p.fm, left, 0.5 * p.tol});
    stack.push_back({m, p.b, p.fm, frm, p.fb, right, 0.5 * p.tol});
  }
  return total.value();
}

}  // namespace noarb::quad
