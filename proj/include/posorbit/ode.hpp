#pragma once

/**
 * @file ode.hpp
 * @brief Dormand-Prince 5(4) integrator with step-size control and dense output.
 *
 * The right-hand side may throw InadmissibleState when asked to evaluate at a
 * state outside its domain; the step is then rejected and halved, the same as
 * a step whose end state fails the admissibility predicate.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace posorbit::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

class InadmissibleState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The step size fell below its floor; carries the last accepted state.
class StepUnderflow : public std::runtime_error {
 public:
  StepUnderflow(const std::string& what, double t, std::vector<double> state)
      : std::runtime_error(what), t_(t), state_(std::move(state)) {}
  double t() const noexcept { return t_; }
  const std::vector<double>& state() const noexcept { return state_; }

 private:
  double t_;
  std::vector<double> state_;
};

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0.0;     ///< 0 selects 1% of the span
  double h_min = 1e-13;    ///< relative to the span
  long max_steps = 2'000'000;
};

template <std::size_t N>
struct Result {
  std::vector<Vec<N>> samples;  ///< state at each requested time
  Vec<N> final{};
  long accepted = 0;
  long rejected = 0;
};

struct AlwaysAdmissible {
  template <class V>
  bool operator()(const V&) const {
    return true;
  }
};

namespace detail {

// Butcher tableau and dense-output weights of DOPRI5 (Hairer, Norsett, Wanner).
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                        a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace detail

/// Integrates y' = f(t, y) from t0 to times.back(), returning the state at
/// every entry of `times` (ascending, all >= t0).
template <std::size_t N, class Rhs, class Admissible = AlwaysAdmissible>
Result<N> integrate(Rhs&& f, double t0, const Vec<N>& y0, std::span<const double> times, const Options& opt,
                    Admissible&& admissible = Admissible{}) {
  using namespace detail;
  Result<N> out;
  out.samples.reserve(times.size());
  std::size_t next = 0;
  while (next < times.size() && times[next] <= t0) {
    if (times[next] < t0) throw std::invalid_argument("sample time before the initial time");
    out.samples.push_back(y0);
    ++next;
  }
  out.final = y0;
  if (next == times.size()) return out;

  const double t1 = times.back();
  const double span = t1 - t0;
  double h = opt.h_init > 0 ? opt.h_init : 0.01 * span;
  const double h_floor = opt.h_min * std::max(span, 1.0);
  double t = t0;
  Vec<N> y = y0;
  Vec<N> k1 = f(t, y);

  auto axpy = [](const Vec<N>& base, double h_, std::initializer_list<std::pair<double, const Vec<N>*>> terms) {
    Vec<N> r = base;
    for (const auto& [w, k] : terms) {
      if (w == 0.0) continue;
      for (std::size_t i = 0; i < N; ++i) r[i] += h_ * w * (*k)[i];
    }
    return r;
  };

  while (t < t1) {
    if (out.accepted + out.rejected > opt.max_steps) {
      throw StepUnderflow("step budget exhausted", t, std::vector<double>(y.begin(), y.end()));
    }
    bool last = false;
    if (t + h >= t1 || t + 1.0001 * h >= t1) {
      h = t1 - t;
      last = true;
    }
    Vec<N> k2, k3, k4, k5, k6, k7, y_new;
    bool ok = true;
    try {
      k2 = f(t + c2 * h, axpy(y, h, {{a21, &k1}}));
      k3 = f(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
      k4 = f(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      k5 = f(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      k6 = f(t + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      y_new = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
      ok = admissible(y_new);
      if (ok) k7 = f(t + h, y_new);
    } catch (const InadmissibleState&) {
      ok = false;
    }
    if (!ok) {
      ++out.rejected;
      h *= 0.5;
      if (h < h_floor) {
        throw StepUnderflow("step size underflow near an inadmissible state at t = " + std::to_string(t), t,
                            std::vector<double>(y.begin(), y.end()));
      }
      continue;
    }
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err += (ei / sk) * (ei / sk);
    }
    err = std::sqrt(err / static_cast<double>(N));
    if (!std::isfinite(err)) err = 1e10;
    if (err > 1.0) {
      ++out.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < h_floor) {
        throw StepUnderflow("step size underflow at t = " + std::to_string(t), t,
                            std::vector<double>(y.begin(), y.end()));
      }
      continue;
    }
    ++out.accepted;
    const double t_new = last ? t1 : t + h;
    // Dense output for requested times in (t, t_new].
    if (next < times.size() && times[next] <= t_new) {
      Vec<N> r2, r3, r4, r5;
      for (std::size_t i = 0; i < N; ++i) {
        const double diff = y_new[i] - y[i];
        const double bspl = h * k1[i] - diff;
        r2[i] = diff;
        r3[i] = bspl;
        r4[i] = diff - h * k7[i] - bspl;
        r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      while (next < times.size() && times[next] <= t_new) {
        if (times[next] == t_new) {
          out.samples.push_back(y_new);
        } else {
          const double th = (times[next] - t) / h;
          const double th1 = 1.0 - th;
          Vec<N> ys;
          for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
          out.samples.push_back(ys);
        }
        ++next;
      }
    }
    t = t_new;
    y = y_new;
    k1 = k7;
    const double fac = err > 0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 10.0) : 10.0;
    h *= fac;
  }
  out.final = y;
  return out;
}

}  // namespace posorbit::ode
