#include "charsieve/weights.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "charsieve/accum.hpp"

namespace charsieve {

namespace {

double frac(double t) { return t - std::floor(t); }

// C-infinity step: 0 on (-inf,0], 1 on [1,inf)
double smoothstep01(double v) {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  double a = std::exp(-1.0 / v);
  double b = std::exp(-1.0 / (1.0 - v));
  return a / (a + b);
}

}  // namespace

SmoothCutoff bump_cutoff(double lo, double hi) {
  if (!(0.0 < lo && lo < hi)) throw std::invalid_argument("bump_cutoff: need 0 < lo < hi");
  double w = hi - lo;
  double peak = 4.0 / (w * w);  // value of 1/((x-lo)(hi-x)) at the midpoint
  SmoothCutoff c;
  c.x_lo = lo;
  c.x_hi = hi;
  c.name = "bump";
  c.f = [lo, hi, peak](double x) {
    if (x <= lo || x >= hi) return 0.0;
    double u = (x - lo) * (hi - x);
    return std::exp(peak - 1.0 / u);
  };
  c.df = [lo, hi, peak](double x) {
    if (x <= lo || x >= hi) return 0.0;
    double u = (x - lo) * (hi - x);
    double du = lo + hi - 2.0 * x;
    return std::exp(peak - 1.0 / u) * du / (u * u);
  };
  c.mean = integrate(c.f, lo, hi, tight_quad());
  c.mellin0 = integrate([&c](double t) { return c.f(t) / t; }, lo, hi, tight_quad());
  return c;
}

const SmoothCutoff& default_cutoff() {
  static const SmoothCutoff c = bump_cutoff(1.0, 2.0);
  return c;
}

SmoothCutoff cutoff_by_name(const std::string& name) {
  if (name == "bump") return bump_cutoff(1.0, 2.0);
  if (name == "bump13") return bump_cutoff(1.0, 3.0);
  if (name == "bump24") return bump_cutoff(2.0, 4.0);
  throw std::invalid_argument("unknown cutoff name: " + name);
}

double psi2(const SmoothCutoff& psi, double T, const QuadOptions& opts) {
  if (T <= 0.0) throw std::invalid_argument("psi2: T must be positive");
  auto integrand = [&psi, T](double t) {
    double g = -psi.f(t) / (t * t) + psi.df(t) / t;  // (t^{-1} Psi(t))'
    return g * frac(t * T);
  };
  // {tT} breaks at t = j/T
  std::vector<double> breaks;
  for (i64 j = static_cast<i64>(std::ceil(psi.x_lo * T)); j <= static_cast<i64>(std::floor(psi.x_hi * T)); ++j)
    breaks.push_back(static_cast<double>(j) / T);
  return integrate_split(integrand, psi.x_lo, psi.x_hi, breaks, opts);
}

double psi1(const SmoothCutoff& psi, double T, const QuadOptions& opts) {
  if (T <= 0.0) throw std::invalid_argument("psi1: T must be positive");
  double a = psi.x_lo / T, b = psi.x_hi / T;
  auto integrand = [&psi, T](double t) { return psi.omega(t * T) * frac(1.0 / t); };
  // {1/t} breaks at t = 1/j
  std::vector<double> breaks;
  for (i64 j = static_cast<i64>(std::ceil(T / psi.x_hi)); j <= static_cast<i64>(std::floor(T / psi.x_lo)); ++j)
    if (j >= 1) breaks.push_back(1.0 / static_cast<double>(j));
  return -integrate_split(integrand, a, b, breaks, opts);
}

double euler_maclaurin_residual(const std::function<double(double)>& f,
                                const std::function<double(double)>& df, double lo, double hi) {
  KahanSum lhs;
  for (i64 l = std::max<i64>(1, static_cast<i64>(std::floor(lo))); l <= static_cast<i64>(std::ceil(hi)); ++l)
    lhs.add(f(static_cast<double>(l)));
  double main = integrate(f, lo, hi, tight_quad());
  std::vector<double> breaks;
  for (i64 j = static_cast<i64>(std::ceil(lo)); j <= static_cast<i64>(std::floor(hi)); ++j)
    breaks.push_back(static_cast<double>(j));
  double rem = integrate_split([&df](double t) { return frac(t) * df(t); }, lo, hi, breaks,
                               tight_quad());
  return std::abs(lhs.value() - main - rem);
}

namespace {

// log-scale ramp: 0 outside (log(1/N), 0), 1 on the interior plateau
struct LogRamp {
  double t_lo, t_up_start, t_plateau_lo, t_plateau_hi;
  double width = std::log(2.0);

  explicit LogRamp(double N) {
    t_lo = -std::log(N);
    t_plateau_lo = t_lo + width;   // log(2/N)
    t_plateau_hi = -width;         // log(1/2)
    if (t_plateau_lo > t_plateau_hi) {
      double mid = 0.5 * t_lo;
      t_plateau_lo = t_plateau_hi = mid;
    }
    t_up_start = t_plateau_hi;
  }

  double eval_log(double t) const {
    if (t <= t_lo || t >= 0.0) return 0.0;
    if (t < t_plateau_lo) return smoothstep01((t - t_lo) / (t_plateau_lo - t_lo));
    if (t > t_plateau_hi) return smoothstep01(-t / (0.0 - t_plateau_hi));
    return 1.0;
  }
};

// sup over the grid of |d^i/dt^i s(t)| by central differences in the log variable
void ramp_log_derivative_sups(const LogRamp& r, double& m1, double& m2) {
  m1 = m2 = 0.0;
  const int grid = 4000;
  const double h = 1e-4;
  for (int i = 0; i <= grid; ++i) {
    double t = r.t_lo + (0.0 - r.t_lo) * i / grid;
    double f0 = r.eval_log(t);
    double fp = r.eval_log(t + h), fm = r.eval_log(t - h);
    m1 = std::max(m1, std::abs((fp - fm) / (2 * h)));
    m2 = std::max(m2, std::abs((fp - 2 * f0 + fm) / (h * h)));
  }
}

}  // namespace

TestFunction ramp_test_function(double N) {
  if (N < 2.0) throw std::invalid_argument("test function needs N >= 2");
  LogRamp ramp(N);
  double m1, m2;
  ramp_log_derivative_sups(ramp, m1, m2);
  // x d/dx = d/dt and x^2 d^2/dx^2 = d^2/dt^2 - d/dt in the log variable
  double factor_sup = std::max({1.0, m1, m1 + m2});
  double scale = 0.95 / (factor_sup * factor_sup);
  double fscale = std::sqrt(scale);
  auto h = [ramp, N, fscale](double x) {
    if (x <= 1.0 || x >= N) return 0.0;
    return fscale * ramp.eval_log(std::log(x / N));
  };
  TestFunction F;
  F.N = N;
  F.scale = scale;
  F.fx = h;
  F.fy = h;
  F.F = [h](double x, double y) { return h(x) * h(y); };
  return F;
}

TestFunction localized_test_function(double N, double Q, double delta, double xy_cap) {
  TestFunction base = ramp_test_function(N);
  double band = delta * std::log(Q);
  double edge = 0.2 * band;           // smooth edge width of the |log(x/y)| window
  double cap_log = std::log(xy_cap);
  double cap_edge = std::max(0.05 * std::abs(cap_log), 0.1);
  auto fx = base.fx, fy = base.fy;
  TestFunction F;
  F.N = N;
  F.scale = base.scale;
  F.F = [fx, fy, band, edge, cap_log, cap_edge](double x, double y) {
    double p = fx(x) * fy(y);
    if (p == 0.0) return 0.0;
    double t = std::log(x / y);
    double win = smoothstep01((band - std::abs(t)) / edge);
    double cap = smoothstep01((cap_log - std::log(x * y)) / cap_edge);
    return p * win * cap;
  };
  return F;
}

namespace {

cdouble mellin_1d(const std::function<double(double)>& g, double u, double lo, double hi,
                  const QuadOptions& opts) {
  // int g(x) x^{iu-1} dx = int g(e^t) e^{iut} dt over t in [log lo, log hi]
  double a = std::log(lo), b = std::log(hi);
  auto fre = [&g, u](double t) { return g(std::exp(t)) * std::cos(u * t); };
  auto fim = [&g, u](double t) { return g(std::exp(t)) * std::sin(u * t); };
  std::vector<double> breaks;
  if (std::abs(u) > 1.0) {
    double step = M_PI / std::abs(u);
    for (double t = a + step; t < b; t += step) breaks.push_back(t);
  }
  return {integrate_split(fre, a, b, breaks, opts), integrate_split(fim, a, b, breaks, opts)};
}

}  // namespace

cdouble mellin_F(const TestFunction& F, double u, double v, const QuadOptions& opts) {
  if (F.separable()) {
    cdouble mx = mellin_1d(F.fx, u, 1.0, F.N, opts);
    cdouble my = mellin_1d(F.fy, v, 1.0, F.N, opts);
    return mx * my;
  }
  // tensor quadrature in log coordinates
  double a = 0.0, b = std::log(F.N);
  QuadOptions inner = opts;
  inner.abs_tol = opts.abs_tol * 0.1;
  auto integrand = [&](double s) -> cdouble {
    double x = std::exp(s);
    cdouble row = integrate_complex(
        [&](double t) -> cdouble {
          double y = std::exp(t);
          double val = F.F(x, y);
          return val * cdouble{std::cos(v * t), std::sin(v * t)};
        },
        a, b, inner);
    return row * cdouble{std::cos(u * s), std::sin(u * s)};
  };
  return integrate_complex(integrand, a, b, opts);
}

double mellin_l1_bound(const TestFunction& F) {
  if (!F.separable()) throw std::invalid_argument("mellin_l1_bound needs a separable weight");
  auto one_axis = [&](const std::function<double(double)>& g) {
    // int |g^(iu)| du over [-U, U] plus a (2 log N)^2/U-type tail bound;
    // the tail keeps the result an upper bound, so modest precision suffices
    const double U = 150.0;
    QuadOptions opts{1e-7, 1e-5, 40};
    auto mag = [&](double u) { return std::abs(mellin_1d(g, u, 1.0, F.N, {1e-9, 1e-7, 40})); };
    double body = integrate(mag, -U, U, opts);
    double tail = 2.0 * (2.0 * std::log(F.N)) * (2.0 * std::log(F.N)) / U;
    return body + tail;
  };
  double ax = one_axis(F.fx);
  double ay = one_axis(F.fy);
  return ax * ay / (kTwoPi * kTwoPi);
}

SpecialTestFunction gauss_log_special() {
  SpecialTestFunction G;
  G.decay_c = 2.0;
  G.decay_A = 1.0;
  G.G = [](double x, double y) {
    if (x <= 0.0) return 0.0;
    double lx = std::log(x);
    return std::exp(-lx * lx - y);
  };
  return G;
}

}  // namespace charsieve
