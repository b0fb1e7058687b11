#include "charsieve/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "charsieve/accum.hpp"

namespace charsieve {

namespace {

// 15-point Kronrod rule with embedded 7-point Gauss rule on [-1,1].
const double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
const double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502, 0.1406532597155259,
    0.1690047266392679,  0.1903505780647854,  0.2044329400752989, 0.2094821410847278};
const double kWg[4] = {0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
                       0.4179591836734694};

struct GkResult {
  double kronrod;
  double err;
};

template <class F>
GkResult gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double resk = kWgk[7] * fv[7];
  double resg = kWg[3] * fv[7];
  for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
  for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  return {resk * h, std::abs((resk - resg) * h)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
  GkResult r = gk15(f, a, b);
  if (r.err <= tol || r.err <= 1e-300) return r.kronrod;
  if (depth <= 0) throw QuadratureError("adaptive quadrature did not converge");
  double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& opts) {
  if (a == b) return 0.0;
  GkResult first = gk15(f, a, b);
  double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(first.kronrod));
  if (first.err <= tol) return first.kronrod;
  double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * tol, opts.max_depth) + adapt(f, m, b, 0.5 * tol, opts.max_depth);
}

double integrate_split(const std::function<double(double)>& f, double a, double b,
                       const std::vector<double>& interior_breaks, const QuadOptions& opts) {
  if (a == b) return 0.0;
  std::vector<double> pts;
  pts.push_back(a);
  for (double x : interior_breaks)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  QuadOptions piece = opts;
  piece.abs_tol = opts.abs_tol / static_cast<double>(pts.size());
  KahanSum total;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] > pts[i]) total.add(integrate(f, pts[i], pts[i + 1], piece));
  }
  return total.value();
}

cdouble integrate_complex(const std::function<cdouble(double)>& f, double a, double b,
                          const QuadOptions& opts) {
  double re = integrate([&f](double x) { return f(x).real(); }, a, b, opts);
  double im = integrate([&f](double x) { return f(x).imag(); }, a, b, opts);
  return {re, im};
}

}  // namespace charsieve
