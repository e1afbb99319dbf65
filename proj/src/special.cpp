#include "drh/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "drh/errors.hpp"

namespace drh {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("incomplete gamma needs a > 0 and x >= 0");
}

// log of x^a e^{-x} / Gamma(a)
double log_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

}  // namespace

double regularized_gamma_q_series(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  // P(a, x) = x^a e^{-x} / Gamma(a + 1) * sum_k x^k / ((a+1)...(a+k))
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps * 0.25) break;
  }
  const double p = sum * std::exp(log_prefactor(a, x));
  return 1.0 - p;
}

double regularized_gamma_q_cf(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  // Q(a, x) = x^a e^{-x} / Gamma(a) * 1/(x+1-a- 1(1-a)/(x+3-a- 2(2-a)/(x+5-a- ...)))
  double b = x + 1.0 - a;
  if (std::abs(b) < kTiny) b = kTiny;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps * 0.5) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

double regularized_gamma_q(double a, double x) {
  return x < a + 1.0 ? regularized_gamma_q_series(a, x) : regularized_gamma_q_cf(a, x);
}

std::complex<double> exp_integral_entire_series(std::complex<double> z) {
  std::complex<double> term = 1.0;  // z^k / k!
  std::complex<double> sum = 0.0;
  for (int k = 1; k < 5000; ++k) {
    term *= z / static_cast<double>(k);
    const std::complex<double> add = term / static_cast<double>(k);
    sum += add;
    if (k > std::abs(z) && std::abs(add) <= kEps * 0.25 * std::abs(sum)) break;
  }
  return sum;
}

std::complex<double> exp_integral_e1_cf(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() <= 0.0) {
    throw DomainError("E1 continued fraction: argument on the branch cut");
  }
  // E1(z) = e^{-z} (1/(z+1- 1/(z+3- 4/(z+5- ...)))), modified Lentz.
  std::complex<double> b = z + 1.0;
  std::complex<double> c = 1.0 / kTiny;
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int i = 1; i < 200000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    const std::complex<double> delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h * std::exp(-z);
  }
  throw ValidationError("E1 continued fraction did not converge");
}

std::complex<double> exp_integral_entire(std::complex<double> z) {
  // Series terms peak near e^{|z|} while the sum is of size e^{Re z}.
  const double loss = (std::abs(z) - z.real()) / std::numbers::ln10;
  if (loss <= 4.0 || std::abs(z) < 2.0) return exp_integral_entire_series(z);
  return -kEulerGamma - std::log(-z) - exp_integral_e1_cf(-z);
}

namespace {

// Kronrod 15-point nodes and weights, with the embedded Gauss 7-point weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  std::complex<double> value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<std::complex<double>(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const std::complex<double> fc = f(center);
  std::complex<double> kronrod = fc * kWgk[7];
  std::complex<double> gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const std::complex<double> sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& f, double a,
                                    double b, double abs_tol, double rel_tol,
                                    std::size_t max_intervals) {
  std::priority_queue<Segment> heap;
  heap.push(gk15(f, a, b));
  std::complex<double> total = heap.top().value;
  double error = heap.top().error;
  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (heap.size() >= max_intervals) {
      throw ValidationError("adaptive quadrature exceeded its interval budget");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    heap.push(left);
    heap.push(right);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  // Final value summed left to right so it does not depend on heap order.
  std::vector<Segment> parts;
  parts.reserve(heap.size());
  for (; !heap.empty(); heap.pop()) parts.push_back(heap.top());
  std::sort(parts.begin(), parts.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  total = 0.0;
  error = 0.0;
  for (const auto& seg : parts) {
    total += seg.value;
    error += seg.error;
  }
  return {total, error, parts.size()};
}

double alternating_sum_cvz(const std::function<double(std::size_t)>& a, std::size_t depth) {
  const double n = static_cast<double>(depth);
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0;
  double c = -d;
  double s = 0.0;
  for (std::size_t k = 0; k < depth; ++k) {
    const double kk = static_cast<double>(k);
    c = b - c;
    s += c * a(k);
    b = (kk + n) * (kk - n) * b / ((kk + 0.5) * (kk + 1.0));
  }
  return s / d;
}

double richardson_extrapolate(std::span<const double> values, double ratio,
                              const std::function<double(std::size_t)>& exponent, double* error) {
  if (values.empty()) throw ConfigError("richardson_extrapolate: no values");
  std::vector<double> row(values.begin(), values.end());
  double prev_diag = row[0];
  double last_diag = row[0];
  for (std::size_t level = 1; level < values.size(); ++level) {
    const double factor = std::pow(ratio, exponent(level - 1));
    for (std::size_t j = values.size() - 1; j >= level; --j) {
      row[j] = (factor * row[j] - row[j - 1]) / (factor - 1.0);
    }
    prev_diag = last_diag;
    last_diag = row[level];
  }
  if (error != nullptr) *error = std::abs(last_diag - prev_diag);
  return last_diag;
}

}  // namespace drh
