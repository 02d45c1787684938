#include "fracdir/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "fracdir/error.hpp"

namespace fracdir {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kUflow = std::numeric_limits<double>::min();
constexpr double kOflow = std::numeric_limits<double>::max();

// 21-point Kronrod extension of the 10-point Gauss rule. Odd entries of
// kXgk are the Gauss abscissae.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600854886934, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Rule {
  double result;
  double abserr;
  double resabs;
  double resasc;
};

double checked(const Integrand& f, double x) {
  double v = f(x);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "integrand returned non-finite value " << v << " at x = " << x;
    throw IntegrandError(msg.str(), x);
  }
  return v;
}

Rule qk21(const Integrand& f, double a, double b) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  std::array<double, 10> fv1{};
  std::array<double, 10> fv2{};
  double resg = 0;
  const double fc = checked(f, centr);
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    const double f1 = checked(f, centr - absc);
    const double f2 = checked(f, centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = checked(f, centr - absc);
    const double f2 = checked(f, centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  Rule r;
  r.result = resk * hlgth;
  r.resabs = resabs * dhlgth;
  r.resasc = resasc * dhlgth;
  r.abserr = std::abs((resk - resg) * hlgth);
  if (r.resasc != 0 && r.abserr != 0) {
    r.abserr = r.resasc * std::min(1.0, std::pow(200 * r.abserr / r.resasc, 1.5));
  }
  if (r.resabs > kUflow / (50 * kEps)) {
    r.abserr = std::max(kEps * 50 * r.resabs, r.abserr);
  }
  return r;
}

// Wynn epsilon algorithm on the sequence of area estimates.
class EpsilonTable {
 public:
  void push(double v) { tab_[++n_] = v; }
  int size() const { return n_; }

  // Returns the extrapolated value and its error estimate.
  std::pair<double, double> extrapolate() {
    constexpr int limexp = 50;
    ++nres_;
    double abserr = kOflow;
    double result = tab_[n_];
    if (n_ < 3) {
      return {result, std::max(abserr, 5 * kEps * std::abs(result))};
    }
    tab_[n_ + 2] = tab_[n_];
    const int newelm = (n_ - 1) / 2;
    tab_[n_] = kOflow;
    const int num = n_;
    int k1 = n_;
    for (int i = 1; i <= newelm; ++i) {
      const int k2 = k1 - 1;
      const int k3 = k1 - 2;
      double res = tab_[k1 + 2];
      const double e0 = tab_[k3];
      const double e1 = tab_[k2];
      const double e2 = res;
      const double e1abs = std::abs(e1);
      const double delta2 = e2 - e1;
      const double err2 = std::abs(delta2);
      const double tol2 = std::max(std::abs(e2), e1abs) * kEps;
      const double delta3 = e1 - e0;
      const double err3 = std::abs(delta3);
      const double tol3 = std::max(e1abs, std::abs(e0)) * kEps;
      if (err2 <= tol2 && err3 <= tol3) {
        result = res;
        abserr = err2 + err3;
        return {result, std::max(abserr, 5 * kEps * std::abs(result))};
      }
      const double e3 = tab_[k1];
      tab_[k1] = e1;
      const double delta1 = e1 - e3;
      const double err1 = std::abs(delta1);
      const double tol1 = std::max(e1abs, std::abs(e3)) * kEps;
      if (err1 <= tol1 || err2 <= tol2 || err3 <= tol3) {
        n_ = i + i - 1;
        break;
      }
      const double ss = 1 / delta1 + 1 / delta2 - 1 / delta3;
      const double epsinf = std::abs(ss * e1);
      if (epsinf <= 1e-4) {
        n_ = i + i - 1;
        break;
      }
      res = e1 + 1 / ss;
      tab_[k1] = res;
      k1 -= 2;
      const double error = err2 + std::abs(res - e2) + err3;
      if (error <= abserr) {
        abserr = error;
        result = res;
      }
    }
    if (n_ == limexp) n_ = 2 * (limexp / 2) - 1;
    int ib = (num % 2 == 0) ? 2 : 1;
    const int ie = newelm + 1;
    for (int i = 1; i <= ie; ++i) {
      tab_[ib] = tab_[ib + 2];
      ib += 2;
    }
    if (num != n_) {
      int indx = num - n_ + 1;
      for (int i = 1; i <= n_; ++i) tab_[i] = tab_[indx++];
    }
    if (nres_ < 4) {
      res3la_[nres_] = result;
      abserr = kOflow;
    } else {
      abserr = std::abs(result - res3la_[3]) + std::abs(result - res3la_[2]) +
               std::abs(result - res3la_[1]);
      res3la_[1] = res3la_[2];
      res3la_[2] = res3la_[3];
      res3la_[3] = result;
    }
    return {result, std::max(abserr, 5 * kEps * std::abs(result))};
  }

 private:
  std::array<double, 56> tab_{};
  std::array<double, 4> res3la_{};
  int n_ = 0;
  int nres_ = 0;
};

struct Segment {
  double a;
  double b;
  double r;
  double e;
};

// Port of the QUADPACK QAGS driver. Interval bookkeeping uses linear scans in
// place of the original sorted index list.
QuadResult qags(const Integrand& f, double a, double b, double epsabs,
                double epsrel, int limit) {
  QuadResult out;
  int ier = 0;
  int ierro = 0;

  const Rule first = qk21(f, a, b);
  double result = first.result;
  double abserr = first.abserr;
  const double defabs = first.resabs;
  const double dres = std::abs(result);
  double errbnd = std::max(epsabs, epsrel * dres);
  out.evaluations = 21;

  if (abserr <= 100 * kEps * defabs && abserr > errbnd) ier = 2;
  if (limit == 1) ier = 1;
  if (ier != 0 || (abserr <= errbnd && abserr != first.resasc) || abserr == 0) {
    out.value = result;
    out.error_estimate = abserr;
    out.converged = abserr <= std::max(epsabs, epsrel * std::abs(result));
    return out;
  }

  std::vector<Segment> segs;
  segs.reserve(limit + 1);
  segs.push_back({a, b, result, abserr});

  EpsilonTable eps;
  eps.push(result);
  double area = result;
  double errsum = abserr;
  abserr = kOflow;
  int ktmin = 0;
  bool extrap = false;
  bool noext = false;
  int iroff1 = 0, iroff2 = 0, iroff3 = 0;
  const int ksgn = (dres >= (1 - 50 * kEps) * defabs) ? 1 : -1;
  double small = 0, erlarg = 0, ertest = 0, correc = 0;
  bool sum_path = false;

  auto argmax = [&](bool large_only) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
      if (large_only && std::abs(segs[i].b - segs[i].a) <= small) continue;
      if (best < 0 || segs[i].e > segs[best].e) best = i;
    }
    return best;
  };

  int maxerr = 0;
  int last = 1;
  for (last = 2; last <= limit; ++last) {
    Segment& s = segs[maxerr];
    const double errmax = s.e;
    const double a1 = s.a;
    const double b1 = 0.5 * (s.a + s.b);
    const double a2 = b1;
    const double b2 = s.b;
    const double erlast = errmax;
    const Rule r1 = qk21(f, a1, b1);
    const Rule r2 = qk21(f, a2, b2);
    out.evaluations += 42;
    const double area12 = r1.result + r2.result;
    const double erro12 = r1.abserr + r2.abserr;
    errsum += erro12 - errmax;
    area += area12 - s.r;
    if (r1.resasc != r1.abserr && r2.resasc != r2.abserr) {
      if (std::abs(s.r - area12) <= 1e-5 * std::abs(area12) &&
          erro12 >= 0.99 * errmax) {
        if (extrap) {
          ++iroff2;
        } else {
          ++iroff1;
        }
      }
      if (last > 10 && erro12 > errmax) ++iroff3;
    }
    s = {a1, b1, r1.result, r1.abserr};
    segs.push_back({a2, b2, r2.result, r2.abserr});
    errbnd = std::max(epsabs, epsrel * std::abs(area));

    if (iroff1 + iroff2 >= 10 || iroff3 >= 20) ier = 2;
    if (iroff2 >= 5) ierro = 3;
    if (last == limit) ier = 1;
    if (std::max(std::abs(a1), std::abs(b2)) <=
        (1 + 100 * kEps) * (std::abs(a2) + 1000 * kUflow)) {
      ier = 4;
    }

    if (errsum <= errbnd) {
      sum_path = true;
      break;
    }
    if (ier != 0) break;

    if (last == 2) {
      small = std::abs(b - a) * 0.375;
      erlarg = errsum;
      ertest = errbnd;
      eps.push(area);
      maxerr = argmax(false);
      continue;
    }
    if (noext) {
      maxerr = argmax(false);
      continue;
    }
    erlarg -= erlast;
    if (std::abs(b1 - a1) > small) erlarg += erro12;
    if (!extrap) {
      maxerr = argmax(false);
      if (std::abs(segs[maxerr].b - segs[maxerr].a) > small) continue;
      extrap = true;
    }
    if (ierro != 3 && erlarg > ertest) {
      const int large = argmax(true);
      if (large >= 0) {
        maxerr = large;
        continue;
      }
    }

    eps.push(area);
    const auto [reseps, abseps] = eps.extrapolate();
    ++ktmin;
    if (ktmin > 5 && abserr < 1e-3 * errsum) ier = 5;
    if (abseps < abserr) {
      ktmin = 0;
      abserr = abseps;
      result = reseps;
      correc = erlarg;
      ertest = std::max(epsabs, epsrel * std::abs(reseps));
      if (abserr <= ertest) break;
    }
    if (eps.size() == 1) noext = true;
    if (ier == 5) break;
    maxerr = argmax(false);
    extrap = false;
    small *= 0.5;
    erlarg = errsum;
  }

  if (!sum_path) {
    bool divergence_test = true;
    if (abserr == kOflow) {
      sum_path = true;
    } else if (ier + ierro != 0) {
      if (ierro == 3) abserr += correc;
      if (ier == 0) ier = 3;
      if (result != 0 && area != 0) {
        sum_path = abserr / std::abs(result) > errsum / std::abs(area);
      } else if (abserr > errsum) {
        sum_path = true;
      } else if (area == 0) {
        divergence_test = false;
      }
    }
    // An extrapolated value far from the summed area, or of the opposite
    // sign, signals a divergent integral.
    if (!sum_path && divergence_test &&
        !(ksgn == -1 && std::max(std::abs(result), std::abs(area)) <= defabs * 0.01)) {
      if (0.01 > result / area || result / area > 100 || errsum > std::abs(area)) ier = 6;
    }
  }
  if (sum_path) {
    result = 0;
    for (const auto& sg : segs) result += sg.r;
    abserr = errsum;
  }

  out.value = result;
  out.error_estimate = abserr;
  out.converged = std::isfinite(result) &&
                  abserr <= std::max(epsabs, epsrel * std::abs(result)) &&
                  ier != 6;
  return out;
}

QuadResult combine(const QuadResult& x, const QuadResult& y,
                   const QuadSpec& spec) {
  QuadResult r;
  r.value = x.value + y.value;
  r.error_estimate = x.error_estimate + y.error_estimate;
  r.evaluations = x.evaluations + y.evaluations;
  r.converged = x.converged && y.converged &&
                r.error_estimate <=
                    std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value));
  return r;
}

}  // namespace

void QuadSpec::validate() const {
  if (!(abs_tol > 0) || !(rel_tol > 0) || max_subdivisions < 8) {
    throw DomainError(
        "QuadSpec requires abs_tol > 0, rel_tol > 0, max_subdivisions >= 8");
  }
}

QuadResult integrate_interval(const Integrand& f, double a, double b,
                              const QuadSpec& spec) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("integrate_interval requires finite limits");
  }
  if (a == b) return {0, 0, 0, true};
  return qags(f, a, b, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
}

QuadResult integrate_unit_interval(const SplitIntegrand& f,
                                   const QuadSpec& spec) {
  spec.validate();
  auto run = [&](double abs_tol, double rel_tol) {
    const Integrand lower = [&](double t) { return f(t, 1 - t); };
    const Integrand upper = [&](double s) { return f(1 - s, s); };
    const QuadResult lo =
        qags(lower, 0, 0.5, 0.5 * abs_tol, rel_tol, spec.max_subdivisions);
    const QuadResult hi =
        qags(upper, 0, 0.5, 0.5 * abs_tol, rel_tol, spec.max_subdivisions);
    return combine(lo, hi, spec);
  };
  QuadResult r = run(spec.abs_tol, spec.rel_tol);
  if (!r.converged) {
    // Halves with opposite signs can each meet their own relative target
    // while the total misses it; retry with an absolute target on the total.
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(r.value));
    if (target > 0 && std::isfinite(target) && target < spec.abs_tol * 1e30) {
      QuadResult retry = run(target, spec.rel_tol * 1e-3);
      retry.evaluations += r.evaluations;
      if (retry.converged || retry.error_estimate < r.error_estimate) r = retry;
    }
  }
  return r;
}

QuadResult integrate_unit_interval(const Integrand& f, const QuadSpec& spec) {
  return integrate_unit_interval(
      SplitIntegrand([&](double q, double) { return f(q); }), spec);
}

QuadResult integrate_semi_infinite(const Integrand& f, const QuadSpec& spec) {
  spec.validate();
  switch (spec.transform) {
    case Transform::rational_map:
      return integrate_unit_interval(
          SplitIntegrand([&](double t, double s) {
            const double y = t / s;
            const double v = f(y);
            if (v == 0) return 0.0;
            return v / (s * s);
          }),
          spec);
    case Transform::log_map:
      return integrate_unit_interval(
          SplitIntegrand([&](double u, double v) {
            // y = -ln u, dy = du/u; v = 1-u keeps small y accurate.
            const double y = u < 0.5 ? -std::log(u) : -std::log1p(-v);
            const double fy = f(y);
            if (fy == 0) return 0.0;
            return fy / u;
          }),
          spec);
    case Transform::none:
      break;
  }
  throw DomainError("integrate_semi_infinite needs a mapping transform");
}

}  // namespace fracdir
