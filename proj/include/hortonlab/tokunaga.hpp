#pragma once

/**
 * Side-branching laws {T_k} and the root solve for the branch-count growth
 * factor R.
 *
 * A TokunagaSequence gives the expected number T_k of side branches whose
 * order is k below that of the branch carrying them. Four families:
 *
 *   geometric       T_k = a * c^(k-1)
 *   shallow         (T_1, T_2, 0, 0, ...)
 *   differentiated  T_k = a * k * c^(k-1)
 *   explicit list   finite list, zero beyond it
 *
 * The generating function
 *
 *   t_hat(z) = -1 + 2z + sum_{k>=1} z^k T_k
 *
 * is strictly increasing on [0, min(1/2, 1/c)) with t_hat(0) = -1, and has a
 * unique real root w0 in (0, 1/2]. R = 1/w0 is the asymptotic ratio of
 * branch counts between consecutive orders (see horton.hpp). Closed forms
 * are used where the family admits one; otherwise a scanned bracket plus
 * bisection, which the monotonicity makes reliable.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hortonlab/error.hpp"
#include "hortonlab/format.hpp"

namespace hortonlab {

enum class Family { geometric, shallow, differentiated, explicit_list };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::geometric: return "geometric";
    case Family::shallow: return "shallow";
    case Family::differentiated: return "differentiated";
    case Family::explicit_list: return "explicit";
  }
  return "unknown";
}

class TokunagaSequence {
 public:
  /// Default: no side branching at all (explicit empty list).
  TokunagaSequence() = default;

  static TokunagaSequence geometric(double a, double c) {
    require_positive(a, "a");
    require_positive(c, "c");
    TokunagaSequence s;
    s.family_ = Family::geometric;
    s.a_ = a;
    s.c_ = c;
    return s;
  }

  static TokunagaSequence shallow(double t1, double t2) {
    require_non_negative(t1, "T1");
    require_non_negative(t2, "T2");
    TokunagaSequence s;
    s.family_ = Family::shallow;
    s.head_ = {t1, t2};
    return s;
  }

  static TokunagaSequence differentiated(double a, double c) {
    require_positive(a, "a");
    require_positive(c, "c");
    TokunagaSequence s;
    s.family_ = Family::differentiated;
    s.a_ = a;
    s.c_ = c;
    return s;
  }

  /// terms[k-1] = T_k; everything beyond the list is zero. Trailing zeros
  /// are trimmed so the stored list length is the true support.
  static TokunagaSequence explicit_list(std::vector<double> terms) {
    for (double v : terms)
      require_non_negative(v, "explicit term");
    while (!terms.empty() && terms.back() == 0.0) terms.pop_back();
    TokunagaSequence s;
    s.family_ = Family::explicit_list;
    s.head_ = std::move(terms);
    return s;
  }

  Family family() const noexcept { return family_; }
  double a() const noexcept { return a_; }
  double c() const noexcept { return c_; }
  const std::vector<double>& head() const noexcept { return head_; }

  /// T_k for k >= 1.
  double term(int k) const {
    if (k < 1) raise(errc::nonpositive_k, "Tokunaga index k must be >= 1");
    switch (family_) {
      case Family::geometric:
        return a_ * std::pow(c_, k - 1);
      case Family::differentiated:
        return a_ * k * std::pow(c_, k - 1);
      case Family::shallow:
      case Family::explicit_list:
        return static_cast<std::size_t>(k) <= head_.size()
                   ? head_[static_cast<std::size_t>(k) - 1]
                   : 0.0;
    }
    return 0.0;
  }

  /// Exponential growth factor of T_k: c for the two infinite families,
  /// 0 for finite support.
  double growth_rate() const noexcept {
    return (family_ == Family::geometric || family_ == Family::differentiated)
               ? c_
               : 0.0;
  }

  /// Convergence radius of sum z^k T_k: 1/growth_rate, infinite for finite
  /// support.
  double radius() const noexcept {
    double g = growth_rate();
    return g > 0.0 ? 1.0 / g : std::numeric_limits<double>::infinity();
  }

  std::string describe() const {
    switch (family_) {
      case Family::geometric:
        return "geometric(a=" + real17(a_) + ", c=" + real17(c_) + ")";
      case Family::differentiated:
        return "differentiated(a=" + real17(a_) + ", c=" + real17(c_) + ")";
      case Family::shallow:
        return "shallow(T1=" + real17(head_[0]) + ", T2=" + real17(head_[1]) + ")";
      case Family::explicit_list: {
        std::string out = "explicit(";
        for (std::size_t i = 0; i < head_.size(); ++i) {
          if (i) out += ",";
          out += real17(head_[i]);
        }
        return out + ")";
      }
    }
    return "unknown";
  }

 private:
  static void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      raise(errc::negative_param, std::string(name) + " must be > 0");
  }
  static void require_non_negative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
      raise(errc::negative_param, std::string(name) + " must be >= 0");
  }

  Family family_ = Family::explicit_list;
  double a_ = 0.0;
  double c_ = 0.0;
  std::vector<double> head_;
};

/// t_hat(z) = -1 + 2z + sum z^k T_k, by the family closed form:
///   geometric       -1 + 2z + az/(1-cz)
///   differentiated  -1 + 2z + az/(1-cz)^2
///   shallow         -1 + (T1+2)z + T2 z^2
///   explicit        plain polynomial
/// For the infinite families z must stay strictly below the radius 1/c.
inline double t_hat(const TokunagaSequence& seq, double z) {
  switch (seq.family()) {
    case Family::geometric: {
      if (z >= seq.radius())
        raise(errc::out_of_domain,
              "t_hat(z) requires z < 1/c = " + real17(seq.radius()));
      return -1.0 + 2.0 * z + seq.a() * z / (1.0 - seq.c() * z);
    }
    case Family::differentiated: {
      if (z >= seq.radius())
        raise(errc::out_of_domain,
              "t_hat(z) requires z < 1/c = " + real17(seq.radius()));
      double d = 1.0 - seq.c() * z;
      return -1.0 + 2.0 * z + seq.a() * z / (d * d);
    }
    case Family::shallow: {
      double t1 = seq.head()[0], t2 = seq.head()[1];
      return -1.0 + (t1 + 2.0) * z + t2 * z * z;
    }
    case Family::explicit_list: {
      // Horner over the finite list, then the -1 + 2z part.
      double acc = 0.0;
      const auto& h = seq.head();
      for (std::size_t i = h.size(); i-- > 0;) acc = acc * z + h[i];
      return -1.0 + 2.0 * z + z * acc;
    }
  }
  return 0.0;
}

/// Roots p1 > p2 of 1 - (a+c+2)z + 2c z^2, the denominator of the geometric
/// family's rational -1/t_hat. The discriminant (a+c+2)^2 - 8c exceeds
/// a^2 + 2a(c+2) + (c-2)^2 > 0, so the roots are always real and distinct.
/// p2 = 1/R. p2 is recovered from p1 via the product p1*p2 = 1/(2c), which
/// avoids the cancellation in the quadratic formula's minus branch.
inline std::pair<double, double> geometric_roots(double a, double c) {
  if (!(a > 0.0) || !(c > 0.0))
    raise(errc::negative_param, "geometric_roots requires a > 0 and c > 0");
  double b = a + c + 2.0;
  double p1 = (b + std::sqrt(b * b - 8.0 * c)) / (4.0 * c);
  double p2 = 1.0 / (2.0 * c * p1);
  return {p1, p2};
}

/// Coefficients, highest power first, of the cubic
///   2c^2 z^3 - c(c+4) z^2 + (a+2c+2) z - 1,
/// which equals (1-cz)^2 * t_hat(z) for the differentiated family. Its
/// smallest positive root is w0; working on the cubic avoids the pole of
/// t_hat at z = 1/c.
inline std::array<double, 4> differentiated_cubic(double a, double c) {
  if (!(a > 0.0) || !(c > 0.0))
    raise(errc::negative_param, "differentiated_cubic requires a > 0 and c > 0");
  return {2.0 * c * c, -c * (c + 4.0), a + 2.0 * c + 2.0, -1.0};
}

enum class RootMethod { closed_form, bisection };

inline const char* root_method_name(RootMethod m) {
  return m == RootMethod::closed_form ? "closed_form" : "bisection";
}

/// Result of the root solve: w0 is the unique real zero of t_hat in
/// (0, 1/2], R = 1/w0 >= 2. Whichever of the two is available in closed
/// form is computed directly; the other is its reciprocal.
struct ExponentResult {
  double w0 = 0.0;
  double R = 0.0;
  RootMethod method = RootMethod::bisection;
  double residual = 0.0;  // |t_hat(w0)|
};

namespace detail {

/// Find the zero of a function f that is negative at 0+ and strictly
/// increasing on (0, upper]. Scans in 64 equal steps for the first
/// non-negative value, then bisects the bracketing interval down to
/// absolute width tol. Raises NO_ROOT_IN_DOMAIN when f stays negative
/// through upper.
template <typename F>
double scan_and_bisect(F&& f, double upper, double tol) {
  constexpr int kSteps = 64;
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  for (int i = 1; i <= kSteps; ++i) {
    double z = upper * (static_cast<double>(i) / kSteps);
    double fz = f(z);
    if (fz == 0.0) return z;
    if (fz > 0.0) {
      hi = z;
      bracketed = true;
      break;
    }
    lo = z;
  }
  if (!bracketed)
    raise(errc::no_root_in_domain,
          "function stays negative on (0, " + real17(upper) + "]");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket width hit double spacing
    double fm = f(mid);
    if (fm == 0.0) return mid;
    (fm < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Root solve forced onto the generic scan + bisection path, for every
/// family. The closed-form paths in horton_exponent are validated against
/// this one.
inline ExponentResult horton_exponent_bisection(const TokunagaSequence& seq,
                                                double tol = 1e-12) {
  if (!(tol > 0.0)) raise(errc::bad_config, "tolerance must be > 0");
  double upper = 0.5;
  if (seq.growth_rate() > 0.0) {
    // Stay strictly inside the convergence radius; the root is interior, so
    // shaving the endpoint cannot lose it.
    upper = std::min(0.5, (1.0 - 1e-9) / seq.growth_rate());
  }
  ExponentResult r;
  r.w0 = detail::scan_and_bisect([&](double z) { return t_hat(seq, z); },
                                 upper, tol);
  r.R = 1.0 / r.w0;
  r.method = RootMethod::bisection;
  r.residual = std::abs(t_hat(seq, r.w0));
  return r;
}

/// Solve t_hat(w0) = 0 for w0 in (0, 1/2] and report R = 1/w0.
///
/// Closed forms:
///   geometric        w0 = p2, R = (a+c+2 + sqrt((a+c+2)^2 - 8c)) / 2
///   shallow, T2 > 0  w0 = 2 / (T1+2 + sqrt((T1+2)^2 + 4 T2))
///                    (the positive quadratic root, written without
///                    subtractive cancellation); R = 1/w0's closed twin
///   T_k = 0 for k>=2 w0 = 1/(T1+2), R = T1 + 2 exactly
///   no side branches w0 = 1/2, R = 2 exactly
/// Differentiated and general explicit lists use bisection: the former on
/// its cubic (whose sign matches t_hat below the pole), the latter on the
/// polynomial t_hat itself.
inline ExponentResult horton_exponent(const TokunagaSequence& seq,
                                      double tol = 1e-12) {
  if (!(tol > 0.0)) raise(errc::bad_config, "tolerance must be > 0");
  ExponentResult r;
  switch (seq.family()) {
    case Family::geometric: {
      auto [p1, p2] = geometric_roots(seq.a(), seq.c());
      (void)p1;
      double b = seq.a() + seq.c() + 2.0;
      r.w0 = p2;
      r.R = 0.5 * (b + std::sqrt(b * b - 8.0 * seq.c()));
      r.method = RootMethod::closed_form;
      break;
    }
    case Family::shallow: {
      double t1 = seq.head()[0], t2 = seq.head()[1];
      if (t2 == 0.0 && t1 == 0.0) {
        r.w0 = 0.5;
        r.R = 2.0;
      } else if (t2 == 0.0) {
        r.R = t1 + 2.0;
        r.w0 = 1.0 / r.R;
      } else {
        double b = t1 + 2.0;
        double s = std::sqrt(b * b + 4.0 * t2);
        r.w0 = 2.0 / (b + s);
        r.R = 0.5 * (b + s);
      }
      r.method = RootMethod::closed_form;
      break;
    }
    case Family::differentiated: {
      auto p = differentiated_cubic(seq.a(), seq.c());
      auto cubic = [&](double z) {
        return ((p[0] * z + p[1]) * z + p[2]) * z + p[3];
      };
      double upper = std::min(0.5, 1.0 / seq.c());
      r.w0 = detail::scan_and_bisect(cubic, upper, tol);
      r.R = 1.0 / r.w0;
      r.method = RootMethod::bisection;
      break;
    }
    case Family::explicit_list: {
      const auto& h = seq.head();
      if (h.empty()) {
        r.w0 = 0.5;
        r.R = 2.0;
        r.method = RootMethod::closed_form;
      } else if (h.size() == 1) {
        // Single term: t_hat(z) = -1 + (T1+2) z, root exactly 1/(T1+2).
        r.R = h[0] + 2.0;
        r.w0 = 1.0 / r.R;
        r.method = RootMethod::closed_form;
      } else {
        r.w0 = detail::scan_and_bisect(
            [&](double z) { return t_hat(seq, z); }, 0.5, tol);
        r.R = 1.0 / r.w0;
        r.method = RootMethod::bisection;
      }
      break;
    }
  }
  r.residual = std::abs(t_hat(seq, r.w0));
  return r;
}

}  // namespace hortonlab
