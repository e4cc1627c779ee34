#pragma once

#include <vector>

#include "glmc/common.hpp"

namespace glmc {

// Parameters of the smoothed distance-reweighting function: L is the
// expansion budget q + L_Ric/2, R the dissipativity radius, eps the
// smoothing width (eps <= 1/(4 sqrt(L)) when L > 0).
struct LyapunovParams {
  double l = 0.0;
  double r = 0.0;
  double eps = 0.0;

  void validate() const {
    if (l < 0.0 || r < 0.0 || eps < 0.0)
      throw InvalidInput("lyapunov params: L, R, eps must be >= 0");
    if (l > 0.0 && eps > 1.0 / (4.0 * std::sqrt(l)) + 1e-12)
      throw InvalidInput("lyapunov params: eps exceeds 1/(4 sqrt(L))");
    if (r + eps <= 0.0)
      throw InvalidInput("lyapunov params: R + eps must be positive");
  }
};

// f(r) = int_0^r psi nu with
//   mu:  piecewise-linear cutoff at [R, R+eps]
//   psi: exp(-L int_0^r s mu(s) ds)               (inner integral closed form)
//   Psi: int_0^r psi
//   nu:  1 - (1/2) int_0^r mu Psi / psi  /  int_0^inf mu Psi / psi
// The psi exponent carries no extra 1/2: that is the convention under which
// f'' + L r f' = psi nu' on [0, R], which the contraction property needs,
// and under which psi(R) = e^{-L R^2/2} matches the bound constants.
// Everything beyond R+eps is closed form (mu vanishes, nu = 1/2, psi frozen),
// so the cumulative quadrature only runs on [0, R+eps].
class LyapunovFn {
 public:
  explicit LyapunovFn(const LyapunovParams& p, double quad_tol = 1e-9)
      : p_(p), quad_tol_(quad_tol) {
    p_.validate();
    build_table();
  }

  const LyapunovParams& params() const { return p_; }

  double mu(double r) const {
    if (r <= p_.r) return 1.0;
    if (p_.eps <= 0.0 || r >= p_.r + p_.eps) return 0.0;
    return 1.0 - (r - p_.r) / p_.eps;
  }

  // int_0^r s mu(s) ds, closed form per piece
  double s_mu_integral(double r) const {
    const double R = p_.r, e = p_.eps;
    if (r <= R) return 0.5 * r * r;
    double out = 0.5 * R * R;
    const double hi = std::min(r, R + e);
    if (e > 0.0 && hi > R) {
      // int_R^hi s (1 - (s-R)/e) ds
      const double a = 0.5 * (hi * hi - R * R);
      const double b = (hi * hi * hi - R * R * R) / 3.0 - R * 0.5 * (hi * hi - R * R);
      out += a - b / e;
    }
    return out;
  }

  double psi(double r) const { return std::exp(-p_.l * s_mu_integral(r)); }

  double Psi(double r) const {
    if (r <= r_edge()) return eval(r).big_psi;
    return edge_.big_psi + psi_inf_ * (r - r_edge());
  }

  double nu(double r) const {
    if (r >= r_edge()) return 0.5;
    return 1.0 - 0.5 * eval(r).a / a_inf_;
  }

  double f(double r) const {
    if (r <= r_edge()) {
      const State s = eval(r);
      return s.big_psi - s.g / (2.0 * a_inf_);
    }
    return f_edge_ + 0.5 * psi_inf_ * (r - r_edge());
  }

  double f_prime(double r) const { return psi(r) * nu(r); }

  // analytic second derivative: psi' nu + psi nu'
  double f_second(double r) const {
    const double first = -p_.l * mu(r) * r * psi(r) * nu(r);  // psi' = -L r mu psi
    const double second = r >= r_edge() ? 0.0 : -mu(r) * Psi(r) / (2.0 * a_inf_);
    return first + second;
  }

  double g(double s) const { return f(std::sqrt(s + p_.eps)); }

  double g_prime(double s) const {
    const double root = std::sqrt(s + p_.eps);
    if (root <= 0.0) throw InvalidInput("g_prime: s + eps must be positive");
    return f_prime(root) / (2.0 * root);
  }

  double normalizer() const { return a_inf_; }
  double quad_tol() const { return quad_tol_; }

 private:
  struct State {
    double big_psi = 0.0;  // Psi
    double a = 0.0;        // int mu Psi / psi
    double g = 0.0;        // int psi * a   (gives f = Psi - g / (2 a_inf))
  };

  double r_edge() const { return p_.r + p_.eps; }

  void rk4_step(State& s, double r, double h) const {
    auto deriv = [this](double rr, const State& st) {
      State d;
      d.big_psi = psi(rr);
      d.a = mu(rr) * st.big_psi / psi(rr);
      d.g = psi(rr) * st.a;
      return d;
    };
    auto axpy = [](const State& s0, double c, const State& d) {
      return State{s0.big_psi + c * d.big_psi, s0.a + c * d.a, s0.g + c * d.g};
    };
    State k1 = deriv(r, s);
    State k2 = deriv(r + 0.5 * h, axpy(s, 0.5 * h, k1));
    State k3 = deriv(r + 0.5 * h, axpy(s, 0.5 * h, k2));
    State k4 = deriv(r + h, axpy(s, h, k3));
    s.big_psi += (h / 6.0) * (k1.big_psi + 2 * k2.big_psi + 2 * k3.big_psi + k4.big_psi);
    s.a += (h / 6.0) * (k1.a + 2 * k2.a + 2 * k3.a + k4.a);
    s.g += (h / 6.0) * (k1.g + 2 * k2.g + 2 * k3.g + k4.g);
  }

  void build_table() {
    // step chosen so the RK4 cumulative error sits well below quad_tol;
    // halving quad_tol refines the grid
    const double len = r_edge();
    const double per_unit = 4000.0 * std::pow(1e-9 / std::min(quad_tol_, 1e-6), 0.25);
    n_ = std::max<long>(2048, static_cast<long>(len * per_unit));
    h_ = len / static_cast<double>(n_);
    table_.resize(n_ + 1);
    table_[0] = State{};
    for (long i = 0; i < n_; ++i) {
      State s = table_[i];
      rk4_step(s, i * h_, h_);
      table_[i + 1] = s;
    }
    edge_ = table_[n_];
    a_inf_ = edge_.a;
    psi_inf_ = psi(r_edge());
    if (a_inf_ <= 0.0)
      throw InvalidInput("lyapunov: degenerate normalizer (R + eps too small)");
    f_edge_ = edge_.big_psi - edge_.g / (2.0 * a_inf_);
  }

  State eval(double r) const {
    if (r < 0.0) throw InvalidInput("lyapunov: r must be >= 0");
    if (r >= r_edge()) return edge_;
    const long i = std::min<long>(static_cast<long>(r / h_), n_ - 1);
    State s = table_[i];
    const double rem = r - i * h_;
    if (rem > 1e-300) rk4_step(s, i * h_, rem);
    return s;
  }

  LyapunovParams p_;
  double quad_tol_;
  long n_ = 0;
  double h_ = 0.0;
  std::vector<State> table_;
  State edge_;
  double a_inf_ = 0.0;
  double psi_inf_ = 1.0;
  double f_edge_ = 0.0;
};

// -------------------------------------------------------------------------
// Certified property checks
// -------------------------------------------------------------------------

struct LyapunovReport {
  bool pass = true;
  double worst_margin = 0.0;  // most negative slack over all checks
  long checks = 0;
  long violations = 0;

  void record(double slack, double tol) {
    ++checks;
    worst_margin = std::min(worst_margin, slack);
    if (slack < -tol) {
      ++violations;
      pass = false;
    }
  }
};

// Grid check of the four displayed properties; second derivatives by
// central differences with Richardson extrapolation at h = 1e-4, skipping
// one stencil width around the kinks at R and R+eps.
inline LyapunovReport check_f_properties(const LyapunovFn& fn,
                                         const std::vector<double>& grid,
                                         double tol = 1e-6) {
  const LyapunovParams& p = fn.params();
  LyapunovReport rep;
  const double lower_scale = 0.5 * std::exp(-0.5 * (1.0 + p.eps) * p.l * p.r * p.r);
  const double fd_h = 1e-4;

  auto f_second_fd = [&](double r) {
    // fourth-order central stencil (Richardson-extrapolated second difference)
    const double fm2 = fn.f(r - 2 * fd_h), fm1 = fn.f(r - fd_h), f0 = fn.f(r),
                 fp1 = fn.f(r + fd_h), fp2 = fn.f(r + 2 * fd_h);
    return (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * fd_h * fd_h);
  };
  auto near_kink = [&](double r) {
    return std::abs(r - p.r) <= 3 * fd_h || std::abs(r - (p.r + p.eps)) <= 3 * fd_h ||
           r <= 2 * fd_h;
  };

  for (double r : grid) {
    if (r < 0.0) continue;
    const double fr = fn.f(r);
    const double fpr = fn.f_prime(r);
    // (1) f(r) in [lower_scale * r, r]
    rep.record(fr - lower_scale * r, tol);
    rep.record(r - fr, tol);
    // (2) f'(r) in [lower_scale, 1]
    rep.record(fpr - lower_scale, tol);
    rep.record(1.0 - fpr, tol);
    if (!near_kink(r)) {
      const double fsec = f_second_fd(r);
      // (3) f''(r) in [-4 L^{3/2}, 0]
      rep.record(-fsec, tol);
      rep.record(fsec + 4.0 * std::pow(p.l, 1.5), tol);
      // (4) on [0, R]: f'' + L r f' <= -(2 lower_scale / ((1+eps)^2 R^2)) f
      if (r <= p.r && p.r > 0.0) {
        const double rhs =
            -(2.0 * lower_scale / (sq(1.0 + p.eps) * sq(p.r))) * fr;
        rep.record(rhs - (fsec + p.l * r * fpr), tol);
      }
    }
  }
  return rep;
}

// alpha := min{(m - L_Ric/2)/16, 1/(2 R^2)} * exp(-(q + L_Ric/2) R^2 / 2);
// q + L_Ric/2 < 0 is replaced by q' = -L_Ric/2 (without loss of generality).
inline double mixing_alpha(double m, double l_ric, double q, double radius) {
  if (!(m > l_ric / 2.0))
    throw InvalidInput("mixing_alpha: requires m > L_Ric / 2");
  double qq = q;
  if (qq + l_ric / 2.0 < 0.0) qq = -l_ric / 2.0;
  double branch = (m - l_ric / 2.0) / 16.0;
  if (radius > 0.0) branch = std::min(branch, 1.0 / (2.0 * radius * radius));
  return branch * std::exp(-0.5 * (qq + l_ric / 2.0) * radius * radius);
}

}  // namespace glmc
