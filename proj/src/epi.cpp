#include "qepi/epi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace qepi {

namespace {

double qnan() { return std::numeric_limits<double>::quiet_NaN(); }

GaussianState gaussian_combine(const GaussianState& x, const GaussianState& y,
                               double lambda) {
  if (x.n != y.n) throw DimensionMismatch("gaussian_combine: mode mismatch");
  return GaussianState(
      std::sqrt(lambda) * x.d + std::sqrt(1.0 - lambda) * y.d,
      lambda * x.gamma + (1.0 - lambda) * y.gamma);
}

// S(e^{tL} rho) tabulated on a uniform grid and read back by Catmull-Rom
// interpolation, so the clock ODE does not re-integrate the master equation
// at every stage evaluation.
struct EntropyProfile {
  double horizon = 0.0;
  double step = 0.0;
  std::vector<double> s;

  double entropy(double t) const {
    if (t > horizon + 1e-9) {
      std::ostringstream os;
      os << "blachman_replay: clock " << t
         << " exceeds the truncation-safe horizon " << horizon;
      throw ClockOverflow(os.str());
    }
    t = std::clamp(t, 0.0, horizon);
    const int last = static_cast<int>(s.size()) - 1;
    const int i = std::min(static_cast<int>(t / step), last - 1);
    const double u = t / step - i;
    auto node = [&](int k) {
      // linear-extrapolation ghost nodes at the ends
      if (k < 0) return 2.0 * s[0] - s[1];
      if (k > last) return 2.0 * s[last] - s[last - 1];
      return s[k];
    };
    const double p0 = node(i), p1 = node(i + 1);
    const double m0 = 0.5 * (node(i + 1) - node(i - 1));
    const double m1 = 0.5 * (node(i + 2) - node(i));
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * m0 +
           (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * m1;
  }
};

DensityMatrix evolve_fast(const DensityMatrix& rho, double t,
                          const EvolveOptions& opts) {
  if (rho.space->modes() == 1) return evolve_spectral(rho, t, opts.budget);
  return evolve_ode(rho, t, opts);
}

EntropyProfile make_profile(const DensityMatrix& rho, double horizon,
                            int points, const EvolveOptions& opts) {
  if (points < 4 || horizon <= 0.0) {
    throw DomainError("blachman_replay: bad profile grid");
  }
  EntropyProfile p;
  p.horizon = horizon;
  p.step = horizon / (points - 1);
  p.s.reserve(points);
  DensityMatrix cur = rho;
  p.s.push_back(von_neumann_entropy(cur));
  for (int i = 1; i < points; ++i) {
    cur = evolve_fast(cur, p.step, opts);
    p.s.push_back(von_neumann_entropy(cur));
  }
  return p;
}

}  // namespace

CheckReport gaussian_qepi_prime_check(const GaussianState& x,
                                      const GaussianState& y, double lambda,
                                      double tolerance) {
  const double s_x = gaussian_entropy(x);
  const double s_y = gaussian_entropy(y);
  const double s_out = gaussian_entropy(gaussian_combine(x, y, lambda));
  const double margin = s_out - lambda * s_x - (1.0 - lambda) * s_y;
  std::ostringstream in;
  in << "lambda=" << lambda << " n=" << x.n;
  return make_report("gaussian_qepi_prime", in.str(), margin, tolerance,
                     {{"s_x", s_x}, {"s_y", s_y}, {"s_out", s_out}});
}

CheckReport gaussian_qepi_power_check(const GaussianState& x,
                                      const GaussianState& y,
                                      double tolerance) {
  const double n = x.n;
  const double e_x = std::exp(gaussian_entropy(x) / n);
  const double e_y = std::exp(gaussian_entropy(y) / n);
  const double e_out =
      std::exp(gaussian_entropy(gaussian_combine(x, y, 0.5)) / n);
  const double margin = e_out - 0.5 * e_x - 0.5 * e_y;
  return make_report("gaussian_qepi_power", "lambda=0.5", margin, tolerance,
                     {{"e_x", e_x}, {"e_y", e_y}, {"e_out", e_out}});
}

CheckReport de_bruijn_residual(const DensityMatrix& rho, double t, double h,
                               const EvolveOptions& opts) {
  if (t < 0.05) throw DomainError("de_bruijn_residual: t must be >= 0.05");
  if (h < 1e-3 || h > 5e-2) {
    throw DomainError("de_bruijn_residual: h outside [1e-3, 5e-2]");
  }
  const DensityMatrix rho_t = evolve_ode(rho, t, opts);
  const double s_plus = von_neumann_entropy(evolve_ode(rho, t + h, opts));
  const double s_minus = von_neumann_entropy(evolve_ode(rho, t - h, opts));
  const double rate = (s_plus - s_minus) / (2.0 * h);
  const double fisher_quarter = fisher_total(rho_t) / 4.0;
  const double residual = std::abs(rate - fisher_quarter);
  const double tol_eff = std::max(1e-3 * fisher_quarter, 1e-5);
  std::ostringstream in;
  in << "t=" << t << " h=" << h;
  return make_report("de_bruijn", in.str(), tol_eff - residual, 0.0,
                     {{"entropy_rate", rate},
                      {"fisher_quarter", fisher_quarter},
                      {"residual", residual}});
}

CheckReport qepi_prime_check(const DensityMatrix& rho_x,
                             const DensityMatrix& rho_y, double lambda,
                             double tolerance) {
  const double s_x = von_neumann_entropy(rho_x);
  const double s_y = von_neumann_entropy(rho_y);
  const double s_out = von_neumann_entropy(beamsplitter_combine(
      rho_x, rho_y, lambda, std::numeric_limits<double>::infinity()));
  const double margin = s_out - lambda * s_x - (1.0 - lambda) * s_y;
  std::ostringstream in;
  in << "lambda=" << lambda;
  return make_report("qepi_prime", in.str(), margin, tolerance,
                     {{"s_x", s_x}, {"s_y", s_y}, {"s_out", s_out}});
}

CheckReport qepi_power_check(const DensityMatrix& rho_x,
                             const DensityMatrix& rho_y, double tolerance) {
  const double n = rho_x.space->modes();
  const double e_x = std::exp(von_neumann_entropy(rho_x) / n);
  const double e_y = std::exp(von_neumann_entropy(rho_y) / n);
  const double s_out = von_neumann_entropy(beamsplitter_combine(
      rho_x, rho_y, 0.5, std::numeric_limits<double>::infinity()));
  const double e_out = std::exp(s_out / n);
  const double margin = e_out - 0.5 * e_x - 0.5 * e_y;
  return make_report("qepi_power", "lambda=0.5", margin, tolerance,
                     {{"e_x", e_x}, {"e_y", e_y}, {"e_out", e_out}});
}

CheckReport delta_monotonicity_trace(const DensityMatrix& rho_x,
                                     const DensityMatrix& rho_y, double lambda,
                                     const std::vector<double>& t_grid,
                                     const EvolveOptions& opts,
                                     DeltaTrace* trace_out) {
  if (t_grid.empty() || t_grid.front() < 0.0) {
    throw DomainError("delta_monotonicity_trace: bad grid");
  }
  DensityMatrix x = rho_x;
  DensityMatrix y = rho_y;
  DensityMatrix z = beamsplitter_combine(rho_x, rho_y, lambda,
                                         std::numeric_limits<double>::infinity());
  DeltaTrace trace;
  double t_prev = 0.0;
  for (double t : t_grid) {
    if (t < t_prev) {
      throw DomainError("delta_monotonicity_trace: grid must be increasing");
    }
    const double dt = t - t_prev;
    if (dt > 0.0) {
      // semigroup: advance incrementally between grid points
      x = evolve_ode(x, dt, opts);
      y = evolve_ode(y, dt, opts);
      z = evolve_ode(z, dt, opts);
    }
    t_prev = t;
    const double delta = von_neumann_entropy(z) -
                         lambda * von_neumann_entropy(x) -
                         (1.0 - lambda) * von_neumann_entropy(y);
    trace.t.push_back(t);
    trace.delta.push_back(delta);
  }
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < trace.delta.size(); ++i) {
    min_step = std::min(min_step, trace.delta[i] - trace.delta[i + 1]);
  }
  const double margin = std::min(min_step, trace.delta.back());
  std::ostringstream in;
  in << "lambda=" << lambda << " t_max=" << t_grid.back();
  CheckReport r = make_report("delta_monotonicity", in.str(), margin, 1e-4,
                              {{"delta_0", trace.delta.front()},
                               {"delta_end", trace.delta.back()},
                               {"min_step_decrease", min_step}});
  if (trace_out) *trace_out = std::move(trace);
  return r;
}

CheckReport blachman_replay(const DensityMatrix& rho_x,
                            const DensityMatrix& rho_y,
                            const BlachmanOptions& opts,
                            BlachmanTrace* trace_out) {
  const double n = rho_x.space->modes();
  const DensityMatrix rho_z = beamsplitter_combine(
      rho_x, rho_y, 0.5, std::numeric_limits<double>::infinity());

  const EntropyProfile prof_x =
      make_profile(rho_x, opts.clock_horizon, opts.profile_points, opts.evolve);
  const EntropyProfile prof_y =
      make_profile(rho_y, opts.clock_horizon, opts.profile_points, opts.evolve);
  const EntropyProfile prof_z =
      make_profile(rho_z, opts.clock_horizon, opts.profile_points, opts.evolve);

  auto entropy_power = [&](const EntropyProfile& prof, double clock) {
    return std::exp(prof.entropy(clock) / n);
  };
  auto rhs = [&](const std::array<double, 2>& fg) {
    return std::array<double, 2>{entropy_power(prof_x, fg[0]),
                                 entropy_power(prof_y, fg[1])};
  };

  BlachmanTrace trace;
  auto record = [&](double t, const std::array<double, 2>& fg) {
    const double f = fg[0], g = fg[1], hclk = 0.5 * (f + g);
    const double e_x = entropy_power(prof_x, f);
    const double e_y = entropy_power(prof_y, g);
    const double e_z = entropy_power(prof_z, hclk);
    trace.t.push_back(t);
    trace.F.push_back(f);
    trace.G.push_back(g);
    trace.H.push_back(hclk);
    trace.E_x.push_back(e_x);
    trace.E_y.push_back(e_y);
    trace.E_z.push_back(e_z);
    trace.delta.push_back((e_x + e_y) / (2.0 * e_z));
    double slack = qnan();
    if (opts.record_stam) {
      try {
        const double j_x =
            fisher_total(evolve_fast(rho_x, f, opts.evolve));
        const double j_y =
            fisher_total(evolve_fast(rho_y, g, opts.evolve));
        const double j_z =
            fisher_total(evolve_fast(rho_z, hclk, opts.evolve));
        slack = 2.0 / j_z - 1.0 / j_x - 1.0 / j_y;
      } catch (const RankDeficient&) {
        // pure endpoints at clock 0: divergence-based J is undefined
      }
    }
    trace.stam_slack.push_back(slack);
  };

  // Adaptive RK45 (Dormand-Prince) on the two clocks, with grid snapshots.
  static const double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
       -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double b5[7] = {35.0 / 384,     0.0,           500.0 / 1113,
                               125.0 / 192,    -2187.0 / 6784, 11.0 / 84,
                               0.0};
  static const double b4[7] = {5179.0 / 57600, 0.0,
                               7571.0 / 16695, 393.0 / 640,
                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  std::array<double, 2> fg{0.0, 0.0};
  record(0.0, fg);
  const int intervals = opts.grid_points - 1;
  double t = 0.0;
  for (int seg = 0; seg < intervals; ++seg) {
    const double t_target = opts.t_max * (seg + 1) / intervals;
    double h = (t_target - t) / 2.0;
    while (t < t_target - 1e-12) {
      h = std::min(h, t_target - t);
      std::array<double, 2> k[7];
      k[0] = rhs(fg);
      for (int s = 1; s < 7; ++s) {
        std::array<double, 2> ys = fg;
        for (int j = 0; j < s; ++j) {
          for (int c = 0; c < 2; ++c) ys[c] += h * a[s][j] * k[j][c];
        }
        k[s] = rhs(ys);
      }
      std::array<double, 2> y5 = fg;
      double err = 0.0;
      for (int s = 0; s < 7; ++s) {
        for (int c = 0; c < 2; ++c) {
          y5[c] += h * b5[s] * k[s][c];
          err += std::abs(h * (b5[s] - b4[s]) * k[s][c]);
        }
      }
      if (err <= opts.ode_tol) {
        fg = y5;
        t += h;
      }
      const double scale =
          0.9 * std::pow(opts.ode_tol / std::max(err, 1e-300), 0.2);
      h *= std::clamp(scale, 0.2, 5.0);
      if (h < 1e-10) {
        throw StiffnessFailure("blachman_replay: clock step collapsed");
      }
    }
    record(t_target, fg);
  }

  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < trace.delta.size(); ++i) {
    min_step = std::min(min_step, trace.delta[i + 1] - trace.delta[i]);
  }
  // delta is nondecreasing with limit 1, so delta <= 1 throughout and in
  // particular delta(0) <= 1 is the entropy power inequality at lambda = 1/2.
  const double margin = std::min(min_step, 1.0 - trace.delta.back());
  std::ostringstream in;
  in << "t_max=" << opts.t_max << " grid_points=" << opts.grid_points;
  CheckReport r = make_report("blachman_replay", in.str(), margin, 1e-4,
                              {{"delta_0", trace.delta.front()},
                               {"delta_end", trace.delta.back()},
                               {"F_end", trace.F.back()},
                               {"G_end", trace.G.back()},
                               {"min_step_increase", min_step}});
  if (trace_out) *trace_out = std::move(trace);
  return r;
}

}  // namespace qepi
