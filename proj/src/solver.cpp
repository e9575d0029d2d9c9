#include "anigraph/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anigraph/error.hpp"

namespace anigraph {

void SolverConfig::validate() const {
  if (max_iters < 0) throw DomainError("max_iters must be nonnegative");
  if (!(tol_rel >= 0.0)) throw DomainError("tol_rel must be nonnegative");
  if (stagnation_window < 1) throw DomainError("stagnation_window must be positive");
  if (!(tau > 0.0) || !(sigma_step > 0.0)) throw DomainError("step sizes must be positive");
  if (4.0 * tau * sigma_step > 1.0 + 1e-12) throw DomainError("step sizes violate 4 tau sigma <= 1");
  if (!(over_relaxation >= 0.0 && over_relaxation <= 1.0)) {
    throw DomainError("over_relaxation must lie in [0, 1]");
  }
}

double prox_fidelity(double v, double g, double w, double p, double tau) {
  const double d = v - g;
  const double tw = tau * w;
  if (tw <= 0.0 || d == 0.0) return v;
  if (p == 1.0) {
    const double ad = std::abs(d);
    return ad <= tw ? g : v - std::copysign(tw, d);
  }
  if (p == 2.0) return (v + 2.0 * tw * g) / (1.0 + 2.0 * tw);
  // distance t from g solves t + tw p t^(p-1) = |d| on [0, |d|]
  const double ad = std::abs(d);
  double lo = 0.0;
  double hi = ad;
  double t = ad;
  for (int it = 0; it < 200; ++it) {
    const double r = t - ad + tw * p * std::pow(t, p - 1.0);
    if (std::abs(r) <= 1e-12 * std::max(1.0, ad)) break;
    if (r > 0.0) hi = t; else lo = t;
    const double dr = 1.0 + tw * p * (p - 1.0) * std::pow(t, p - 2.0);
    double next = t - r / dr;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (next == t) break;
    t = next;
  }
  return g + std::copysign(t, d);
}

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

namespace {

struct LevelState {
  std::vector<double> u;
  std::vector<Vec2> dual;
};

// One run of the primal-dual iteration on a single grid from a given state.
void iterate(const Anisotropy& aniso, const Grid& grid, std::span<const double> g, double p,
             const SolverConfig& cfg, LevelState& st, SolveReport& rep, bool track_best) {
  const std::size_t nn = g.size();
  const std::size_t ne = nn - 1;
  const double h = grid.h();
  const double tau = cfg.tau / h;
  const double sig = cfg.sigma_step * h;
  const double theta = cfg.over_relaxation;
  const auto w = fidelity_weights(grid);
  EnergyEvaluator eval_energy(aniso, grid, g, p);

  std::vector<double>& u = st.u;
  std::vector<Vec2>& dual = st.dual;
  std::vector<double> ubar = u;
  std::vector<double> prev(nn);
  std::vector<double> history(static_cast<std::size_t>(cfg.stagnation_window) + 1, 0.0);
  const long base = rep.iterations;
  rep.converged = false;
  long it = 0;
  for (; it < cfg.max_iters; ++it) {
    for (std::size_t i = 0; i < ne; ++i) {
      const Vec2 y = dual[i] + Vec2{ubar[i] - ubar[i + 1], h} * sig;
      dual[i] = aniso.project(y);
    }
    prev = u;
    for (std::size_t j = 0; j < nn; ++j) {
      double kt = 0.0;
      if (j < ne) kt += dual[j].x;
      if (j > 0) kt -= dual[j - 1].x;
      u[j] = prox_fidelity(u[j] - tau * kt, g[j], w[j], p, tau);
    }
    for (std::size_t j = 0; j < nn; ++j) ubar[j] = u[j] + theta * (u[j] - prev[j]);

    if (!all_finite(u) || !std::all_of(dual.begin(), dual.end(), [](Vec2 d) {
          return std::isfinite(d.x) && std::isfinite(d.y);
        })) {
      throw DivergenceError("non-finite iterate", base + it + 1);
    }

    const EnergyBreakdown e = eval_energy(u);
    if (track_best && e.total < rep.energy.total) {
      rep.profile.values = u;
      rep.energy = e;
    }
    const long k = it + 1;
    if (track_best && cfg.trace_stride > 0 && k % cfg.trace_stride == 0) {
      rep.energy_trace.emplace_back(base + k, e.total);
    }
    const std::size_t slots = static_cast<std::size_t>(cfg.stagnation_window) + 1;
    history[static_cast<std::size_t>(k) % slots] = e.total;
    if (k > cfg.stagnation_window) {
      const double old = history[static_cast<std::size_t>(k - cfg.stagnation_window) % slots];
      rep.final_stagnation = std::abs(e.total - old) / std::max(std::abs(e.total), 1e-300);
      if (rep.final_stagnation < cfg.tol_rel) {
        rep.converged = true;
        ++it;
        break;
      }
    }
  }
  rep.iterations = base + it;
  // projections keep every iterate feasible up to rounding; sample the final field
  double violation = rep.dual_feasibility_max_violation;
  for (const Vec2& d : dual) violation = std::max(violation, aniso.eval(d) - 1.0);
  rep.dual_feasibility_max_violation = violation;
}

}  // namespace

SolveReport solve(const Anisotropy& aniso, const Grid& grid, std::span<const double> g, double p,
                  const SolverConfig& cfg) {
  if (!(p >= 1.0)) throw DomainError("fidelity exponent p must be at least 1");
  if (g.size() != static_cast<std::size_t>(grid.n_nodes())) throw DomainError("datum length does not match the grid");
  cfg.validate();
  const std::size_t nn = g.size();

  // nested grids by halving, coarsest first
  std::vector<Grid> grids{grid};
  std::vector<std::vector<double>> data{std::vector<double>(g.begin(), g.end())};
  if (cfg.coarsest_cells > 0) {
    while (grids.back().n_cells() % 2 == 0 && grids.back().n_cells() / 2 >= cfg.coarsest_cells) {
      const Grid& fine = grids.back();
      std::vector<double> gc(static_cast<std::size_t>(fine.n_cells() / 2 + 1));
      for (std::size_t j = 0; j < gc.size(); ++j) gc[j] = data.back()[2 * j];
      grids.emplace_back(fine.x_min(), fine.x_max(), fine.n_cells() / 2);
      data.push_back(std::move(gc));
    }
  }

  SolveReport rep{Profile(grid, std::vector<double>(g.begin(), g.end())), {}, 0, false, 0.0, 0.0, {}};
  rep.energy = energy(aniso, rep.profile, g, p);
  {
    Profile zero(grid, std::vector<double>(nn, 0.0));
    const EnergyBreakdown ez = energy(aniso, zero, g, p);
    if (ez.total < rep.energy.total) {
      rep.profile = std::move(zero);
      rep.energy = ez;
    }
  }

  LevelState st{data.back(), std::vector<Vec2>(data.back().size() - 1, Vec2{0.0, 0.0})};
  for (std::size_t lvl = grids.size(); lvl-- > 0;) {
    if (lvl + 1 < grids.size()) {
      // prolongate: linear interpolation of u, edge-wise copy of the dual field
      const std::size_t nc = st.u.size();
      LevelState fine{std::vector<double>(2 * nc - 1), std::vector<Vec2>(2 * (nc - 1))};
      for (std::size_t j = 0; j < nc; ++j) fine.u[2 * j] = st.u[j];
      for (std::size_t j = 0; j + 1 < nc; ++j) {
        fine.u[2 * j + 1] = 0.5 * (st.u[j] + st.u[j + 1]);
        fine.dual[2 * j] = st.dual[j];
        fine.dual[2 * j + 1] = st.dual[j];
      }
      st = std::move(fine);
    }
    iterate(aniso, grids[lvl], data[lvl], p, cfg, st, rep, lvl == 0);
  }
  return rep;
}

SolveReport solve(const Problem& problem) {
  const Grid grid = problem.grid();
  const auto g = sample_g(problem.g, grid);
  return solve(problem.aniso, grid, g, problem.p, problem.solver);
}

// ---------------------------------------------------------------------------
// Brute-force oracle

namespace {

template <class F>
double golden_min(F&& f, double a, double b, int iters = 100) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < iters && b - a > 1e-15; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

}  // namespace

Profile brute_force_oracle(const Anisotropy& aniso, const Grid& grid, std::span<const double> g, double p,
                           int levels) {
  if (grid.n_cells() > 4) throw SizeError("brute_force_oracle supports at most four cells");
  if (levels < 21) throw DomainError("brute_force_oracle needs at least 21 levels");
  if (g.size() != static_cast<std::size_t>(grid.n_nodes())) throw DomainError("datum length does not match the grid");
  const std::size_t nn = g.size();
  double ginf = 0.0;
  for (double v : g) ginf = std::max(ginf, std::abs(v));
  if (ginf == 0.0) return Profile(grid, std::vector<double>(nn, 0.0));

  // direct evaluation of the discrete functional, without allocation
  const double h = grid.h();
  const auto w = fidelity_weights(grid);
  EnergyEvaluator eval_energy(aniso, grid, g, p);
  auto total = [&](const std::vector<double>& v) {
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < nn; ++i) e += aniso.eval_dual({v[i] - v[i + 1], h});
    for (std::size_t j = 0; j < nn; ++j) {
      const double d = std::abs(v[j] - g[j]);
      e += w[j] * (p == 1.0 ? d : p == 2.0 ? d * d : std::pow(d, p));
    }
    return e;
  };

  // exhaustive pass over the quantized window
  std::vector<int> idx(nn, 0);
  std::vector<double> cur(nn, -ginf);
  std::vector<double> best = cur;
  double best_e = std::numeric_limits<double>::infinity();
  auto level = [&](int k) { return -ginf + 2.0 * ginf * k / (levels - 1); };
  while (true) {
    for (std::size_t j = 0; j < nn; ++j) cur[j] = level(idx[j]);
    const double e = total(cur);
    if (e < best_e) {
      best_e = e;
      best = cur;
    }
    std::size_t j = 0;
    while (j < nn && ++idx[j] == levels) idx[j++] = 0;
    if (j == nn) break;
  }

  // refinement along coordinates and along shifts of contiguous blocks
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t len = 1; len <= nn; ++len) {
    for (std::size_t s = 0; s + len <= nn; ++s) blocks.emplace_back(s, s + len);
  }
  for (int sweep = 0; sweep < 20; ++sweep) {
    for (auto [b0, b1] : blocks) {
      double lo_v = std::numeric_limits<double>::infinity();
      double hi_v = -lo_v;
      for (std::size_t j = b0; j < b1; ++j) {
        lo_v = std::min(lo_v, best[j]);
        hi_v = std::max(hi_v, best[j]);
      }
      auto shifted = [&](double t) {
        std::vector<double> v = best;
        for (std::size_t j = b0; j < b1; ++j) v[j] += t;
        return v;
      };
      const double t = golden_min([&](double s) { return total(shifted(s)); }, -ginf - lo_v, ginf - hi_v);
      const std::vector<double> cand = shifted(t);
      const double e = total(cand);
      if (e < best_e) {
        best_e = e;
        best = cand;
      }
    }
  }
  return Profile(grid, best);
}

}  // namespace anigraph
