#include "incfl/routing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "incfl/errors.hpp"
#include "incfl/rng.hpp"
#include "incfl/simplex.hpp"

namespace incfl {

namespace {

// Capacity of an association column: edge fronthaul, or the cloud's direct
// uplink for the extra column.
double column_capacity(const Topology& topo, int column) {
  return column < topo.num_edges() ? topo.fronthaul_bps[column]
                                   : topo.cloud_uplink_bps;
}

void check_instance(const RoutingInstance& inst) {
  if (inst.selected_users.empty())
    throw InvalidInputError("routing: no selected users");
  for (int u : inst.selected_users)
    if (u < 0 || u >= inst.topo.num_users())
      throw InvalidInputError("routing: selected user " + std::to_string(u) +
                              " not in topology");
  if (inst.size.bits <= 0.0) throw InvalidInputError("routing: nonpositive model size");
}

// Columns user u may associate with, ascending, cloud column last.
std::vector<int> allowed_columns(const RoutingInstance& inst, int user) {
  const Topology& topo = inst.topo;
  std::vector<int> cols;
  for (int m = 0; m < topo.num_edges(); ++m)
    if (topo.reachable[user][m]) cols.push_back(m);
  if (topo.allow_direct_cloud) cols.push_back(topo.num_edges());
  return cols;
}

}  // namespace

RoutingInstance make_instance(Topology topo, ModelSize size) {
  RoutingInstance inst;
  inst.selected_users.resize(topo.num_users());
  std::iota(inst.selected_users.begin(), inst.selected_users.end(), 0);
  inst.topo = std::move(topo);
  inst.size = size;
  return inst;
}

RateAllocation recover_rates(const Association& assoc, const Topology& topo) {
  if (assoc.num_edges != topo.num_edges())
    throw InvalidInputError("recover_rates: association/topology mismatch");
  RateAllocation rates;
  rates.rows = assoc.rows();
  rates.cols = assoc.num_columns();
  rates.bps.assign(static_cast<std::size_t>(rates.rows) * rates.cols, 0.0);

  std::vector<int> counts = assoc.column_counts();
  for (int r = 0; r < assoc.rows(); ++r) {
    const int c = assoc.column_of[r];
    rates.at(r, c) = column_capacity(topo, c) / static_cast<double>(counts[c]);
  }
  return rates;
}

double p2_objective(const Association& assoc, const RoutingInstance& instance) {
  const Topology& topo = instance.topo;
  if (assoc.num_edges != topo.num_edges())
    throw InvalidInputError("p2_objective: association/topology mismatch");
  if (assoc.rows() != instance.rows())
    throw InvalidInputError("p2_objective: association row count mismatch");

  const double D = instance.size.bits;
  std::vector<int> counts = assoc.column_counts();
  double worst = 0.0;
  for (int c = 0; c < assoc.num_columns(); ++c) {
    if (counts[c] == 0) continue;
    // Evaluated through the fair-share rate so the value is identical to the
    // total_latency(recover_rates(...)) code path.
    const double rate = column_capacity(topo, c) / static_cast<double>(counts[c]);
    double lat = D / rate;
    if (c < topo.num_edges()) lat += backhaul_latency_ina(c, assoc, instance.size, topo);
    worst = std::max(worst, lat);
  }
  return worst;
}

FractionalSolution solve_lp_p4(const RoutingInstance& instance) {
  check_instance(instance);
  const Topology& topo = instance.topo;
  const int M = topo.num_edges();
  const int K = instance.rows();
  if (M + 1 > 62) throw SizeGuardError("solve_lp_p4: too many edge nodes");

  // Users with the same set of allowed columns are interchangeable; the
  // relaxation is solved over these groups and expanded afterwards. This
  // keeps the program tiny and, crucially, lets the expansion give all but a
  // handful of users integral rows.
  std::map<std::uint64_t, std::vector<int>> groups;  // mask -> matrix rows
  for (int r = 0; r < K; ++r) {
    const int u = instance.selected_users[r];
    std::uint64_t mask = 0;
    for (int m = 0; m < M; ++m)
      if (topo.reachable[u][m]) mask |= 1ull << m;
    if (topo.allow_direct_cloud) mask |= 1ull << M;
    if (mask == 0)
      throw InfeasibleError("user " + std::to_string(u) +
                            " cannot reach any edge node");
    groups[mask].push_back(r);
  }

  std::uint64_t edge_union = 0;
  for (const auto& [mask, rows] : groups) edge_union |= mask;
  edge_union &= (1ull << M) - 1;

  std::vector<int> cand_edges;
  for (int m = 0; m < M; ++m)
    if (edge_union & (1ull << m)) cand_edges.push_back(m);
  const int E = static_cast<int>(cand_edges.size());
  if (E > 20) throw SizeGuardError("solve_lp_p4: too many edge nodes to decompose");

  // Variable layout (fixed across subproblems): per group, its allowed
  // columns ascending; the latency bound y last.
  struct GroupVars {
    std::uint64_t mask;
    std::vector<int> rows;
    std::vector<int> cols;
    int offset;
  };
  std::vector<GroupVars> gv;
  int nvars = 0;
  for (const auto& [mask, rows] : groups) {
    GroupVars g;
    g.mask = mask;
    g.rows = rows;
    for (int c = 0; c <= M; ++c)
      if (mask & (1ull << c)) g.cols.push_back(c);
    g.offset = nvars;
    nvars += static_cast<int>(g.cols.size());
    gv.push_back(std::move(g));
  }
  const int y_var = nvars++;

  const double D = instance.size.bits;
  std::vector<double> fr_coef(M + 1, 0.0);  // D / capacity per column
  std::vector<double> bk_coef(M, 0.0);      // D / backhaul per edge
  for (int m = 0; m < M; ++m) {
    fr_coef[m] = D / topo.fronthaul_bps[m];
    bk_coef[m] = D / topo.backhaul_bps[m];
  }
  if (topo.allow_direct_cloud) fr_coef[M] = D / topo.cloud_uplink_bps;

  // The edge-to-cloud term min{D/B_bk, D l/B_bk} is piecewise linear in the
  // edge load l with a kink at l = 1. Each edge is pinned to one side of the
  // kink and every combination is solved as a plain LP; the best of the
  // exact subproblems is the exact relaxation optimum.
  LpResult best;
  best.status = LpStatus::Infeasible;
  best.objective = std::numeric_limits<double>::infinity();

  for (std::uint32_t subset = 0; subset < (1u << E); ++subset) {
    if (std::popcount(subset) > K) continue;

    LpProblem lp;
    lp.num_vars = nvars;
    lp.objective.assign(nvars, 0.0);
    lp.objective[y_var] = 1.0;

    auto blank_row = [&](Relation rel, double rhs) {
      LpRow row;
      row.coeff.assign(nvars, 0.0);
      row.rel = rel;
      row.rhs = rhs;
      return row;
    };
    auto add_load = [&](LpRow& row, int column, double coef) {
      for (const GroupVars& g : gv)
        for (std::size_t i = 0; i < g.cols.size(); ++i)
          if (g.cols[i] == column) row.coeff[g.offset + static_cast<int>(i)] += coef;
    };

    for (const GroupVars& g : gv) {
      LpRow row = blank_row(Relation::Equal, static_cast<double>(g.rows.size()));
      for (std::size_t i = 0; i < g.cols.size(); ++i)
        row.coeff[g.offset + static_cast<int>(i)] = 1.0;
      lp.rows.push_back(std::move(row));
    }
    for (int e = 0; e < E; ++e) {
      const int m = cand_edges[e];
      if (subset & (1u << e)) {
        // Loaded side: l >= 1, edge-to-cloud term is the single-model time.
        LpRow lat = blank_row(Relation::LessEq, -bk_coef[m]);
        add_load(lat, m, fr_coef[m]);
        lat.coeff[y_var] = -1.0;
        lp.rows.push_back(std::move(lat));
        LpRow lo = blank_row(Relation::GreaterEq, 1.0);
        add_load(lo, m, 1.0);
        lp.rows.push_back(std::move(lo));
      } else {
        // Light side: l <= 1, edge-to-cloud term scales with the load.
        LpRow lat = blank_row(Relation::LessEq, 0.0);
        add_load(lat, m, fr_coef[m] + bk_coef[m]);
        lat.coeff[y_var] = -1.0;
        lp.rows.push_back(std::move(lat));
        LpRow hi = blank_row(Relation::LessEq, 1.0);
        add_load(hi, m, 1.0);
        lp.rows.push_back(std::move(hi));
      }
    }
    if (topo.allow_direct_cloud) {
      LpRow lat = blank_row(Relation::LessEq, 0.0);
      add_load(lat, M, fr_coef[M]);
      lat.coeff[y_var] = -1.0;
      lp.rows.push_back(std::move(lat));
    }

    LpResult res = solve_lp(lp);
    if (res.status != LpStatus::Optimal) continue;
    if (res.objective < best.objective - 1e-12) best = std::move(res);
  }
  if (best.status != LpStatus::Optimal)
    throw InfeasibleError("solve_lp_p4: relaxation infeasible");

  FractionalSolution frac;
  frac.num_edges = M;
  frac.has_cloud_column = topo.allow_direct_cloud;
  frac.latency_bound = best.objective;
  const int C = frac.num_columns();
  frac.assoc.assign(static_cast<std::size_t>(K) * C, 0.0);

  // Expand each group's column masses to per-user rows by walking the users
  // along the concatenated column segments. All but at most one user per
  // segment boundary gets a fully integral row.
  std::vector<double> load(C, 0.0);
  for (const GroupVars& g : gv) {
    const int n = static_cast<int>(g.rows.size());
    std::vector<double> mass(g.cols.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < g.cols.size(); ++i) {
      mass[i] = std::max(0.0, best.x[g.offset + static_cast<int>(i)]);
      total += mass[i];
    }
    if (total <= 0.0) {
      mass[0] = total = static_cast<double>(n);
    } else {
      const double fix = static_cast<double>(n) / total;
      for (double& v : mass) v *= fix;
    }
    std::size_t ci = 0;
    double consumed = 0.0;
    for (int i = 0; i < n; ++i) {
      double* row = &frac.assoc[static_cast<std::size_t>(g.rows[i]) * C];
      double need = 1.0;
      while (need > 1e-12 && ci < mass.size()) {
        const double take = std::min(need, mass[ci] - consumed);
        if (take > 0.0) {
          row[g.cols[ci]] += take;
          need -= take;
          consumed += take;
        }
        if (mass[ci] - consumed <= 1e-12) {
          ++ci;
          consumed = 0.0;
        }
      }
      if (need > 0.0) row[g.cols.back()] += need;  // float dust
      // Renormalize the row exactly.
      double sum = 0.0;
      for (int c = 0; c < C; ++c) sum += row[c];
      for (int c = 0; c < C; ++c) row[c] /= sum;
      for (int c = 0; c < C; ++c) load[c] += row[c];
    }
  }

  frac.edge_to_cloud_s.assign(M, 0.0);
  for (int m = 0; m < M; ++m)
    frac.edge_to_cloud_s[m] = bk_coef[m] * std::min(1.0, load[m]);
  return frac;
}

std::uint64_t derive_trial_seed(std::uint64_t seed, std::uint64_t index) {
  return mix_seed(seed, index);
}

RoutingSolution randomized_round(const FractionalSolution& frac,
                                 const RoutingInstance& instance,
                                 std::uint64_t rng_seed) {
  check_instance(instance);
  if (frac.rows() != instance.rows())
    throw InvalidInputError("randomized_round: row count mismatch");
  if (frac.num_edges != instance.topo.num_edges())
    throw InvalidInputError("randomized_round: edge count mismatch");

  const int K = frac.rows();
  const int C = frac.num_columns();

  Association assoc;
  assoc.num_edges = frac.num_edges;
  assoc.has_cloud_column = frac.has_cloud_column;
  assoc.column_of.assign(K, -1);

  // Row totals may drift from 1 by solver epsilon; sample against the total.
  std::vector<double> totals(K, 0.0);
  bool all_binary = true;
  for (int r = 0; r < K; ++r) {
    double total = 0.0, peak = 0.0;
    int peak_col = -1;
    for (int c = 0; c < C; ++c) {
      const double v = frac.at(r, c);
      if (v < 0.0)
        throw InvalidInputError("randomized_round: negative probability in row " +
                                std::to_string(r));
      total += v;
      if (v > peak) {
        peak = v;
        peak_col = c;
      }
    }
    if (total <= 0.0)
      throw InvalidInputError("randomized_round: row " + std::to_string(r) +
                              " has no probability mass");
    totals[r] = total;
    assoc.column_of[r] = peak_col;
    if (peak < (1.0 - 1e-9) * total) all_binary = false;
  }

  if (!all_binary) {
    std::mt19937_64 rng(rng_seed);
    for (int r = 0; r < K; ++r) {
      const double u = uniform01(rng) * totals[r];
      double cum = 0.0;
      int picked = -1;
      for (int c = 0; c < C; ++c) {
        const double v = frac.at(r, c);
        if (v <= 0.0) continue;
        cum += v;
        picked = c;
        if (u < cum) break;
      }
      assoc.column_of[r] = picked;
    }
  }

  RoutingSolution sol;
  sol.assoc = std::move(assoc);
  sol.rates = recover_rates(sol.assoc, instance.topo);
  sol.objective = p2_objective(sol.assoc, instance);
  sol.uses_ina = true;
  return sol;
}

IncResult solve_inc(const RoutingInstance& instance, std::uint64_t rng_seed,
                    int num_rounding_trials) {
  if (num_rounding_trials < 1)
    throw InvalidInputError("solve_inc: need at least one rounding trial");
  IncResult result;
  result.relaxation = solve_lp_p4(instance);
  for (int t = 0; t < num_rounding_trials; ++t) {
    RoutingSolution sol = randomized_round(result.relaxation, instance,
                                           derive_trial_seed(rng_seed, t));
    if (t == 0 || sol.objective < result.best.objective) result.best = std::move(sol);
  }
  return result;
}

RoutingSolution solve_bruteforce(const RoutingInstance& instance) {
  check_instance(instance);
  const int K = instance.rows();

  std::vector<std::vector<int>> allowed(K);
  double candidates = 1.0;
  for (int r = 0; r < K; ++r) {
    allowed[r] = allowed_columns(instance, instance.selected_users[r]);
    if (allowed[r].empty())
      throw InfeasibleError("user " + std::to_string(instance.selected_users[r]) +
                            " cannot reach any edge node");
    candidates *= static_cast<double>(allowed[r].size());
    if (candidates > 1e7)
      throw SizeGuardError("solve_bruteforce: more than 1e7 candidate associations");
  }

  Association assoc;
  assoc.num_edges = instance.topo.num_edges();
  assoc.has_cloud_column = instance.topo.allow_direct_cloud;
  assoc.column_of.assign(K, 0);

  std::vector<int> idx(K, 0);
  Association best_assoc;
  double best_obj = std::numeric_limits<double>::infinity();
  for (;;) {
    for (int r = 0; r < K; ++r) assoc.column_of[r] = allowed[r][idx[r]];
    const double obj = p2_objective(assoc, instance);
    // Strict improvement only: enumeration order is lexicographic in the
    // assignment vector, so the first minimizer found is the tie-break winner.
    if (obj < best_obj) {
      best_obj = obj;
      best_assoc = assoc;
    }
    int r = K - 1;
    while (r >= 0 && idx[r] + 1 == static_cast<int>(allowed[r].size())) {
      idx[r] = 0;
      --r;
    }
    if (r < 0) break;
    ++idx[r];
  }

  RoutingSolution sol;
  sol.assoc = std::move(best_assoc);
  sol.rates = recover_rates(sol.assoc, instance.topo);
  sol.objective = best_obj;
  sol.uses_ina = true;
  return sol;
}

RoutingSolution assign_only_cloud(const RoutingInstance& instance) {
  check_instance(instance);
  if (!instance.topo.allow_direct_cloud)
    throw InfeasibleError("assign_only_cloud: direct-cloud association disabled");

  RoutingSolution sol;
  sol.assoc.num_edges = instance.topo.num_edges();
  sol.assoc.has_cloud_column = true;
  sol.assoc.column_of.assign(instance.rows(), instance.topo.num_edges());
  sol.rates = recover_rates(sol.assoc, instance.topo);
  sol.objective = p2_objective(sol.assoc, instance);
  sol.uses_ina = false;  // star topology: the cloud aggregates everything itself
  return sol;
}

RoutingSolution assign_nearest_edge(const RoutingInstance& instance) {
  check_instance(instance);
  const Topology& topo = instance.topo;
  if (topo.user_pos.size() != static_cast<std::size_t>(topo.num_users()) ||
      topo.edge_pos.size() != static_cast<std::size_t>(topo.num_edges()))
    throw InvalidInputError("assign_nearest_edge: topology lacks coordinates");

  RoutingSolution sol;
  sol.assoc.num_edges = topo.num_edges();
  sol.assoc.has_cloud_column = false;
  sol.assoc.column_of.assign(instance.rows(), -1);

  for (int r = 0; r < instance.rows(); ++r) {
    const int u = instance.selected_users[r];
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int m = 0; m < topo.num_edges(); ++m) {
      if (!topo.reachable[u][m]) continue;
      const double dx = topo.user_pos[u][0] - topo.edge_pos[m][0];
      const double dy = topo.user_pos[u][1] - topo.edge_pos[m][1];
      const double d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {  // strict: equidistant edges resolve to the lowest index
        best_d2 = d2;
        best = m;
      }
    }
    if (best < 0)
      throw InfeasibleError("user " + std::to_string(u) +
                            " cannot reach any edge node");
    sol.assoc.column_of[r] = best;
  }

  sol.rates = recover_rates(sol.assoc, instance.topo);
  sol.objective =
      total_latency(sol.assoc, sol.rates, instance.size, instance.topo, false).total_s;
  sol.uses_ina = false;
  return sol;
}

double theorem2_bound(double num_users, double y_dagger) {
  if (num_users < 2.0)
    throw InvalidInputError("theorem2_bound: need at least two users");
  if (y_dagger <= 0.0)
    throw InvalidInputError("theorem2_bound: lower bound must be positive");
  return 2.0 * std::log(num_users) / y_dagger + 3.0;
}

}  // namespace incfl
