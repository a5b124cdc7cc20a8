#include "ottoforge/validate.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace ottoforge {

namespace {

std::vector<int> reachable_from(const std::vector<std::vector<bool>>& adj, int start) {
  const int d = static_cast<int>(adj.size());
  std::vector<bool> seen(d, false);
  std::queue<int> q;
  q.push(start);
  seen[start] = true;
  while (!q.empty()) {
    int n = q.front();
    q.pop();
    for (int m = 0; m < d; ++m) {
      if (adj[n][m] && !seen[m]) {
        seen[m] = true;
        q.push(m);
      }
    }
  }
  std::vector<int> missing;
  for (int n = 0; n < d; ++n) {
    if (!seen[n]) missing.push_back(n);
  }
  return missing;
}

}  // namespace

ModelDiagnostics validate_model(const ThermalModel& model, const std::vector<Leg>& legs) {
  model.validate();
  const int d = model.dimension;
  ModelDiagnostics diag;
  std::vector<std::vector<bool>> fwd(d, std::vector<bool>(d, false));
  std::vector<std::vector<bool>> rev(d, std::vector<bool>(d, false));

  for (const Leg& leg : legs) {
    const Spectrum sp = model.spectrum_for(leg.control);
    const BathModel& bath = model.baths[leg.bath];

    if (bath.family == BathFamily::FixedRate) {
      // Uniform contraction toward gibbs: connects every pair of levels.
      const PauliGenerator gen = build_generator(sp, bath);
      diag.max_rate = std::max(diag.max_rate, gen.full.cwiseAbs().maxCoeff());
      diag.column_sum_residual =
          std::max(diag.column_sum_residual, gen.full.colwise().sum().cwiseAbs().maxCoeff());
      for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
          if (n != m) fwd[n][m] = rev[m][n] = true;
        }
      }
      continue;
    }

    const RateMatrix rm = build_rate_matrix(sp, bath);
    for (int n = 0; n < d; ++n) {
      for (int m = 0; m < d; ++m) {
        if (n == m) continue;
        const double g_nm = rm.gamma(n, m);
        const double g_mn = rm.gamma(m, n);
        diag.max_rate = std::max(diag.max_rate, g_nm);
        const double db = std::exp(bath.beta * (sp.energies[n] - sp.energies[m]));
        // compare against the derived direction only where both are representable
        if (std::isfinite(db)) {
          diag.detailed_balance_residual =
              std::max(diag.detailed_balance_residual, std::abs(g_nm - db * g_mn));
        }
        if (g_nm > 0.0) {
          fwd[n][m] = true;
          rev[m][n] = true;
        }
      }
    }
    const PauliGenerator gen = generator_from_rates(rm, gibbs_populations(bath.beta, sp));
    diag.column_sum_residual =
        std::max(diag.column_sum_residual, gen.full.colwise().sum().cwiseAbs().maxCoeff());
  }

  const std::vector<int> fwd_missing = reachable_from(fwd, 0);
  const std::vector<int> rev_missing = reachable_from(rev, 0);
  diag.unreachable_levels = fwd_missing;
  for (int n : rev_missing) {
    if (std::find(diag.unreachable_levels.begin(), diag.unreachable_levels.end(), n) ==
        diag.unreachable_levels.end()) {
      diag.unreachable_levels.push_back(n);
    }
  }
  std::sort(diag.unreachable_levels.begin(), diag.unreachable_levels.end());
  diag.strongly_connected = diag.unreachable_levels.empty();
  return diag;
}

std::string ModelDiagnostics::summary() const {
  std::ostringstream os;
  os << "detailed-balance residual " << detailed_balance_residual << ", column-sum residual "
     << column_sum_residual << ", union transition graph "
     << (strongly_connected ? "strongly connected" : "NOT strongly connected");
  if (!unreachable_levels.empty()) {
    os << " (levels not mutually reachable from level 1:";
    for (int n : unreachable_levels) os << ' ' << (n + 1);
    os << ')';
  }
  return os.str();
}

}  // namespace ottoforge
