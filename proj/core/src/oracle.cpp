#include "lamcoal/oracle.hpp"

#include <cmath>
#include <map>
#include <string>

#include "lamcoal/error.hpp"
#include "lamcoal/numerics.hpp"

namespace lamcoal {

DpTable expectation_dp(const RateTable& table, int n, double tail) {
  if (n < 1) throw InvalidInput("oracle needs n >= 1");
  if (n > table.bmax()) {
    throw InvalidInput("n=" + std::to_string(n) + " exceeds rate table bmax " +
                       std::to_string(table.bmax()));
  }
  DpTable dp;
  dp.bmax = n;
  const auto size = static_cast<std::size_t>(n) + 1;
  dp.length.assign(size, 0.0);
  dp.mergers.assign(size, 0.0);
  dp.time.assign(size, 0.0);
  for (int b = 2; b <= n; ++b) {
    const double l = table.lambda(b);
    const auto row = table.pmf_row(b, tail);
    CompensatedSum len(b / l);
    CompensatedSum mer(1.0);
    CompensatedSum tim(1.0 / l);
    for (std::size_t k = 2; k < row.size(); ++k) {
      const auto next = static_cast<std::size_t>(b) - k + 1;
      len += row[k] * dp.length[next];
      mer += row[k] * dp.mergers[next];
      tim += row[k] * dp.time[next];
    }
    dp.length[b] = len.value();
    dp.mergers[b] = mer.value();
    dp.time[b] = tim.value();
  }
  return dp;
}

double expected_total_length_dp(const RateTable& table, int n) {
  return expectation_dp(table, n).length[n];
}
double expected_merger_count_dp(const RateTable& table, int n) {
  return expectation_dp(table, n).mergers[n];
}
double expected_absorption_time_dp(const RateTable& table, int n) {
  return expectation_dp(table, n).time[n];
}

namespace {

// Profile: counts[a - 1] = number of blocks of size a.
using Profile = std::vector<int>;

// Visits every way of taking x_a blocks of each size with Σ x_a = k, passing
// the hypergeometric weight Π C(c_a, x_a) in log form.
template <class Visit>
void choose(const Profile& p, std::size_t a, int k, Profile& taken, double log_weight,
            const Visit& visit) {
  if (a == p.size()) {
    if (k == 0) visit(taken, log_weight);
    return;
  }
  const int hi = std::min(k, p[a]);
  for (int x = 0; x <= hi; ++x) {
    taken[a] = x;
    choose(p, a + 1, k - x, taken, log_weight + log_binomial(p[a], x), visit);
  }
  taken[a] = 0;
}

}  // namespace

EnumTable exhaustive_expectations(const RateTable& table, int n) {
  if (n < 2 || n > 8) throw InvalidInput("exhaustive enumeration supports 2 <= n <= 8");
  if (n > table.bmax()) throw InvalidInput("n exceeds rate table bmax");
  EnumTable out;
  out.n = n;
  std::vector<CompensatedSum> order(static_cast<std::size_t>(n - 1));
  // Level b holds the probability of ever visiting each profile with b blocks.
  std::vector<std::map<Profile, double>> level(static_cast<std::size_t>(n) + 1);
  Profile start(static_cast<std::size_t>(n), 0);
  start[0] = n;
  level[n][start] = 1.0;
  for (int b = n; b >= 2; --b) {
    const double sojourn = 1.0 / table.lambda(b);
    for (const auto& [profile, prob] : level[b]) {
      ++out.profiles;
      for (std::size_t a = 0; a + 1 < profile.size(); ++a) {
        order[a] += prob * sojourn * profile[a];
      }
      for (int k = 2; k <= b; ++k) {
        const double pk = table.pmf(b, k);
        if (pk == 0.0) continue;
        const double log_total = log_binomial(b, k);
        Profile taken(profile.size(), 0);
        choose(profile, 0, k, taken, 0.0, [&](const Profile& t, double log_w) {
          Profile next = profile;
          int merged_size = 0;
          for (std::size_t a = 0; a < t.size(); ++a) {
            next[a] -= t[a];
            merged_size += t[a] * static_cast<int>(a + 1);
          }
          ++next[static_cast<std::size_t>(merged_size - 1)];
          level[static_cast<std::size_t>(b - k + 1)][next] +=
              prob * pk * std::exp(log_w - log_total);
        });
      }
    }
    level[b].clear();
  }
  out.order.resize(order.size());
  CompensatedSum total;
  for (std::size_t a = 0; a < order.size(); ++a) {
    out.order[a] = order[a].value();
    total += out.order[a];
  }
  out.total = total.value();
  out.external = out.order[0];
  out.internal = out.total - out.external;
  return out;
}

}  // namespace lamcoal
