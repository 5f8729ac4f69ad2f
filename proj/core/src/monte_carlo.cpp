#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "vxl/errors.hpp"
#include "vxl/heatkernel.hpp"

namespace vxl {

DriftField DriftField::uniform(const Vec3& v) {
  return {[v](const Vec3&) { return v; }, v};
}

DriftField DriftField::of(std::function<Vec3(const Vec3&)> f) { return {std::move(f), std::nullopt}; }

namespace {

constexpr double kDriftSlack = 1e-12;

bool bounded(const Vec3& v) {
  return std::abs(v[0]) <= 1.0 + kDriftSlack && std::abs(v[1]) <= 1.0 + kDriftSlack &&
         std::abs(v[2]) <= 1.0 + kDriftSlack;
}

// Cell average over [a, b] of sigma p^beta(sigma xi, delta, sigma x) in x.
double cell_average(const KernelParams& p, double xi, double a, double b, double beta) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double x) { return p.sigma * p_beta(p.sigma * xi, p.delta, p.sigma * x, beta); };
  double sum;
  if (a < xi && xi < b) {
    // |x - xi| has a kink at xi.
    sum = gauss_kronrod<double, 31>::integrate(f, a, xi, 10, 1e-12) +
          gauss_kronrod<double, 31>::integrate(f, xi, b, 10, 1e-12);
  } else {
    sum = gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-12);
  }
  return sum / (b - a);
}

}  // namespace

MonteCarloReport monte_carlo_kernel_check(const KernelParams& params, const Vec3& xi, const DriftField& drift,
                                          std::uint64_t seed, const MonteCarloOptions& options) {
  params.validate();
  if (!drift.field) throw InvalidArgument("drift field is empty");
  if (options.samples < 100000) throw InvalidArgument("Monte Carlo check needs at least 1e5 samples");
  if (options.batch_size < 1 || options.steps < 1 || options.cells_per_axis < 2 || !(options.box_half_width > 0.0)) {
    throw InvalidArgument("invalid Monte Carlo options");
  }
  if (drift.constant && !bounded(*drift.constant)) throw InvalidArgument("drift exceeds |phi_i| <= 1");

  const std::int64_t n = options.samples;
  const std::int64_t batches = (n + options.batch_size - 1) / options.batch_size;
  const double dt = params.delta / options.steps;
  const double noise = std::sqrt(dt) / params.sigma;
  std::vector<Vec3> end(static_cast<std::size_t>(n));
  std::atomic<bool> unbounded{false};

  auto run_batch = [&](std::int64_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(b)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::int64_t lo = b * options.batch_size;
    const std::int64_t hi = std::min(n, lo + options.batch_size);
    for (std::int64_t s = lo; s < hi; ++s) {
      Vec3 x = xi;
      for (int k = 0; k < options.steps; ++k) {
        const Vec3 v = drift.field(x);
        if (!bounded(v)) unbounded = true;
        for (int i = 0; i < 3; ++i) x[i] += v[i] * dt + noise * normal(rng);
      }
      end[static_cast<std::size_t>(s)] = x;
    }
  };
  const int threads = std::max(1, std::min<int>(thread_count(), static_cast<int>(batches)));
  if (threads == 1) {
    for (std::int64_t b = 0; b < batches; ++b) run_batch(b);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::int64_t b = t; b < batches; b += threads) run_batch(b);
      });
    }
    for (auto& th : pool) th.join();
  }
  if (unbounded) throw InvalidArgument("drift exceeds |phi_i| <= 1 along a sample path");

  MonteCarloReport rep;
  rep.samples = n;
  rep.steps = options.steps;
  Vec3 mean{0.0, 0.0, 0.0};
  for (const auto& x : end)
    for (int i = 0; i < 3; ++i) mean[i] += x[i];
  for (auto& m : mean) m /= static_cast<double>(n);
  rep.sample_mean = mean;
  rep.box_center = mean;

  const int c = options.cells_per_axis;
  const double half = options.box_half_width * std::sqrt(params.delta) / params.sigma;
  const double h = 2.0 * half / c;
  rep.cell_width = h;
  const auto cells = static_cast<std::size_t>(c) * c * c;
  rep.cells = cells;
  std::vector<std::int64_t> counts(cells, 0);
  std::int64_t outside = 0;
  for (const auto& x : end) {
    int idx[3];
    bool in = true;
    for (int i = 0; i < 3; ++i) {
      const double u = (x[i] - (mean[i] - half)) / h;
      idx[i] = static_cast<int>(std::floor(u));
      if (u < 0.0 || idx[i] >= c) in = false;
    }
    if (!in) {
      ++outside;
      continue;
    }
    ++counts[static_cast<std::size_t>(idx[0] + c * (idx[1] + c * idx[2]))];
  }

  std::array<std::vector<double>, 3> lower, upper, edges;
  for (int i = 0; i < 3; ++i) {
    edges[i].resize(static_cast<std::size_t>(c) + 1);
    for (int k = 0; k <= c; ++k) edges[i][static_cast<std::size_t>(k)] = mean[i] - half + h * k;
    for (int k = 0; k < c; ++k) {
      const double a = edges[i][static_cast<std::size_t>(k)], b = edges[i][static_cast<std::size_t>(k) + 1];
      lower[i].push_back(cell_average(params, xi[i], a, b, -params.sigma));
      upper[i].push_back(cell_average(params, xi[i], a, b, params.sigma));
    }
  }
  const double norm = 1.0 / (static_cast<double>(n) * h * h * h);
  for (int k2 = 0; k2 < c; ++k2)
    for (int k1 = 0; k1 < c; ++k1)
      for (int k0 = 0; k0 < c; ++k0) {
        const auto cnt = counts[static_cast<std::size_t>(k0 + c * (k1 + c * k2))];
        const double density = static_cast<double>(cnt) * norm;
        const double se = std::sqrt(static_cast<double>(std::max<std::int64_t>(cnt, 1))) * norm;
        const double lo = lower[0][k0] * lower[1][k1] * lower[2][k2];
        const double hi = upper[0][k0] * upper[1][k1] * upper[2][k2];
        if (density + 3.0 * se < lo || density - 3.0 * se > hi) ++rep.violating_cells;
      }
  rep.violation_fraction = static_cast<double>(rep.violating_cells) / static_cast<double>(cells);

  if (drift.constant) {
    const double s = std::sqrt(params.delta) / params.sigma;
    std::array<std::vector<double>, 3> prob;
    for (int i = 0; i < 3; ++i) {
      const double mu = xi[i] + (*drift.constant)[i] * params.delta;
      for (int k = 0; k < c; ++k) {
        const double a = edges[i][static_cast<std::size_t>(k)], b = edges[i][static_cast<std::size_t>(k) + 1];
        prob[i].push_back(phi((b - mu) / s) - phi((a - mu) / s));
      }
    }
    double chi2 = 0.0, pooled_obs = static_cast<double>(outside), pooled_exp = 0.0, inside_prob = 0.0;
    int bins = 0;
    for (int k2 = 0; k2 < c; ++k2)
      for (int k1 = 0; k1 < c; ++k1)
        for (int k0 = 0; k0 < c; ++k0) {
          const double p = prob[0][k0] * prob[1][k1] * prob[2][k2];
          inside_prob += p;
          const double e = p * static_cast<double>(n);
          const double o = static_cast<double>(counts[static_cast<std::size_t>(k0 + c * (k1 + c * k2))]);
          if (e >= 5.0) {
            chi2 += (o - e) * (o - e) / e;
            ++bins;
          } else {
            pooled_obs += o;
            pooled_exp += e;
          }
        }
    pooled_exp += std::max(0.0, 1.0 - inside_prob) * static_cast<double>(n);
    if (pooled_exp > 0.0) {
      chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
      ++bins;
    }
    const int dof = std::max(1, bins - 1);
    rep.chi_square = chi2;
    rep.degrees_of_freedom = dof;
    rep.p_value = boost::math::gamma_q(0.5 * dof, 0.5 * chi2);
  }
  return rep;
}

}  // namespace vxl
