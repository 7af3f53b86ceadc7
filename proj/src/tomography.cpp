#include "rebit/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "rebit/errors.hpp"

namespace rebit {

namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

std::string setting_name(const Setting& s) {
  return std::string{pauli_char(s.first), pauli_char(s.second)};
}

std::uint64_t total(const OutcomeCounts& n) { return n[0] + n[1] + n[2] + n[3]; }

}  // namespace

void CountsDataset::require_complete() const {
  for (Pauli a : kBases)
    for (Pauli b : kBases)
      if (!settings.contains({a, b}))
        throw ParseError("counts dataset is missing setting '" + setting_name({a, b}) + "'");
}

std::array<double, 4> outcome_probabilities(const CorrelationMatrix& g, Pauli mu, Pauli nu) {
  const double ma = g(mu, Pauli::I);
  const double mb = g(Pauli::I, nu);
  const double c = g(mu, nu);
  std::array<double, 4> p{};
  int k = 0;
  for (int s : {1, -1})
    for (int t : {1, -1}) p[k++] = (1.0 + s * ma + t * mb + s * t * c) / 4.0;
  return p;
}

CountsDataset simulate_counts(const CorrelationMatrix& g_true, std::uint64_t events_per_setting,
                              std::uint64_t seed) {
  if (events_per_setting < 1) throw InvalidArgument("simulate_counts: events_per_setting must be >= 1");
  if (std::abs(g_true(0, 0) - 1.0) > kDefaultTol || !is_physical(g_true, kDefaultTol))
    throw InvalidArgument("simulate_counts: true state is not physical");

  CountsDataset out;
  std::uint64_t stream = 0;
  for (Pauli a : kBases)
    for (Pauli b : kBases) {
      auto rng = make_rng(seed, stream++);
      std::array<double, 4> p = outcome_probabilities(g_true, a, b);
      for (double& v : p) {
        if (v < -kDefaultTol) throw InvalidArgument("simulate_counts: negative outcome probability");
        v = std::max(v, 0.0);
      }
      OutcomeCounts n{};
      std::uint64_t remaining = events_per_setting;
      double mass = p[0] + p[1] + p[2] + p[3];
      for (int k = 0; k < 3; ++k) {
        if (remaining == 0 || mass <= 0.0) break;
        const double q = std::clamp(p[k] / mass, 0.0, 1.0);
        std::binomial_distribution<std::uint64_t> draw(remaining, q);
        n[k] = draw(rng);
        remaining -= n[k];
        mass -= p[k];
      }
      n[3] = remaining;
      out.settings[{a, b}] = n;
    }
  return out;
}

EstimatedState estimate_correlations(const CountsDataset& c) {
  c.require_complete();
  Matrix4 gamma = Matrix4::Zero();
  Matrix4 var = Matrix4::Zero();
  gamma(0, 0) = 1.0;
  for (const auto& [setting, n] : c.settings) {
    const std::uint64_t total_n = total(n);
    if (total_n == 0)
      throw InvalidArgument("estimate_correlations: setting '" + setting_name(setting) +
                            "' has no events");
    const double nn = static_cast<double>(total_n);
    const double pp = static_cast<double>(n[0]), pm = static_cast<double>(n[1]);
    const double mp = static_cast<double>(n[2]), mm = static_cast<double>(n[3]);
    const int mu = idx(setting.first), nu = idx(setting.second);

    const double corr = (pp - pm - mp + mm) / nn;
    gamma(mu, nu) = corr;
    var(mu, nu) = std::max(0.0, 1.0 - corr * corr) / nn;

    // Each setting contributes one third of both marginal estimates.
    const double ma = (pp + pm - mp - mm) / nn;
    const double mb = (pp - pm + mp - mm) / nn;
    gamma(mu, 0) += ma / 3.0;
    gamma(0, nu) += mb / 3.0;
    var(mu, 0) += std::max(0.0, 1.0 - ma * ma) / nn / 9.0;
    var(0, nu) += std::max(0.0, 1.0 - mb * mb) / nn / 9.0;
  }
  EstimatedState e{CorrelationMatrix(gamma), var.cwiseSqrt()};
  e.sigma(0, 0) = 0.0;
  return e;
}

CountsDataset mix_datasets(const std::vector<std::pair<CountsDataset, double>>& parts) {
  if (parts.empty()) throw InvalidArgument("mix_datasets: nothing to mix");
  double wsum = 0.0;
  for (const auto& [d, w] : parts) {
    if (!(w >= 0.0)) throw InvalidArgument("mix_datasets: weights must be nonnegative");
    wsum += w;
  }
  if (!(wsum > 0.0)) throw InvalidArgument("mix_datasets: weights sum to zero");

  const auto& first = parts.front().first.settings;
  for (const auto& [d, w] : parts) {
    bool same = d.settings.size() == first.size();
    for (const auto& [s, n] : first) same = same && d.settings.contains(s);
    if (!same) throw InvalidArgument("mix_datasets: datasets have mismatched settings");
  }

  CountsDataset out;
  for (const auto& [s, unused] : first) {
    std::array<double, 4> acc{};
    for (const auto& [d, w] : parts) {
      const auto& n = d.settings.at(s);
      for (int k = 0; k < 4; ++k) acc[k] += (w / wsum) * static_cast<double>(n[k]);
    }
    // Largest-remainder rounding keeps the setting total at the rounded weighted total.
    OutcomeCounts n{};
    double total = 0.0;
    std::uint64_t assigned = 0;
    std::array<int, 4> order{0, 1, 2, 3};
    for (int k = 0; k < 4; ++k) {
      total += acc[k];
      n[k] = static_cast<std::uint64_t>(std::floor(acc[k]));
      assigned += n[k];
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return acc[a] - std::floor(acc[a]) > acc[b] - std::floor(acc[b]);
    });
    const auto target = static_cast<std::uint64_t>(std::llround(total));
    for (int i = 0; assigned < target; ++i, ++assigned) ++n[order[i]];
    out.settings[s] = n;
  }
  return out;
}

std::pair<CorrelationMatrix, bool> repair_physical(const CorrelationMatrix& g) {
  const CorrelationMatrix unit = g.normalized();
  Matrix4c rho = Matrix4c::Zero();
  for (auto mu : kPaulis)
    for (auto nu : kPaulis) rho += unit(mu, nu) * pauli_product(mu, nu);
  rho /= 4.0;
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
  if (es.eigenvalues()[0] >= 0.0) return {g, false};

  Eigen::Vector4d lam = es.eigenvalues().cwiseMax(0.0);
  lam /= lam.sum();
  const Matrix4c fixed = es.eigenvectors() * lam.cast<Complex>().asDiagonal() *
                         es.eigenvectors().adjoint();
  Matrix4 out;
  for (auto mu : kPaulis)
    for (auto nu : kPaulis)
      out(idx(mu), idx(nu)) = (fixed * pauli_product(mu, nu)).trace().real();
  out(0, 0) = 1.0;
  return {CorrelationMatrix(out), true};
}

MonteCarloResult monte_carlo_propagate(const EstimatedState& e, int n_samples, std::uint64_t seed,
                                       const Analysis& analysis) {
  if (n_samples < 2) throw InvalidArgument("monte_carlo_propagate: n_samples must be >= 2");

  MonteCarloResult r;
  // Welford accumulation; identical outputs give exactly zero spread.
  Eigen::VectorXd mean, m2;
  int ok = 0;
  for (int i = 0; i < n_samples; ++i) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix4 m = e.gamma.matrix();
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        if (mu == 0 && nu == 0) continue;
        const double s = e.sigma(mu, nu);
        const double z = normal(rng);
        if (s > 0.0) m(mu, nu) += s * z;
      }
    auto [sample, repaired] = repair_physical(CorrelationMatrix(m));
    if (repaired) ++r.repaired;

    Eigen::VectorXd out;
    try {
      out = analysis(sample);
    } catch (const Error&) {
      ++r.failures;
      continue;
    }
    if (ok == 0) {
      mean = Eigen::VectorXd::Zero(out.size());
      m2 = Eigen::VectorXd::Zero(out.size());
    } else if (out.size() != mean.size()) {
      throw InvalidArgument("monte_carlo_propagate: analysis output size changed between samples");
    }
    ++ok;
    const Eigen::VectorXd delta = out - mean;
    mean += delta / ok;
    m2 += delta.cwiseProduct(out - mean);
  }
  r.samples = ok;
  if (r.failures * 10 > n_samples)
    throw Error("monte_carlo_propagate: analysis failed on " + std::to_string(r.failures) + " of " +
                std::to_string(n_samples) + " samples");
  if (ok < 2) throw Error("monte_carlo_propagate: fewer than two successful samples");

  r.means = mean;
  r.stds = (m2 / (ok - 1)).cwiseMax(0.0).cwiseSqrt();
  return r;
}

}  // namespace rebit
