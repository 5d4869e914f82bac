#include "njpc/simulate.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "njpc/discrete.hpp"

namespace njpc {

namespace {

std::mt19937_64 seeded_engine(RngSeed seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.master_seed),
                    static_cast<std::uint32_t>(seed.master_seed >> 32),
                    static_cast<std::uint32_t>(seed.stream_id),
                    static_cast<std::uint32_t>(seed.stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(RngSeed seed) : engine_(seeded_engine(seed)) {}

std::size_t Rng::below(std::size_t bound) {
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return static_cast<std::size_t>(x % bound);
}

StageRates stage_rates(const CensoringScheme& scheme, const ExpParams& params) {
  StageRates out{Eigen::VectorXd(scheme.k())};
  for (int s = 0; s < scheme.k(); ++s)
    out.rates(s) = scheme.pop1_at_risk(s) / params.theta1 +
                   scheme.pop2_at_risk(s) / params.theta2;
  return out;
}

double expected_duration(const CensoringScheme& scheme, const ExpParams& params) {
  return stage_rates(scheme, params).rates.cwiseInverse().sum();
}

NjpcSampler::NjpcSampler(const CensoringScheme& scheme, const ExpParams& params)
    : k_(scheme.k()),
      spacing_means_(stage_rates(scheme, params).rates.cwiseInverse()),
      pop1_probs_(bernoulli_probs(scheme, params)),
      ttt_weight_pop1_(scheme.k()),
      ttt_weight_pop2_(scheme.k()) {
  // Every unit at risk during stage s accrues that spacing.
  for (int s = 0; s < k_; ++s) {
    ttt_weight_pop1_(s) = scheme.pop1_at_risk(s);
    ttt_weight_pop2_(s) = scheme.pop2_at_risk(s);
  }
}

NjpcSample NjpcSampler::operator()(Rng& rng) const {
  NjpcSample sample;
  sample.w.resize(static_cast<std::size_t>(k_));
  sample.z.resize(static_cast<std::size_t>(k_));
  double elapsed = 0.0;
  for (int s = 0; s < k_; ++s) {
    elapsed += rng.exponential(spacing_means_(s));
    sample.w[s] = elapsed;
  }
  for (int s = 0; s < k_; ++s) sample.z[s] = rng.bernoulli(pop1_probs_(s)) ? 1 : 0;
  return sample;
}

SufficientStats NjpcSampler::draw_stats(Rng& rng) const {
  SufficientStats stats{0, 0, 0.0, 0.0};
  for (int s = 0; s < k_; ++s) {
    const double spacing = rng.exponential(spacing_means_(s));
    stats.ttt_pop1 += ttt_weight_pop1_(s) * spacing;
    stats.ttt_pop2 += ttt_weight_pop2_(s) * spacing;
  }
  for (int s = 0; s < k_; ++s) stats.failures_pop1 += rng.bernoulli(pop1_probs_(s)) ? 1 : 0;
  stats.failures_pop2 = k_ - stats.failures_pop1;
  return stats;
}

NjpcSample generate(const CensoringScheme& scheme, const ExpParams& params,
                    RngSeed seed) {
  Rng rng(seed);
  return NjpcSampler(scheme, params)(rng);
}

namespace {

// Removes `count` uniformly chosen entries by partial Fisher-Yates.
void withdraw(std::vector<std::size_t>& survivors, int count, Rng& rng) {
  if (count > static_cast<int>(survivors.size())) {
    std::ostringstream msg;
    msg << "cannot withdraw " << count << " units from " << survivors.size()
        << " survivors";
    throw InsufficientSurvivors(msg.str());
  }
  for (int i = 0; i < count; ++i) {
    const std::size_t remaining = survivors.size();
    const std::size_t pick = rng.below(remaining);
    std::swap(survivors[pick], survivors[remaining - 1]);
    survivors.pop_back();
  }
}

}  // namespace

NjpcSample apply_scheme(std::span<const double> x, std::span<const double> y,
                        const CensoringScheme& scheme, RngSeed seed) {
  if (static_cast<int>(x.size()) != scheme.m() ||
      static_cast<int>(y.size()) != scheme.n()) {
    std::ostringstream msg;
    msg << "complete samples have sizes (" << x.size() << ", " << y.size()
        << "), scheme expects (" << scheme.m() << ", " << scheme.n() << ")";
    throw DimensionMismatch(msg.str());
  }
  Rng rng(seed);
  std::vector<std::size_t> alive1(x.size());
  std::vector<std::size_t> alive2(y.size());
  for (std::size_t i = 0; i < alive1.size(); ++i) alive1[i] = i;
  for (std::size_t i = 0; i < alive2.size(); ++i) alive2[i] = i;

  // Position of the earliest failure in a survivor list; ties go to the
  // lower original index.
  auto earliest = [](const std::vector<std::size_t>& alive,
                     std::span<const double> life) {
    std::size_t best = alive.size();
    for (std::size_t j = 0; j < alive.size(); ++j) {
      if (best == alive.size() || life[alive[j]] < life[alive[best]] ||
          (life[alive[j]] == life[alive[best]] && alive[j] < alive[best]))
        best = j;
    }
    return best;
  };

  NjpcSample sample;
  const int k = scheme.k();
  for (int s = 0; s < k; ++s) {
    const std::size_t j1 = earliest(alive1, x);
    const std::size_t j2 = earliest(alive2, y);
    const bool has1 = j1 < alive1.size();
    const bool has2 = j2 < alive2.size();
    if (!has1 && !has2) throw InsufficientSurvivors("no units left on test");
    const bool from_pop1 = has1 && (!has2 || x[alive1[j1]] <= y[alive2[j2]]);

    auto& own = from_pop1 ? alive1 : alive2;
    auto& other = from_pop1 ? alive2 : alive1;
    const std::size_t failed = from_pop1 ? j1 : j2;
    sample.w.push_back(from_pop1 ? x[alive1[j1]] : y[alive2[j2]]);
    sample.z.push_back(from_pop1 ? 1 : 0);
    own.erase(own.begin() + static_cast<std::ptrdiff_t>(failed));

    if (s == k - 1) break;
    const int r = scheme.withdrawals()[static_cast<std::size_t>(s)];
    withdraw(own, r, rng);
    withdraw(other, r + 1, rng);
  }
  return sample;
}

}  // namespace njpc
