#include "regen/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "regen/errors.hpp"

namespace regen::oracle {

StationaryLaw exact_stationary(const models::FiniteOrderSpec& spec) {
  const int64_t n = spec.context_count();
  const int64_t g = int64_t(spec.alphabet().size());

  // Context codes keep the most recent symbol in the least significant
  // digit, so a step drops the most significant digit and appends the new
  // symbol at the bottom.
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int64_t c = 0; c < n; ++c)
    for (int64_t gi = 0; gi < g; ++gi) {
      const int64_t next = spec.order() == 0 ? 0 : (c % (n / g)) * g + gi;
      T(c, next) += spec.transition(c, gi);
    }

  // pi T = pi with the redundant balance row replaced by normalization.
  Eigen::MatrixXd A = T.transpose() - Eigen::MatrixXd::Identity(n, n);
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible())
    throw ReducibleChain("context chain has no unique stationary law");
  Eigen::VectorXd pi = lu.solve(b);

  if (pi.minCoeff() < -1e-10)
    throw ReducibleChain("stationary solve produced a negative probability");
  pi = pi.cwiseMax(0.0);
  pi /= pi.sum();

  StationaryLaw law;
  law.order = spec.order();
  law.probabilities.assign(pi.data(), pi.data() + n);
  law.residual = (T.transpose() * pi - pi).cwiseAbs().maxCoeff();
  if (law.residual > 1e-12)
    throw ReducibleChain("stationary solve residual " +
                         std::to_string(law.residual) +
                         " exceeds the invariance contract");
  return law;
}

std::vector<double> symbol_marginal(const StationaryLaw& law,
                                    size_t alphabet_size) {
  if (law.order < 1)
    throw Error("symbol marginal needs a context law of order >= 1");
  if (alphabet_size == 0 ||
      law.probabilities.size() % alphabet_size != 0)
    throw Error("alphabet size does not divide the context count");
  std::vector<double> marginal(alphabet_size, 0.0);
  for (size_t c = 0; c < law.probabilities.size(); ++c)
    marginal[c % alphabet_size] += law.probabilities[c];
  return marginal;
}

std::optional<std::vector<Symbol>> brute_force_phi(
    const std::map<int64_t, double>& u, const SpecificationKernel& spec,
    const ThresholdSchedule& schedule, int64_t s, int64_t t) {
  if (s > t) throw Error("window start is after its end");

  // Regeneration time straight from its definition: the largest m <= s such
  // that every uniform in [m, t] sits below the threshold for its distance
  // from m. A missing uniform ends the search for every deeper candidate
  // too, since those windows only grow.
  std::optional<int64_t> tau;
  for (int64_t m = s; !tau; --m) {
    bool works = true;
    for (int64_t k = m; k <= t; ++k) {
      const auto it = u.find(k);
      if (it == u.end()) return std::nullopt;
      if (!(it->second < schedule.value(k - m))) {
        works = false;
        break;
      }
    }
    if (works) tau = m;
  }

  // Rebuild symbols from the regeneration time up. At each time the uniform
  // is swept through per-symbol blocks of minorant increments, one depth at
  // a time; depth d consults the d most recent rebuilt symbols, and the
  // regeneration guarantee caps the needed depth at j - tau.
  const Alphabet& alphabet = spec.alphabet();
  std::vector<Symbol> built;
  built.reserve(size_t(t - *tau + 1));
  for (int64_t j = *tau; j <= t; ++j) {
    const double uj = u.at(j);
    std::optional<Symbol> chosen;
    double left = 0.0;
    std::vector<Symbol> recent;  // lags 1..d
    for (int64_t d = 0; d <= j - *tau && !chosen; ++d) {
      if (d > 0) recent.push_back(built[size_t(j - d - *tau)]);
      for (size_t gi = 0; gi < alphabet.size() && !chosen; ++gi) {
        const Symbol sym = alphabet.at(gi);
        const double a = spec.minorant(d, sym, recent);
        const double below =
            d == 0 ? 0.0
                   : spec.minorant(
                         d - 1, sym,
                         std::span<const Symbol>(recent.data(), size_t(d - 1)));
        const double len = std::max(0.0, a - below);
        if (uj < left + len)
          chosen = sym;
        else
          left += len;
      }
    }
    if (!chosen)
      throw DominanceViolation(
          "uniform not covered by the minorants within the available history");
    built.push_back(*chosen);
  }

  return std::vector<Symbol>(built.begin() + size_t(s - *tau), built.end());
}

DistributionComparison compare_distributions(std::span<const int64_t> counts,
                                             std::span<const double> reference,
                                             double tolerance) {
  if (counts.size() != reference.size() || counts.empty())
    throw Error("cell counts and reference probabilities do not line up");
  int64_t n = 0;
  for (const int64_t c : counts) {
    if (c < 0) throw Error("negative cell count");
    n += c;
  }
  if (n < 1000) throw Error("need at least 1000 samples to compare");
  double total = 0.0;
  for (const double p : reference) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("reference cell out of range");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw Error("reference probabilities do not sum to 1");

  DistributionComparison out;
  for (size_t i = 0; i < counts.size(); ++i) {
    const double emp = double(counts[i]) / double(n);
    out.distance += std::abs(emp - reference[i]);
    out.standard_error +=
        std::sqrt(reference[i] * (1.0 - reference[i]) / double(n));
  }
  out.distance *= 0.5;
  out.standard_error *= 0.5;
  out.pass = out.distance <= tolerance;
  return out;
}

}  // namespace regen::oracle
