#pragma once

// Independent reference computations for the tests and the acceptance
// binary. Nothing here calls into the library code it is used to check.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cricket_rules/ca.hpp"
#include "cricket_rules/lexicon.hpp"
#include "support/synthetic_corpus.hpp"

namespace cricket_rules::oracle {

// ---------------------------------------------------------------------------
// Confrontation matrix by brute force: every lexicon entry is searched for
// as a contiguous token run, with no n-gram set in between.

struct BruteForceCm {
  std::map<std::pair<std::string, std::string>, std::int64_t> cells;
  std::int64_t n = 0;
};

inline bool contains_run(const std::vector<std::string>& tokens, std::string_view ngram) {
  std::vector<std::string> parts;
  for (auto p : text::split(ngram, ' ')) parts.emplace_back(p);
  if (parts.size() > tokens.size()) return false;
  for (std::size_t i = 0; i + parts.size() <= tokens.size(); ++i)
    if (std::equal(parts.begin(), parts.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) return true;
  return false;
}

inline BruteForceCm brute_force_cm(std::span<const DeliveryRecord> records, const FeatureLexicon& lexicon,
                                   const std::vector<BowlingFeature>& columns) {
  BruteForceCm out;
  for (const auto& r : records) {
    std::string body = r.text;
    // Drop the four structured fields (and the speed, if any) by hand.
    for (int commas = 0; commas < 3; ++commas) body = body.substr(body.find(',') + 1);
    while (!body.empty() && body.front() == ' ') body.erase(0, 1);
    if (auto kph = body.find(" kph,"); kph != std::string::npos && kph < 8) body = body.substr(kph + 6);
    const auto tokens = normalize_tokens(body);

    std::vector<std::string> bat{std::string(name(batting_feature(r.outcome)))};
    for (std::size_t i = 0; i < kBattingFeatureCount; ++i) {
      auto f = static_cast<BattingFeature>(i);
      for (const auto& g : lexicon.ngrams(f))
        if (contains_run(tokens, g)) {
          if (std::find(bat.begin(), bat.end(), name(f)) == bat.end()) bat.emplace_back(name(f));
          break;
        }
    }
    std::vector<std::string> bowl;
    for (auto f : columns)
      for (const auto& g : lexicon.ngrams(f))
        if (contains_run(tokens, g)) {
          bowl.emplace_back(name(f));
          break;
        }
    for (const auto& a : bat)
      for (const auto& b : bowl) {
        ++out.cells[{a, b}];
        ++out.n;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Correspondence analysis via the symmetric eigenproblem AᵀA = V Σ² Vᵀ.

struct CaReference {
  Eigen::VectorXd r, c;
  Eigen::VectorXd sigma;  // descending, above the cutoff
  Eigen::MatrixXd F, G;
  double chi2 = 0.0;
  double n = 0.0;
};

inline CaReference reference_ca(const CountMatrix& counts) {
  CaReference out;
  const Eigen::MatrixXd N = counts.cast<double>();
  out.n = N.sum();
  out.r = N.rowwise().sum() / out.n;
  out.c = N.colwise().sum().transpose() / out.n;

  for (Eigen::Index i = 0; i < N.rows(); ++i)
    for (Eigen::Index j = 0; j < N.cols(); ++j) {
      const double expected = out.r(i) * out.c(j) * out.n;
      out.chi2 += (N(i, j) - expected) * (N(i, j) - expected) / expected;
    }

  Eigen::MatrixXd A(N.rows(), N.cols());
  for (Eigen::Index i = 0; i < N.rows(); ++i)
    for (Eigen::Index j = 0; j < N.cols(); ++j)
      A(i, j) = (N(i, j) / out.n - out.r(i) * out.c(j)) / std::sqrt(out.r(i) * out.c(j));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A.transpose() * A);
  const Eigen::Index J = A.cols();
  // Eigenvalues of AᵀA carry absolute error of order ε·λ_max, so the trivial
  // null direction shows up as noise far above σ_cutoff²; use the usual
  // numerical-rank tolerance instead.
  const double lambda_max = std::max(eig.eigenvalues().maxCoeff(), 0.0);
  const double tolerance = std::max(kSingularValueCutoff * kSingularValueCutoff,
                                    64.0 * static_cast<double>(J) * 2.220446049250313e-16 * lambda_max);
  std::vector<Eigen::Index> order;
  for (Eigen::Index k = J - 1; k >= 0; --k)
    if (eig.eigenvalues()(k) > tolerance) order.push_back(k);

  const auto K = static_cast<Eigen::Index>(order.size());
  out.sigma.resize(K);
  out.F.resize(A.rows(), K);
  out.G.resize(J, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const Eigen::VectorXd v = eig.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    const double s = std::sqrt(eig.eigenvalues()(order[static_cast<std::size_t>(k)]));
    out.sigma(k) = s;
    out.G.col(k) = v.cwiseQuotient(out.c.cwiseSqrt()) * s;
    // U σ = A v
    out.F.col(k) = (A * v).cwiseQuotient(out.r.cwiseSqrt());
  }
  return out;
}

/// Largest |a − s·b| over columns, choosing the sign s per column.
inline double max_diff_up_to_sign(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const double plus = (a.col(k) - b.col(k)).cwiseAbs().maxCoeff();
    const double minus = (a.col(k) + b.col(k)).cwiseAbs().maxCoeff();
    worst = std::max(worst, std::min(plus, minus));
  }
  return worst;
}

/// Worst violations of the CA identities for one table, each expressed so
/// that ≤ tolerance means pass.
struct CaCheck {
  double inertia_vs_chi2 = 0.0;   // |Σσ² − χ²/n| / max(1, χ²/n)
  double sigma_vs_oracle = 0.0;   // max |σ − σ_ref|
  double coords_vs_oracle = 0.0;  // F, G up to per-axis sign
  double centering = 0.0;         // |rᵀF|, |cᵀG|
  double reconstitution = 0.0;    // max |p_ij − r_i c_j (1 + Σ f g / σ)|
  double transpose_duality = 0.0; // CA(Nᵀ) swaps F and G
  bool rank_ok = true;

  double worst() const {
    return std::max({inertia_vs_chi2, sigma_vs_oracle, coords_vs_oracle, centering, reconstitution,
                     transpose_duality});
  }
};

inline CaCheck check_ca(const CountMatrix& counts) {
  CaCheck out;
  const auto ca = correspondence_analysis(make_table(counts));
  const auto ref = reference_ca(counts);
  const auto caT = correspondence_analysis(make_table(CountMatrix(counts.transpose())));

  out.rank_ok = ca.rank() == ref.sigma.size() && caT.rank() == ca.rank();
  if (!out.rank_ok) return out;

  const double inertia_ref = ref.chi2 / ref.n;
  out.inertia_vs_chi2 = std::abs(ca.inertia - inertia_ref) / std::max(1.0, inertia_ref);
  out.sigma_vs_oracle = (ca.singular_values - ref.sigma).cwiseAbs().maxCoeff();
  out.coords_vs_oracle = std::max(max_diff_up_to_sign(ca.F, ref.F), max_diff_up_to_sign(ca.G, ref.G));
  out.centering = std::max((ca.row_masses.transpose() * ca.F).cwiseAbs().maxCoeff(),
                           (ca.col_masses.transpose() * ca.G).cwiseAbs().maxCoeff());

  const Eigen::MatrixXd P = counts.cast<double>() / ref.n;
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    for (Eigen::Index j = 0; j < P.cols(); ++j) {
      double s = 1.0;
      for (Eigen::Index k = 0; k < ca.rank(); ++k) s += ca.F(i, k) * ca.G(j, k) / ca.singular_values(k);
      out.reconstitution = std::max(out.reconstitution, std::abs(P(i, j) - ref.r(i) * ref.c(j) * s));
    }

  out.transpose_duality = std::max({(caT.singular_values - ca.singular_values).cwiseAbs().maxCoeff(),
                                    max_diff_up_to_sign(caT.F, ca.G), max_diff_up_to_sign(caT.G, ca.F)});
  return out;
}

/// Seeded integer table with entries in [0, max_entry] and no empty row or
/// column.
inline CountMatrix random_counts(synthetic::Rng& rng, Eigen::Index rows, Eigen::Index cols, int max_entry = 50) {
  CountMatrix m(rows, cols);
  for (;;) {
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        m(i, j) = static_cast<std::int64_t>(rng.below(static_cast<std::size_t>(max_entry) + 1));
    bool ok = true;
    for (Eigen::Index i = 0; i < rows; ++i) ok = ok && m.row(i).sum() > 0;
    for (Eigen::Index j = 0; j < cols; ++j) ok = ok && m.col(j).sum() > 0;
    if (ok) return m;
  }
}

}  // namespace cricket_rules::oracle
