#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cricket_rules/confrontation.hpp"
#include "cricket_rules/error.hpp"
#include "cricket_rules/svd.hpp"

namespace cricket_rules {

/// Singular values at or below this are treated as zero when fixing the rank.
inline constexpr double kSingularValueCutoff = 1e-12;

/// Output of correspondence analysis on a (reduced) contingency table.
///
/// Zero-mass rows and columns are removed before the analysis and listed in
/// `dropped_rows` / `dropped_cols`; every other member is indexed over the
/// retained labels only.
struct CAResult {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::string> dropped_rows;
  std::vector<std::string> dropped_cols;

  std::int64_t n = 0;
  Eigen::VectorXd row_masses;       // r
  Eigen::VectorXd col_masses;       // c
  Eigen::VectorXd singular_values;  // K nonzero values, non-increasing
  Eigen::MatrixXd F;                // I×K row principal coordinates
  Eigen::MatrixXd G;                // J×K column principal coordinates
  double inertia = 0.0;             // Σ σ²
  Eigen::MatrixXd F2;               // I×2, first two columns of F (zero-padded)
  Eigen::MatrixXd G2;               // J×2

  /// No nonzero singular value: the table is independent (or 1×J / I×1).
  bool rank_zero = false;
  /// Fewer than two dimensions were available; F2/G2 carry zero columns.
  bool padded = false;

  Eigen::Index rank() const { return singular_values.size(); }

  std::optional<Eigen::Index> row_index(std::string_view label) const {
    for (std::size_t i = 0; i < row_labels.size(); ++i)
      if (row_labels[i] == label) return static_cast<Eigen::Index>(i);
    return std::nullopt;
  }
  std::optional<Eigen::Index> col_index(std::string_view label) const {
    for (std::size_t j = 0; j < col_labels.size(); ++j)
      if (col_labels[j] == label) return static_cast<Eigen::Index>(j);
    return std::nullopt;
  }
};

namespace detail {

inline std::int64_t checked_total(const CountMatrix& counts) {
  if ((counts.array() < 0).any())
    throw Error(ErrorCode::DegenerateMatrix, "negative count in contingency table");
  const std::int64_t n = counts.sum();
  if (n <= 0) throw Error(ErrorCode::DegenerateMatrix, "contingency table sums to zero");
  return n;
}

}  // namespace detail

/// Pearson ratios α_ij = P_ij / (P_i. P_.j). Cells in zero-mass rows or
/// columns are 0, as is every cell with P_ij = 0.
inline Eigen::MatrixXd pearson_ratios(const CountMatrix& counts) {
  const double n = static_cast<double>(detail::checked_total(counts));
  const Eigen::VectorXd r = counts.rowwise().sum().cast<double>() / n;
  const Eigen::RowVectorXd c = counts.colwise().sum().cast<double>() / n;
  Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(counts.rows(), counts.cols());
  for (Eigen::Index i = 0; i < counts.rows(); ++i)
    for (Eigen::Index j = 0; j < counts.cols(); ++j)
      if (counts(i, j) != 0) alpha(i, j) = (static_cast<double>(counts(i, j)) / n) / (r(i) * c(j));
  return alpha;
}

inline Eigen::MatrixXd pearson_ratios(const ConfrontationMatrix& cm) { return pearson_ratios(cm.counts); }

/// χ² = n Σ_ij P_i. P_.j (α_ij − 1)², summed over positive-mass rows/columns.
inline double chi_square(const CountMatrix& counts) {
  const double n = static_cast<double>(detail::checked_total(counts));
  const Eigen::VectorXd r = counts.rowwise().sum().cast<double>() / n;
  const Eigen::RowVectorXd c = counts.colwise().sum().cast<double>() / n;
  const Eigen::MatrixXd alpha = pearson_ratios(counts);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    if (r(i) == 0.0) continue;
    for (Eigen::Index j = 0; j < counts.cols(); ++j) {
      if (c(j) == 0.0) continue;
      const double d = alpha(i, j) - 1.0;
      sum += r(i) * c(j) * d * d;
    }
  }
  return n * sum;
}

inline double chi_square(const ConfrontationMatrix& cm) { return chi_square(cm.counts); }

/// Correspondence analysis: masses, standardized residuals
/// A = D_r^{-1/2} (P − r cᵀ) D_c^{-1/2}, SVD A = U Σ Vᵀ, then
/// F = D_r^{-1/2} U Σ and G = D_c^{-1/2} V Σ over the nonzero dimensions.
///
/// Each dimension's (U, V) pair is flipped so the largest-magnitude entry of
/// the U column is positive (lowest row wins ties). Throws DegenerateMatrix
/// for an empty table; independent or single-row/column tables come back
/// with `rank_zero` set instead of throwing.
inline CAResult correspondence_analysis(const ContingencyTable& table) {
  const CountMatrix& counts = table.counts;
  const std::int64_t total = detail::checked_total(counts);

  CAResult out;
  out.n = total;

  std::vector<Eigen::Index> keep_rows, keep_cols;
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    const auto& label = table.row_labels[static_cast<std::size_t>(i)];
    if (counts.row(i).sum() > 0) {
      keep_rows.push_back(i);
      out.row_labels.push_back(label);
    } else {
      out.dropped_rows.push_back(label);
    }
  }
  for (Eigen::Index j = 0; j < counts.cols(); ++j) {
    const auto& label = table.col_labels[static_cast<std::size_t>(j)];
    if (counts.col(j).sum() > 0) {
      keep_cols.push_back(j);
      out.col_labels.push_back(label);
    } else {
      out.dropped_cols.push_back(label);
    }
  }

  const auto I = static_cast<Eigen::Index>(keep_rows.size());
  const auto J = static_cast<Eigen::Index>(keep_cols.size());
  const double n = static_cast<double>(total);

  Eigen::MatrixXd P(I, J);
  for (Eigen::Index i = 0; i < I; ++i)
    for (Eigen::Index j = 0; j < J; ++j)
      P(i, j) = static_cast<double>(counts(keep_rows[static_cast<std::size_t>(i)],
                                           keep_cols[static_cast<std::size_t>(j)])) / n;

  // Masses from integer margins so that scaling the table leaves them bit-identical.
  out.row_masses.resize(I);
  out.col_masses.resize(J);
  for (Eigen::Index i = 0; i < I; ++i)
    out.row_masses(i) =
        static_cast<double>(counts.row(keep_rows[static_cast<std::size_t>(i)]).sum()) / n;
  for (Eigen::Index j = 0; j < J; ++j)
    out.col_masses(j) =
        static_cast<double>(counts.col(keep_cols[static_cast<std::size_t>(j)]).sum()) / n;

  auto finish_rank_zero = [&] {
    out.rank_zero = true;
    out.padded = true;
    out.singular_values.resize(0);
    out.F = Eigen::MatrixXd::Zero(I, 0);
    out.G = Eigen::MatrixXd::Zero(J, 0);
    out.F2 = Eigen::MatrixXd::Zero(I, 2);
    out.G2 = Eigen::MatrixXd::Zero(J, 2);
    out.inertia = 0.0;
    return out;
  };
  if (I < 2 || J < 2) return finish_rank_zero();

  const Eigen::VectorXd r_isqrt = out.row_masses.cwiseSqrt().cwiseInverse();
  const Eigen::VectorXd c_isqrt = out.col_masses.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd A =
      r_isqrt.asDiagonal() * (P - out.row_masses * out.col_masses.transpose()) * c_isqrt.asDiagonal();

  Svd svd = jacobi_svd(A);

  Eigen::Index K = 0;
  while (K < svd.sigma.size() && svd.sigma(K) > kSingularValueCutoff) ++K;
  if (K == 0) return finish_rank_zero();

  for (Eigen::Index k = 0; k < K; ++k) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < I; ++i)
      if (std::abs(svd.U(i, k)) > std::abs(svd.U(best, k))) best = i;
    if (svd.U(best, k) < 0) {
      svd.U.col(k) = -svd.U.col(k);
      svd.V.col(k) = -svd.V.col(k);
    }
  }

  out.singular_values = svd.sigma.head(K);
  out.F = r_isqrt.asDiagonal() * svd.U.leftCols(K) * out.singular_values.asDiagonal();
  out.G = c_isqrt.asDiagonal() * svd.V.leftCols(K) * out.singular_values.asDiagonal();
  out.inertia = out.singular_values.squaredNorm();

  out.F2 = Eigen::MatrixXd::Zero(I, 2);
  out.G2 = Eigen::MatrixXd::Zero(J, 2);
  const Eigen::Index kept = std::min<Eigen::Index>(K, 2);
  out.F2.leftCols(kept) = out.F.leftCols(kept);
  out.G2.leftCols(kept) = out.G.leftCols(kept);
  out.padded = K < 2;
  return out;
}

inline CAResult correspondence_analysis(const ConfrontationMatrix& cm) {
  return correspondence_analysis(cm.table());
}

/// Convenience for unlabeled matrices; labels are "r0".., "c0"...
inline ContingencyTable make_table(const CountMatrix& counts) {
  ContingencyTable t;
  for (Eigen::Index i = 0; i < counts.rows(); ++i) t.row_labels.push_back("r" + std::to_string(i));
  for (Eigen::Index j = 0; j < counts.cols(); ++j) t.col_labels.push_back("c" + std::to_string(j));
  t.counts = counts;
  return t;
}

/// Labelled dump at full precision (17 significant digits) for diffing.
inline void write_ca(std::ostream& out, const CAResult& ca) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return std::string(buf);
  };
  auto list = [&](const char* key, const std::vector<std::string>& items) {
    out << key;
    for (const auto& s : items) out << '\t' << s;
    out << '\n';
  };
  out << "n\t" << ca.n << '\n'
      << "rank\t" << ca.rank() << '\n'
      << "rank_zero\t" << (ca.rank_zero ? "true" : "false") << '\n'
      << "inertia\t" << num(ca.inertia) << '\n'
      << "singular_values";
  for (Eigen::Index k = 0; k < ca.singular_values.size(); ++k) out << '\t' << num(ca.singular_values(k));
  out << '\n';
  list("dropped_rows", ca.dropped_rows);
  list("dropped_cols", ca.dropped_cols);
  auto block = [&](const char* side, const std::vector<std::string>& labels,
                   const Eigen::VectorXd& masses, const Eigen::MatrixXd& coords) {
    out << side << "\tmass";
    for (Eigen::Index k = 0; k < coords.cols(); ++k) out << "\tdim" << (k + 1);
    out << '\n';
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      out << labels[i] << '\t' << num(masses(row));
      for (Eigen::Index k = 0; k < coords.cols(); ++k) out << '\t' << num(coords(row, k));
      out << '\n';
    }
  };
  block("row", ca.row_labels, ca.row_masses, ca.F);
  block("col", ca.col_labels, ca.col_masses, ca.G);
}

inline std::string ca_to_string(const CAResult& ca) {
  std::ostringstream os;
  write_ca(os, ca);
  return os.str();
}

}  // namespace cricket_rules
