#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fsd/mimo_model.hpp"

namespace fsd {

// kSorted: the weakest stream is detected first (top tree level).
// kSortedMin: the weakest stream is orthogonalized first (detected last).
enum class QrdMode { kPlain, kSorted, kSortedMin };

const char* to_string(QrdMode mode);
QrdMode parse_qrd_mode(std::string_view text);

// H[:, perm] = Q * R with Q having orthonormal columns and R upper triangular
// with a strictly positive diagonal.
struct QrdResult {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
  // Column k of Q*R is column perm[k] of the input matrix.
  std::vector<int> perm;
};

// Residual column norms below this abort the decomposition.
inline constexpr double kRankTolerance = 1e-12;

// Modified Gram-Schmidt, natural column order.
QrdResult qr_decompose(const Eigen::MatrixXd& h);

// Sorted modified Gram-Schmidt. Each step orthogonalizes the remaining column
// with the largest residual norm; the column left for the final step, the
// weakest in the greedy sense, sits on the highest tree level and is detected
// first. Exact ties go to the lowest original
// column index. decompose(h, kSortedMin) applies the opposite rule.
QrdResult sorted_qr_decompose(const Eigen::MatrixXd& h);

QrdResult decompose(const Eigen::MatrixXd& h, QrdMode mode);

// y_zf = Q^T y.
Eigen::VectorXd zf_transform(const QrdResult& qrd, const Eigen::VectorXd& y);

// Reorders a symbol vector from input-column order into detection order.
SymbolVector permute_symbols(std::span<const int> perm, std::span<const int> symbols);
// Inverse of permute_symbols.
SymbolVector unpermute_symbols(std::span<const int> perm, std::span<const int> symbols);

}  // namespace fsd
