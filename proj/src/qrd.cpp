#include "fsd/qrd.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "fsd/errors.hpp"

namespace fsd {

const char* to_string(QrdMode mode) {
  switch (mode) {
    case QrdMode::kPlain: return "plain";
    case QrdMode::kSorted: return "sorted";
    case QrdMode::kSortedMin: return "sorted-min";
  }
  return "?";
}

QrdMode parse_qrd_mode(std::string_view text) {
  if (text == "plain") return QrdMode::kPlain;
  if (text == "sorted") return QrdMode::kSorted;
  if (text == "sorted-min") return QrdMode::kSortedMin;
  throw ConfigError("unknown qrd mode '" + std::string(text) +
                    "' (expected plain|sorted|sorted-min)");
}

namespace {

QrdResult gram_schmidt(const Eigen::MatrixXd& h, QrdMode mode) {
  const Eigen::Index rows = h.rows();
  const Eigen::Index cols = h.cols();
  if (cols == 0 || rows < cols) {
    throw SingularChannelError("channel " + std::to_string(rows) + "x" + std::to_string(cols) +
                               " cannot have full column rank");
  }
  QrdResult out;
  out.q = h;
  out.r = Eigen::MatrixXd::Zero(cols, cols);
  out.perm.resize(cols);
  std::iota(out.perm.begin(), out.perm.end(), 0);

  for (Eigen::Index i = 0; i < cols; ++i) {
    if (mode != QrdMode::kPlain) {
      // kSorted keeps the weakest residual for the last step, which becomes the
      // top tree level; kSortedMin orthogonalizes the weakest first.
      const bool take_max = mode == QrdMode::kSorted;
      Eigen::Index pick = i;
      double best = out.q.col(i).squaredNorm();
      for (Eigen::Index l = i + 1; l < cols; ++l) {
        const double norm = out.q.col(l).squaredNorm();
        const bool better = take_max ? norm > best : norm < best;
        if (better || (norm == best && out.perm[l] < out.perm[pick])) {
          best = norm;
          pick = l;
        }
      }
      if (pick != i) {
        out.q.col(i).swap(out.q.col(pick));
        out.r.col(i).swap(out.r.col(pick));
        std::swap(out.perm[i], out.perm[pick]);
      }
    }
    const double norm = out.q.col(i).norm();
    if (!(norm >= kRankTolerance)) {
      throw SingularChannelError("residual norm " + std::to_string(norm) + " at column " +
                                 std::to_string(i) + " is below the rank tolerance");
    }
    out.r(i, i) = norm;
    out.q.col(i) /= norm;
    for (Eigen::Index l = i + 1; l < cols; ++l) {
      const double proj = out.q.col(i).dot(out.q.col(l));
      out.r(i, l) = proj;
      out.q.col(l) -= proj * out.q.col(i);
    }
  }
  return out;
}

}  // namespace

QrdResult qr_decompose(const Eigen::MatrixXd& h) { return gram_schmidt(h, QrdMode::kPlain); }

QrdResult sorted_qr_decompose(const Eigen::MatrixXd& h) { return gram_schmidt(h, QrdMode::kSorted); }

QrdResult decompose(const Eigen::MatrixXd& h, QrdMode mode) {
  return gram_schmidt(h, mode);
}

Eigen::VectorXd zf_transform(const QrdResult& qrd, const Eigen::VectorXd& y) {
  if (y.size() != qrd.q.rows()) {
    throw InputShapeError("received vector has length " + std::to_string(y.size()) +
                          ", Q has " + std::to_string(qrd.q.rows()) + " rows");
  }
  return qrd.q.transpose() * y;
}

SymbolVector permute_symbols(std::span<const int> perm, std::span<const int> symbols) {
  if (perm.size() != symbols.size()) throw InputShapeError("permutation length mismatch");
  SymbolVector out(symbols.size());
  for (std::size_t k = 0; k < perm.size(); ++k) out[k] = symbols[perm[k]];
  return out;
}

SymbolVector unpermute_symbols(std::span<const int> perm, std::span<const int> symbols) {
  if (perm.size() != symbols.size()) throw InputShapeError("permutation length mismatch");
  SymbolVector out(symbols.size());
  for (std::size_t k = 0; k < perm.size(); ++k) out[perm[k]] = symbols[k];
  return out;
}

}  // namespace fsd
