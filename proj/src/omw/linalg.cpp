#include "omw/linalg.hpp"

#include "omw/errors.hpp"

namespace omw {

namespace {

// Row-reduces `a` in place (optionally carrying `b`), returning pivot column
// per pivot row.
std::vector<int> eliminate(QMat& a, QVec* b) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  for (const QVec& row : a)
    if (static_cast<int>(row.size()) != cols)
      throw usage_error("ragged matrix");
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = -1;
    for (int i = r; i < rows; ++i)
      if (sgn(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[static_cast<std::size_t>(p)], a[static_cast<std::size_t>(r)]);
    if (b) std::swap((*b)[static_cast<std::size_t>(p)], (*b)[static_cast<std::size_t>(r)]);
    const mpq_class inv = 1 / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    for (int j = c; j < cols; ++j)
      a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] *= inv;
    if (b) (*b)[static_cast<std::size_t>(r)] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      const mpq_class f = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      if (sgn(f) == 0) continue;
      for (int j = c; j < cols; ++j)
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
            f * a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
      if (b) (*b)[static_cast<std::size_t>(i)] -= f * (*b)[static_cast<std::size_t>(r)];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

int q_rank(QMat a) {
  return static_cast<int>(eliminate(a, nullptr).size());
}

std::optional<QVec> q_solve(QMat a, QVec b) {
  if (a.size() != b.size()) throw usage_error("q_solve: size mismatch");
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  const std::vector<int> pivots = eliminate(a, &b);
  // inconsistency: a zero row with nonzero right side
  for (int i = static_cast<int>(pivots.size()); i < rows; ++i)
    if (sgn(b[static_cast<std::size_t>(i)]) != 0) return std::nullopt;
  QVec x(static_cast<std::size_t>(cols), mpq_class(0));
  for (std::size_t r = 0; r < pivots.size(); ++r)
    x[static_cast<std::size_t>(pivots[r])] = b[r];
  return x;
}

mpq_class q_det(QMat a) {
  const std::size_t n = a.size();
  for (const QVec& row : a)
    if (row.size() != n) throw usage_error("q_det needs a square matrix");
  mpq_class det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(a[i][c]) == 0) continue;
      const mpq_class f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return det;
}

std::vector<QVec> q_kernel(QMat a) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  if (rows == 0) return {};
  const std::vector<int> pivots = eliminate(a, nullptr);
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<QVec> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    QVec v(static_cast<std::size_t>(cols), mpq_class(0));
    v[static_cast<std::size_t>(f)] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[static_cast<std::size_t>(pivots[r])] =
          -a[r][static_cast<std::size_t>(f)];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace omw
