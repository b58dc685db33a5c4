#include "tracecode/linalg.hpp"

#include <stdexcept>

#include "tracecode/util.hpp"

namespace tracecode {

namespace {

// In-place reduced row echelon form; returns pivot columns.  If extra is
// non-null it receives the same row operations (its column count may differ).
std::vector<int> rref_inplace(GfpMatrix& m, GfpMatrix* extra) {
  const int64_t p = m.p;
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int pr = -1;
    for (int r = row; r < m.rows; ++r)
      if (m.at(r, col) != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    if (pr != row) {
      for (int c = 0; c < m.cols; ++c) std::swap(m.at(pr, c), m.at(row, c));
      if (extra)
        for (int c = 0; c < extra->cols; ++c) std::swap(extra->at(pr, c), extra->at(row, c));
    }
    const int64_t inv = mod_inverse(m.at(row, col), p);
    for (int c = 0; c < m.cols; ++c)
      m.at(row, c) = static_cast<int32_t>(mod_mul(m.at(row, c), inv, p));
    if (extra)
      for (int c = 0; c < extra->cols; ++c)
        extra->at(row, c) = static_cast<int32_t>(mod_mul(extra->at(row, c), inv, p));
    for (int r = 0; r < m.rows; ++r) {
      if (r == row) continue;
      const int64_t f = m.at(r, col);
      if (f == 0) continue;
      for (int c = 0; c < m.cols; ++c)
        m.at(r, c) = static_cast<int32_t>(mod_floor(m.at(r, c) - f * m.at(row, c), p));
      if (extra)
        for (int c = 0; c < extra->cols; ++c)
          extra->at(r, c) = static_cast<int32_t>(mod_floor(extra->at(r, c) - f * extra->at(row, c), p));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int gfp_rank(GfpMatrix mat) { return static_cast<int>(rref_inplace(mat, nullptr).size()); }

GfpSolver::GfpSolver(const GfpMatrix& m) : p_(m.p), n_(m.cols), rref_(m), e_(m.p, m.rows, m.rows) {
  if (m.rows != m.cols) throw std::invalid_argument("GfpSolver expects a square matrix");
  for (int i = 0; i < m.rows; ++i) e_.at(i, i) = 1;
  pivot_col_ = rref_inplace(rref_, &e_);
  rank_ = static_cast<int>(pivot_col_.size());

  std::vector<bool> is_pivot(static_cast<size_t>(n_), false);
  for (int c : pivot_col_) is_pivot[static_cast<size_t>(c)] = true;
  for (int fc = 0; fc < n_; ++fc) {
    if (is_pivot[static_cast<size_t>(fc)]) continue;
    std::vector<int32_t> v(static_cast<size_t>(n_), 0);
    v[static_cast<size_t>(fc)] = 1;
    for (int r = 0; r < rank_; ++r)
      v[static_cast<size_t>(pivot_col_[static_cast<size_t>(r)])] =
          static_cast<int32_t>(mod_floor(-rref_.at(r, fc), p_));
    kernel_.push_back(std::move(v));
  }
}

bool GfpSolver::solve(std::span<const int32_t> rhs, std::vector<int32_t>& x) const {
  if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("rhs size mismatch");
  static thread_local std::vector<int64_t> y;
  y.assign(static_cast<size_t>(n_), 0);
  for (int r = 0; r < n_; ++r) {
    int64_t acc = 0;
    for (int c = 0; c < n_; ++c) acc += static_cast<int64_t>(e_.at(r, c)) * rhs[static_cast<size_t>(c)];
    y[static_cast<size_t>(r)] = acc % p_;
  }
  for (int r = rank_; r < n_; ++r)
    if (y[static_cast<size_t>(r)] != 0) return false;
  x.assign(static_cast<size_t>(n_), 0);
  for (int r = 0; r < rank_; ++r)
    x[static_cast<size_t>(pivot_col_[static_cast<size_t>(r)])] =
        static_cast<int32_t>(y[static_cast<size_t>(r)]);
  return true;
}

}  // namespace tracecode
