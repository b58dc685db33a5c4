#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tracecode {

// Dense row-major matrix over GF(p).
struct GfpMatrix {
  int64_t p = 0;
  int rows = 0;
  int cols = 0;
  std::vector<int32_t> a;

  GfpMatrix() = default;
  GfpMatrix(int64_t p_, int rows_, int cols_)
      : p(p_), rows(rows_), cols(cols_), a(static_cast<size_t>(rows_) * cols_, 0) {}

  int32_t& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  int32_t at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

// Rank by exact Gaussian elimination (works on a copy).
int gfp_rank(GfpMatrix mat);

// Prepared eliminator for a fixed square matrix M over GF(p): one O(n^3)
// reduction up front, then each solve of M x = rhs costs O(n^2).
class GfpSolver {
 public:
  explicit GfpSolver(const GfpMatrix& m);

  int rank() const { return rank_; }
  int kernel_dim() const { return n_ - rank_; }
  const std::vector<std::vector<int32_t>>& kernel_basis() const { return kernel_; }

  // Particular solution with free coordinates set to zero; returns false if
  // the system is inconsistent.
  bool solve(std::span<const int32_t> rhs, std::vector<int32_t>& x) const;

 private:
  int64_t p_ = 0;
  int n_ = 0;
  int rank_ = 0;
  GfpMatrix rref_;               // R = E * M in reduced row echelon form
  GfpMatrix e_;                  // accumulated row operations
  std::vector<int> pivot_col_;   // pivot column of each pivot row
  std::vector<std::vector<int32_t>> kernel_;
};

}  // namespace tracecode
