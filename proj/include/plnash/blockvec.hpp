#pragma once

#include <span>
#include <vector>

namespace plnash {

// Partition of a flat d-dimensional vector into n contiguous blocks of sizes
// d_1, ..., d_n. Block indices are 0-based throughout the C++ API.
class BlockLayout {
 public:
  BlockLayout() = default;
  explicit BlockLayout(std::vector<int> dims);

  int n() const { return static_cast<int>(dims_.size()); }
  int total_dim() const { return total_; }
  int block_dim(int i) const;
  int block_offset(int i) const;
  const std::vector<int>& block_dims() const { return dims_; }

  friend bool operator==(const BlockLayout& a, const BlockLayout& b) {
    return a.dims_ == b.dims_;
  }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_ = 0;
};

// Flat contiguous storage with a layout sidecar, so a solver can touch one
// block per iteration without reallocating. All reals are 64-bit.
class BlockVector {
 public:
  BlockVector() = default;
  explicit BlockVector(BlockLayout layout);
  BlockVector(BlockLayout layout, std::vector<double> data);

  const BlockLayout& layout() const { return layout_; }
  int size() const { return static_cast<int>(data_.size()); }

  std::span<const double> flat() const { return data_; }
  std::span<double> flat() { return data_; }

  std::span<const double> block(int i) const;
  std::span<double> block(int i);

  double operator[](int j) const { return data_[static_cast<std::size_t>(j)]; }
  double& operator[](int j) { return data_[static_cast<std::size_t>(j)]; }

  bool all_finite() const;

  friend bool operator==(const BlockVector& a, const BlockVector& b) {
    return a.layout_ == b.layout_ && a.data_ == b.data_;
  }

 private:
  BlockLayout layout_;
  std::vector<double> data_;
};

struct Norms {
  double norm = 0.0;                  // Euclidean norm of the whole vector
  std::vector<double> block_sq;       // per-block squared norms
};

// Contiguous slice for block i (read-only view).
std::span<const double> block_view(const BlockVector& v, int i);

// Block i becomes v_i + coeff * g; all other blocks are bitwise unchanged.
void block_axpy_inplace(BlockVector& v, int i, double coeff, std::span<const double> g);

// Value-returning variant of block_axpy_inplace.
BlockVector block_axpy(const BlockVector& v, int i, double coeff, std::span<const double> g);

Norms norms(const BlockVector& v);

}  // namespace plnash
