#include "plnash/blockvec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace plnash {

BlockLayout::BlockLayout(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw std::invalid_argument("BlockLayout: need at least one block");
  }
  offsets_.reserve(dims_.size());
  for (int d : dims_) {
    if (d < 1) {
      throw std::invalid_argument("BlockLayout: every block dimension must be >= 1");
    }
    offsets_.push_back(total_);
    total_ += d;
  }
}

int BlockLayout::block_dim(int i) const {
  if (i < 0 || i >= n()) {
    throw std::out_of_range("BlockLayout: block index " + std::to_string(i) + " out of range");
  }
  return dims_[static_cast<std::size_t>(i)];
}

int BlockLayout::block_offset(int i) const {
  if (i < 0 || i >= n()) {
    throw std::out_of_range("BlockLayout: block index " + std::to_string(i) + " out of range");
  }
  return offsets_[static_cast<std::size_t>(i)];
}

BlockVector::BlockVector(BlockLayout layout)
    : layout_(std::move(layout)),
      data_(static_cast<std::size_t>(layout_.total_dim()), 0.0) {}

BlockVector::BlockVector(BlockLayout layout, std::vector<double> data)
    : layout_(std::move(layout)), data_(std::move(data)) {
  if (static_cast<int>(data_.size()) != layout_.total_dim()) {
    throw std::invalid_argument("BlockVector: data length does not match layout.total_dim");
  }
}

std::span<const double> BlockVector::block(int i) const {
  return std::span<const double>(data_).subspan(
      static_cast<std::size_t>(layout_.block_offset(i)),
      static_cast<std::size_t>(layout_.block_dim(i)));
}

std::span<double> BlockVector::block(int i) {
  return std::span<double>(data_).subspan(
      static_cast<std::size_t>(layout_.block_offset(i)),
      static_cast<std::size_t>(layout_.block_dim(i)));
}

bool BlockVector::all_finite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

std::span<const double> block_view(const BlockVector& v, int i) { return v.block(i); }

void block_axpy_inplace(BlockVector& v, int i, double coeff, std::span<const double> g) {
  auto b = v.block(i);
  if (g.size() != b.size()) {
    throw std::invalid_argument("block_axpy: update vector length does not match block dimension");
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    b[j] += coeff * g[j];
  }
}

BlockVector block_axpy(const BlockVector& v, int i, double coeff, std::span<const double> g) {
  BlockVector out = v;
  block_axpy_inplace(out, i, coeff, g);
  return out;
}

Norms norms(const BlockVector& v) {
  Norms out;
  out.block_sq.reserve(static_cast<std::size_t>(v.layout().n()));
  double total = 0.0;
  for (int i = 0; i < v.layout().n(); ++i) {
    double s = 0.0;
    for (double x : v.block(i)) s += x * x;
    out.block_sq.push_back(s);
    total += s;
  }
  out.norm = std::sqrt(total);
  return out;
}

}  // namespace plnash
