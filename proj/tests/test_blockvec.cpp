#include "plnash/blockvec.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

namespace plnash {
namespace {

BlockVector make_vec(std::vector<int> dims, std::vector<double> data) {
  return BlockVector(BlockLayout(std::move(dims)), std::move(data));
}

TEST(BlockLayoutTest, DimsAndOffsets) {
  const BlockLayout layout({2, 3, 1});
  EXPECT_EQ(layout.n(), 3);
  EXPECT_EQ(layout.total_dim(), 6);
  EXPECT_EQ(layout.block_dim(0), 2);
  EXPECT_EQ(layout.block_dim(1), 3);
  EXPECT_EQ(layout.block_dim(2), 1);
  EXPECT_EQ(layout.block_offset(0), 0);
  EXPECT_EQ(layout.block_offset(1), 2);
  EXPECT_EQ(layout.block_offset(2), 5);
}

TEST(BlockLayoutTest, Equality) {
  EXPECT_EQ(BlockLayout({1, 1}), BlockLayout({1, 1}));
  EXPECT_FALSE(BlockLayout({1, 1}) == BlockLayout({2, 1}));
}

TEST(BlockVectorTest, BlockViewsCoverFlatStorage) {
  const BlockVector v = make_vec({2, 3, 1}, {1, 2, 3, 4, 5, 6});
  EXPECT_EQ(v.size(), 6);
  const auto b0 = v.block(0);
  const auto b1 = v.block(1);
  const auto b2 = v.block(2);
  ASSERT_EQ(b0.size(), 2u);
  ASSERT_EQ(b1.size(), 3u);
  ASSERT_EQ(b2.size(), 1u);
  EXPECT_DOUBLE_EQ(b0[0], 1.0);
  EXPECT_DOUBLE_EQ(b0[1], 2.0);
  EXPECT_DOUBLE_EQ(b1[0], 3.0);
  EXPECT_DOUBLE_EQ(b1[2], 5.0);
  EXPECT_DOUBLE_EQ(b2[0], 6.0);
  EXPECT_DOUBLE_EQ(block_view(v, 1)[1], 4.0);
}

TEST(BlockVectorTest, MutableBlockWritesThrough) {
  BlockVector v = make_vec({2, 2}, {0, 0, 0, 0});
  v.block(1)[0] = 7.5;
  EXPECT_DOUBLE_EQ(v[2], 7.5);
}

TEST(BlockVectorTest, AxpyUpdatesOnlyTheTargetBlock) {
  const BlockVector v = make_vec({2, 2}, {1, 2, 3, 4});
  const std::vector<double> g = {10, 20};
  const BlockVector w = block_axpy(v, 1, -0.5, g);
  // Untouched block is bitwise identical.
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  EXPECT_DOUBLE_EQ(w[1], 2.0);
  EXPECT_DOUBLE_EQ(w[2], 3.0 - 0.5 * 10.0);
  EXPECT_DOUBLE_EQ(w[3], 4.0 - 0.5 * 20.0);
  // Source vector is unchanged.
  EXPECT_DOUBLE_EQ(v[2], 3.0);
}

TEST(BlockVectorTest, AxpyInPlaceMatchesValueForm) {
  BlockVector v = make_vec({1, 2}, {5, -1, 2});
  const std::vector<double> g = {4, -6};
  const BlockVector expected = block_axpy(v, 1, 0.25, g);
  block_axpy_inplace(v, 1, 0.25, g);
  EXPECT_EQ(v, expected);
}

TEST(BlockVectorTest, NormsPerBlockAndTotal) {
  const BlockVector v = make_vec({2, 1}, {3, 4, 12});
  const Norms nm = norms(v);
  ASSERT_EQ(nm.block_sq.size(), 2u);
  EXPECT_DOUBLE_EQ(nm.block_sq[0], 25.0);
  EXPECT_DOUBLE_EQ(nm.block_sq[1], 144.0);
  EXPECT_DOUBLE_EQ(nm.norm, 13.0);
}

TEST(BlockVectorTest, AllFinite) {
  EXPECT_TRUE(make_vec({2}, {1.0, -2.0}).all_finite());
  EXPECT_FALSE(make_vec({2}, {1.0, std::numeric_limits<double>::quiet_NaN()}).all_finite());
  EXPECT_FALSE(make_vec({2}, {std::numeric_limits<double>::infinity(), 0.0}).all_finite());
}

TEST(BlockVectorTest, EqualityNeedsSameLayoutAndData) {
  EXPECT_EQ(make_vec({1, 1}, {1, 2}), make_vec({1, 1}, {1, 2}));
  EXPECT_FALSE(make_vec({1, 1}, {1, 2}) == make_vec({2}, {1, 2}));
  EXPECT_FALSE(make_vec({1, 1}, {1, 2}) == make_vec({1, 1}, {1, 3}));
}

}  // namespace
}  // namespace plnash
