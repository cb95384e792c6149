#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "signet/partition.hpp"

namespace {

using namespace signet;

TEST(Partition, GeometryBasics) {
  const GridPartition coarse(1.0L, 3, Level::coarse, 2);
  EXPECT_EQ(coarse.cells_per_axis(), 3);
  EXPECT_NEAR((double)coarse.side(), 2.0 / 3.0, 1e-18);
  const GridPartition fine(1.0L, 3, Level::fine, 2);
  EXPECT_EQ(fine.cells_per_axis(), 9);
  EXPECT_NEAR((double)fine.side(), 2.0 / 9.0, 1e-18);
}

TEST(Partition, HalfOpenMembership) {
  const GridPartition fine(1.0L, 2, Level::fine, 1);
  EXPECT_TRUE(fine.contains_point({-1.0L}));   // left edge included
  EXPECT_FALSE(fine.contains_point({1.0L}));   // right edge excluded
  EXPECT_TRUE(fine.contains_point({0.999999L}));
  EXPECT_FALSE(fine.contains_point({-1.0000001L}));
}

TEST(Partition, LocateAndCornerAreConsistent) {
  const GridPartition fine(1.0L, 3, Level::fine, 2);
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(-0.999, 0.999);
  for (int t = 0; t < 2000; ++t) {
    const std::vector<ld> x = {(ld)u(rng), (ld)u(rng)};
    const auto ref = fine.locate(x);
    const std::vector<ld> c = fine.corner(ref);
    for (int j = 0; j < 2; ++j) {
      EXPECT_LE((double)c[j], (double)x[j]);
      EXPECT_LT((double)x[j], (double)(c[j] + fine.side()));
    }
  }
}

TEST(Partition, InteriorDistance) {
  const GridPartition fine(1.0L, 2, Level::fine, 1);  // cells of width 1/2
  // Center of the cell [0, 0.5): distance 1/4 from both faces.
  EXPECT_NEAR((double)fine.interior_distance({0.25L}), 0.25, 1e-18);
  EXPECT_NEAR((double)fine.interior_distance({0.01L}), 0.01, 1e-15);
  EXPECT_NEAR((double)fine.interior_distance({0.49L}), 0.01, 1e-15);
}

TEST(Partition, ShiftedCopiesCoverAllMasks) {
  for (int d : {1, 2}) {
    const auto grids = shifted_partitions(1.0L, 3, d, Level::fine);
    EXPECT_EQ((int)grids.size(), 1 << d);
    // Shift per masked coordinate equals half a fine cell.
    const ld h = shifted_partition(1.0L, 3, d, Level::fine,
                                   std::vector<int>(d, 1))
                     .shift[0] -
                 grids[0].shift[0];
    EXPECT_NEAR((double)h, 1.0 / 9.0, 1e-18);
  }
}

TEST(Partition, HatWeightShape) {
  const GridPartition fine(1.0L, 2, Level::fine, 1);  // faces at -1,-0.5,0,0.5
  // Peak one at cell centers, zero on faces, linear in between.
  EXPECT_NEAR((double)bspline_weight(fine, {-0.75L}), 1.0, 1e-18);
  EXPECT_NEAR((double)bspline_weight(fine, {0.25L}), 1.0, 1e-18);
  EXPECT_NEAR((double)bspline_weight(fine, {0.0L}), 0.0, 1e-18);
  EXPECT_NEAR((double)bspline_weight(fine, {0.5L}), 0.0, 1e-18);
  EXPECT_NEAR((double)bspline_weight(fine, {0.125L}), 0.5, 1e-18);
  EXPECT_NEAR((double)bspline_weight(fine, {2.0L}), 0.0, 1e-18);  // outside
  // Tensor product in d=2.
  const GridPartition f2(1.0L, 2, Level::fine, 2);
  EXPECT_NEAR((double)bspline_weight(f2, {0.125L, -0.75L}), 0.5, 1e-18);
  EXPECT_NEAR((double)bspline_weight(f2, {0.125L, 0.125L}), 0.25, 1e-18);
}

TEST(Partition, ShiftedHatsSumToOne) {
  std::mt19937_64 rng(7);
  for (int d : {1, 2}) {
    for (int M : {2, 4}) {
      const auto grids = shifted_partitions(1.0L, M, d, Level::fine);
      std::uniform_real_distribution<double> u(-0.5, 0.5);
      for (int t = 0; t < 2000; ++t) {
        std::vector<ld> x(d);
        for (int j = 0; j < d; ++j) x[j] = (ld)u(rng);
        ld sum = 0.0L;
        for (const GridPartition& g : grids) sum += bspline_weight(g, x);
        EXPECT_NEAR((double)sum, 1.0, 1e-15);
      }
    }
  }
}

TEST(Partition, FineOffsetsAreParentIndependent) {
  // The position of fine cell k inside its coarse parent does not depend on
  // which parent: offsets form the same M^d-element set for every parent.
  const GridPartition coarse(1.0L, 3, Level::coarse, 1);
  const GridPartition fine(1.0L, 3, Level::fine, 1);
  for (int parent = 0; parent < 3; ++parent) {
    const ld parent_lo = -1.0L + parent * coarse.side();
    for (int k = 0; k < 3; ++k) {
      const ld fine_lo = parent_lo + k * fine.side();
      const auto ref = fine.locate({fine_lo + fine.side() / 2});
      const ld offset = fine.corner(ref)[0] - parent_lo;
      EXPECT_NEAR((double)offset, (double)(k * fine.side()), 1e-15);
    }
  }
}

}  // namespace
