#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "logtr/error.hpp"
#include "logtr/vdt.hpp"
#include "support/oracles.hpp"

using namespace logtr;

namespace {

// Pixel (r, c) of an m x n plane lands at output index (r_d + m_d * c_d)_d, where
// r_d and c_d are the mixed-radix digits of r and c (finest scale first).
std::vector<Index> pixel_to_vdt(Index r, Index c, const std::vector<Index>& rows,
                                const std::vector<Index>& cols) {
  std::vector<Index> out;
  for (Index d = 0; d < rows.size(); ++d) {
    const Index rd = r % rows[d];
    const Index cd = c % cols[d];
    r /= rows[d];
    c /= cols[d];
    out.push_back(rd + rows[d] * cd);
  }
  return out;
}

}  // namespace

TEST_CASE("256x256x3 image with 2^8 factors becomes a ninth-order 4x...x4x3 tensor") {
  const std::vector<Index> f(8, 2);
  const auto plan = VdtPlan::for_source({256, 256, 3}, f, f);
  CHECK(plan.output_dims() == Dims{4, 4, 4, 4, 4, 4, 4, 4, 3});
  const auto img = oracle::random_tensor({256, 256, 3}, 1);
  const auto t = vdt_forward(img, plan);
  CHECK(t.order() == 9);
  CHECK(vdt_inverse(t, plan) == img);
}

TEST_CASE("single scale is a plain reshape") {
  const auto src = oracle::random_tensor({6, 5, 2}, 2);
  const auto plan = VdtPlan::for_source(src.dims(), {6}, {5});
  const auto t = vdt_forward(src, plan);
  CHECK(t.dims() == Dims{30, 2});
  CHECK(t == reshape(src, {30, 2}));
  CHECK(vdt_inverse(t, plan) == src);
}

TEST_CASE("4x4 matrix with 2x2 factors follows the pixel coordinate map") {
  const auto src = oracle::ramp({4, 4});
  const std::vector<Index> rows{2, 2}, cols{2, 2};
  const auto plan = VdtPlan::for_source(src.dims(), rows, cols);
  const auto t = vdt_forward(src, plan);
  CHECK(t.dims() == Dims{4, 4});
  for (Index r = 0; r < 4; ++r) {
    for (Index c = 0; c < 4; ++c) {
      const auto idx = pixel_to_vdt(r, c, rows, cols);
      CHECK(t(idx) == src.at({r, c}));
    }
  }
  // Mode 0 indexes the finest 2x2 patch: pixels (0,0),(1,0),(0,1),(1,1).
  CHECK(t.at({0, 0}) == src.at({0, 0}));
  CHECK(t.at({1, 0}) == src.at({1, 0}));
  CHECK(t.at({2, 0}) == src.at({0, 1}));
  CHECK(t.at({3, 0}) == src.at({1, 1}));
  CHECK(t.at({0, 1}) == src.at({2, 0}));
}

TEST_CASE("coordinate map with unequal factors and trailing modes") {
  const auto src = oracle::random_tensor({12, 6, 2}, 3);
  const std::vector<Index> rows{3, 4}, cols{2, 3};
  const auto t = vdt_forward(src, VdtPlan::for_source(src.dims(), rows, cols));
  CHECK(t.dims() == Dims{6, 12, 2});
  for (Index r = 0; r < 12; ++r) {
    for (Index c = 0; c < 6; ++c) {
      for (Index p = 0; p < 2; ++p) {
        auto idx = pixel_to_vdt(r, c, rows, cols);
        idx.push_back(p);
        CHECK(t(idx) == src.at({r, c, p}));
      }
    }
  }
}

TEST_CASE("vdt_inverse") {
  SUBCASE("roundtrip on 16x16x3") {
    const auto src = oracle::random_tensor({16, 16, 3}, 4);
    CHECK_THROWS_AS(VdtPlan::for_source(src.dims(), {2, 2, 2, 2}, {4, 4}), ArgumentError);
    const auto ok = VdtPlan::for_source(src.dims(), {4, 4}, {2, 8});
    CHECK(vdt_inverse(vdt_forward(src, ok), ok) == src);
  }
  SUBCASE("zero tensor") {
    const auto plan = VdtPlan::for_source({8, 8}, {2, 4}, {4, 2});
    CHECK(vdt_inverse(DenseTensor(plan.output_dims()), plan) == DenseTensor({8, 8}));
  }
  SUBCASE("video with pre-permutation [1,4,3,2]") {
    const auto video = oracle::random_tensor({12, 8, 3, 6}, 5);
    const std::vector<Index> pre{0, 3, 2, 1};
    const auto plan = VdtPlan::for_source(video.dims(), {3, 4}, {2, 3}, pre);
    CHECK(plan.arranged_source_dims() == Dims{12, 6, 3, 8});
    CHECK(plan.output_dims() == Dims{6, 12, 3, 8});
    const auto t = vdt_forward(video, plan);
    CHECK(vdt_inverse(t, plan) == video);
  }
  SUBCASE("shape mismatch") {
    const auto plan = VdtPlan::for_source({8, 8}, {2, 4}, {4, 2});
    CHECK_THROWS_AS(vdt_inverse(DenseTensor({4, 16}), plan), ShapeError);
  }
}

TEST_CASE("factorization mismatch is rejected") {
  CHECK_THROWS_AS(VdtPlan::for_source({16, 16, 3}, {4, 4}, {4, 2}), ShapeError);
  CHECK_THROWS_AS(VdtPlan::for_source({16, 16}, {4, 4}, {16}), ArgumentError);
  const auto plan = VdtPlan::for_source({16, 16, 3}, {4, 4}, {4, 4});
  CHECK_THROWS_AS(vdt_forward(DenseTensor({16, 8, 3}), plan), ShapeError);
}

TEST_CASE("random plans roundtrip and preserve values") {
  std::mt19937_64 rng(99);
  const std::vector<std::vector<Index>> factorings{{12}, {3, 4}, {2, 2, 3}, {4, 3}, {2, 3, 2}};
  for (int trial = 0; trial < 40; ++trial) {
    const auto& rows = factorings[rng() % factorings.size()];
    const auto& cols = factorings[rng() % factorings.size()];
    Dims dims{12, 12};
    for (Index s = 0, extra = rng() % 3; s < extra; ++s) dims.push_back(1 + rng() % 3);
    std::vector<Index> rows_q = rows, cols_q = cols;
    // Equal scale counts: pad the shorter list with unit factors.
    while (rows_q.size() < cols_q.size()) rows_q.push_back(1);
    while (cols_q.size() < rows_q.size()) cols_q.push_back(1);

    const auto src = oracle::random_tensor(dims, 1000 + trial);
    const auto plan = VdtPlan::for_source(dims, rows_q, cols_q);
    const auto t = vdt_forward(src, plan);
    CHECK(vdt_inverse(t, plan) == src);
    CHECK(t.frobenius_norm() == doctest::Approx(src.frobenius_norm()).epsilon(1e-14));

    auto a = src.values();
    auto b = t.values();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}

TEST_CASE("parse_factors") {
  CHECK(parse_factors("4x4x4x4") == std::vector<Index>{4, 4, 4, 4});
  CHECK(parse_factors("6") == std::vector<Index>{6});
  CHECK(parse_factors("1,4,3,2") == std::vector<Index>{1, 4, 3, 2});
  CHECK_THROWS_AS(parse_factors(""), ArgumentError);
  CHECK_THROWS_AS(parse_factors("4x"), ArgumentError);
  CHECK_THROWS_AS(parse_factors("4xa"), ArgumentError);
  CHECK_THROWS_AS(parse_factors("0x4"), ArgumentError);
}
