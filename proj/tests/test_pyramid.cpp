#include "doctest.h"
#include "flowparts/pyramid.hpp"

using namespace flowparts;

TEST_CASE("gaussian_pyramid: levels=1 returns the input unchanged") {
  Grid<float> img(13, 7);
  for (std::size_t i = 0; i < img.size(); ++i) img.v[i] = static_cast<float>(i) / 91.0f;
  const auto pyr = gaussian_pyramid(img, 1, 0.5);
  REQUIRE(pyr.size() == 1);
  CHECK(pyr[0].v == img.v);
}

TEST_CASE("gaussian_pyramid: dimensions follow round(dim * scale^i)") {
  const Grid<float> img(100, 80, 0.5f);
  const auto pyr = gaussian_pyramid(img, 3, 0.5);
  REQUIRE(pyr.size() == 3);
  CHECK(pyr[0].width == 100);
  CHECK(pyr[0].height == 80);
  CHECK(pyr[1].width == 50);
  CHECK(pyr[1].height == 40);
  CHECK(pyr[2].width == 25);
  CHECK(pyr[2].height == 20);
}

TEST_CASE("gaussian_pyramid: constant frames stay constant at every level") {
  const Grid<float> img(32, 24, 0.7f);
  const auto pyr = gaussian_pyramid(img, 4, 0.5);
  for (const auto& level : pyr)
    for (const float v : level.v) CHECK(v == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("gaussian_pyramid: stops before a dimension drops below min_dim") {
  const Grid<float> img(20, 20, 0.0f);
  // 20 -> 10 -> 5 -> 2.5: the fourth level would violate min_dim=5.
  const auto pyr = gaussian_pyramid(img, 8, 0.5, 5);
  REQUIRE(pyr.size() == 3);
  CHECK(pyr[2].width == 5);
}

TEST_CASE("gaussian_blur5: preserves constants and stays in range") {
  Grid<float> img(9, 9, 0.25f);
  const auto blurred = gaussian_blur5(img);
  for (const float v : blurred.v) CHECK(v == doctest::Approx(0.25));

  img.at(4, 4) = 1.0f;
  const auto spread = gaussian_blur5(img);
  CHECK(spread.at(4, 4) < 1.0f);
  CHECK(spread.at(4, 4) > 0.25f);
  CHECK(spread.at(3, 4) > 0.25f);
}

TEST_CASE("resample_bilinear: identity at equal size, constant preserved when scaling") {
  Grid<float> img(6, 4);
  for (std::size_t i = 0; i < img.size(); ++i) img.v[i] = static_cast<float>(i);
  const auto same = resample_bilinear(img, 6, 4);
  CHECK(same.v == img.v);

  const Grid<float> flat(10, 10, 0.6f);
  const auto up = resample_bilinear(flat, 17, 23);
  for (const float v : up.v) CHECK(v == doctest::Approx(0.6));
}
