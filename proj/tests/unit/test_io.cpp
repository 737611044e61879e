#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "logtr/error.hpp"
#include "logtr/image_io.hpp"
#include "logtr/tensor_file.hpp"
#include "support/oracles.hpp"

using namespace logtr;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "logtr_test_io";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("tensor file roundtrip") {
  const auto t = oracle::random_tensor({3, 4, 2, 5}, 1);
  const auto bytes = encode_tensor(t);
  CHECK(bytes.size() == tensor_file_size(t.dims()));
  CHECK(decode_tensor(bytes) == t);

  const auto path = scratch_dir() / "t.ltrt";
  save_tensor(path, t);
  CHECK(fs::file_size(path) == 16 + 8 * 4 + 8 * 120);
  CHECK(load_tensor(path) == t);
}

TEST_CASE("tensor file header layout") {
  const auto bytes = encode_tensor(oracle::ramp({2, 3}));
  CHECK(bytes.substr(0, 4) == "LTRT");
  const unsigned char expected[] = {1, 0, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0,
                                    3, 0, 0, 0, 0, 0, 0, 0};
  CHECK(std::memcmp(bytes.data() + 4, expected, sizeof(expected)) == 0);
  double first = 0.0;
  std::memcpy(&first, bytes.data() + 32, 8);
  CHECK(first == 1.0);
  CHECK(tensor_file_size({256, 256, 31}) == 8ull * 2031616 + 40);
}

TEST_CASE("tensor file errors") {
  const auto good = encode_tensor(oracle::ramp({2, 2}));
  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode_tensor(bad_magic), IoError);
  auto bad_version = good;
  bad_version[4] = 2;
  CHECK_THROWS_AS(decode_tensor(bad_version), IoError);
  auto bad_tag = good;
  bad_tag[12] = 7;
  CHECK_THROWS_AS(decode_tensor(bad_tag), IoError);
  CHECK_THROWS_AS(decode_tensor(good.substr(0, good.size() - 1)), IoError);
  CHECK_THROWS_AS(decode_tensor(good.substr(0, 10)), IoError);
  CHECK_THROWS_AS(decode_tensor(good + "x"), IoError);
  CHECK_THROWS_AS(load_tensor(scratch_dir() / "missing.ltrt"), IoError);
}

TEST_CASE("png roundtrip") {
  const auto dir = scratch_dir();
  DenseTensor red({2, 2, 3});
  for (Index k = 0; k < 4; ++k) red[k] = 255.0;
  save_image(dir / "red.png", red);
  const auto back = load_image(dir / "red.png");
  CHECK(back.dims() == Dims{2, 2, 3});
  CHECK(back == red);

  DenseTensor gray({3, 5});
  for (Index k = 0; k < gray.size(); ++k) gray[k] = 17.0 * k;
  save_image(dir / "gray.png", gray);
  const auto g = load_image(dir / "gray.png");
  CHECK(g.dims() == Dims{3, 5, 1});
  CHECK(g.values() == gray.values());

  DenseTensor odd({2, 2, 3});
  odd[0] = -5.0;
  odd[1] = 300.0;
  odd[2] = 12.4;
  odd[3] = 12.6;
  save_image(dir / "clamp.png", odd);
  const auto c = load_image(dir / "clamp.png");
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 255.0);
  CHECK(c[2] == 12.0);
  CHECK(c[3] == 13.0);
}

TEST_CASE("png errors") {
  const auto dir = scratch_dir();
  CHECK_THROWS_AS(save_image(dir / "bad.png", DenseTensor({2, 2, 2})), ShapeError);
  std::ofstream(dir / "junk.png") << "not a png";
  CHECK_THROWS_AS(load_image(dir / "junk.png"), IoError);
  CHECK_THROWS_AS(load_image(dir / "nope.png"), IoError);
}

TEST_CASE("test image is 256x256 RGB") {
  const auto img = load_image(fs::path(LOGTR_TEST_DATA) / "astronaut_256.png");
  CHECK(img.dims() == Dims{256, 256, 3});
}
