#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "optrig/fixtures.hpp"
#include "optrig/io.hpp"
#include "optrig/settings.hpp"
#include "optrig/validate.hpp"

using namespace optrig;

namespace
{

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

double random_double(std::mt19937_64 &rng)
{
  // Uniform bit patterns cover subnormals and extreme exponents; non-finite
  // patterns are redrawn.
  for (;;)
  {
    const std::uint64_t bits = rng();
    double d;
    std::memcpy(&d, &bits, sizeof d);
    if (std::isfinite(d))
    {
      return d;
    }
  }
}

}  // namespace

TEST(MatrixFormat, BitExactRoundTrip)
{
  std::mt19937_64 rng(51);
  for (int k = 0; k < 200; k++)
  {
    const Index n = 1 + k % 5;
    CMatrix m(n, n);
    for (Index i = 0; i < n; i++)
    {
      for (Index j = 0; j < n; j++)
      {
        m(i, j) = Complex(random_double(rng), random_double(rng));
      }
    }
    m(0, 0) = Complex(-0.0, std::numeric_limits<double>::denorm_min());
    const OperatorOnSpace a(SpaceSpec(n, 2.0 + 0.1 * k), m);
    const auto text = io::dump(io::to_json(a));
    const auto back = io::operator_from_json(io::parse_text(text, "test"));
    ASSERT_EQ(back.dim(), n);
    EXPECT_TRUE(same_bits(back.p(), a.p()));
    for (Index i = 0; i < n; i++)
    {
      for (Index j = 0; j < n; j++)
      {
        EXPECT_TRUE(same_bits(back.entries()(i, j).real(), m(i, j).real()));
        EXPECT_TRUE(same_bits(back.entries()(i, j).imag(), m(i, j).imag()));
      }
    }
  }
}

TEST(MatrixFormat, RowMajorLayout)
{
  const auto a = io::operator_from_json(io::parse_text(
      R"({"dim": 2, "p": 2, "entries": [[1, 0], [2, 0], [3, 0], [0, 4]]})", "test"));
  EXPECT_EQ(a.entries()(0, 1), Complex(2.0));
  EXPECT_EQ(a.entries()(1, 0), Complex(3.0));
  EXPECT_EQ(a.entries()(1, 1), Complex(0.0, 4.0));
}

TEST(MatrixFormat, ParseErrors)
{
  const char *bad[] = {
      "not json",
      R"({"p": 2, "entries": []})",
      R"({"dim": 2, "p": 2, "entries": [[1, 0]]})",
      R"({"dim": 1, "p": 1, "entries": [[1, 0]]})",
      R"({"dim": 1, "p": 2, "entries": [[1]]})",
      R"({"dim": 1, "p": 2, "entries": [["x", 0]]})",
      R"({"dim": 1, "p": 2, "entries": [["inf", 0]]})",
      R"({"dim": -1, "p": 2, "entries": []})",
      R"({"dim": 1.5, "p": 2, "entries": []})",
  };
  for (const char *text : bad)
  {
    EXPECT_THROW(io::operator_from_json(io::parse_text(text, "test")), ParseError) << text;
  }
}

TEST(VectorFormat, RoundTrip)
{
  CVector v(3);
  v << Complex(0.1, -0.2), Complex(1e-300, 3.0), Complex(-7.0, 0.0);
  const Vector x(SpaceSpec(3, 3.0), v);
  const auto back = io::vector_from_json(io::parse_text(io::dump(io::to_json(x)), "test"));
  EXPECT_EQ(back.coords(), v);
  EXPECT_EQ(back.space(), x.space());
  EXPECT_THROW(io::vector_from_json(io::parse_text(R"({"dim": 2, "p": 2, "coords": [[1, 0]]})", "t")), ParseError);
}

TEST(Numbers, NonFiniteAsStrings)
{
  EXPECT_EQ(io::number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(io::number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(io::csv_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_TRUE(std::isinf(io::read_number(io::Json("inf"), "t")));
  EXPECT_EQ(io::csv_number(0.1), "0.1");
}

TEST(Reports, FixedKeyOrder)
{
  const auto d = complementarity_oracle(OperatorOnSpace::identity(SpaceSpec(2, 2.0)));
  const auto j = io::to_json(d);
  std::vector<std::string> keys;
  for (const auto &[k, v] : j.items())
  {
    keys.push_back(k);
  }
  ASSERT_GE(keys.size(), 2u);
  EXPECT_EQ(keys[0], "complementary");
  EXPECT_EQ(keys[1], "rank");
}

TEST(Settings, OverridesAndErrors)
{
  Settings s;
  apply_override(s, "optimizer.n_starts=8");
  apply_override(s, "amplitude.margin_threshold=0.1");
  apply_override(s, "iteration.n_max=50");
  apply_override(s, "rank.tol_factor=10");
  EXPECT_EQ(s.optimizer.n_starts, 8);
  EXPECT_EQ(s.amplitude.margin_threshold, 0.1);
  EXPECT_EQ(s.iteration.n_max, 50);
  EXPECT_EQ(s.amplitude.tol_factor, 10.0);
  EXPECT_THROW(apply_override(s, "optimizer.n_starts"), ParseError);
  EXPECT_THROW(apply_override(s, "optimizer.n_starts=abc"), ParseError);
  EXPECT_THROW(apply_override(s, "optimizer.n_starts=1.5"), ParseError);
  EXPECT_THROW(apply_override(s, "nope=1"), ParseError);
  const auto j = settings_json(s);
  EXPECT_EQ(j["optimizer.n_starts"], 8);
  EXPECT_TRUE(j.contains("optimizer.seed"));
}

TEST(Suite, WriteAndLoadPreservesFixtures)
{
  const auto dir = std::filesystem::temp_directory_path() / "optrig-suite-roundtrip";
  std::filesystem::remove_all(dir);
  const auto curated = fixtures::curated_suite();
  write_suite(dir, curated);
  const auto loaded = load_suite(dir);
  ASSERT_EQ(loaded.size(), curated.size());
  for (std::size_t i = 0; i < curated.size(); i++)
  {
    EXPECT_EQ(loaded[i].name, curated[i].name);
    EXPECT_EQ(loaded[i].op.entries(), curated[i].entries);
    EXPECT_EQ(loaded[i].op.p(), curated[i].p);
    EXPECT_EQ(loaded[i].expected_complementary, curated[i].expected_complementary);
  }
  std::filesystem::remove_all(dir);
}

TEST(Suite, BundledDirectoryMatchesCuratedFixtures)
{
  const auto loaded = load_suite(OPTRIG_SUITE_DIR);
  const auto curated = fixtures::curated_suite();
  ASSERT_EQ(loaded.size(), curated.size());
  for (std::size_t i = 0; i < curated.size(); i++)
  {
    EXPECT_EQ(loaded[i].name, curated[i].name);
    EXPECT_EQ(loaded[i].op.entries(), curated[i].entries) << curated[i].name;
  }
}
