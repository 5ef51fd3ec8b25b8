#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "optrig/fixtures.hpp"
#include "optrig/io.hpp"
#include "optrig/validate.hpp"

namespace fs = std::filesystem;
using namespace optrig;

namespace
{

const char *const kLight =
    " --set optimizer.n_starts=16 --set amplitude.n_random=4 --set amplitude.n_theta=8"
    " --set amplitude.theta_refine_iters=2";

class Cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("optrig-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_matrix(const std::string &name, const CMatrix &m, double p = 2.0)
  {
    const auto path = dir_ / (name + ".json");
    io::write_json(path, io::to_json(OperatorOnSpace(SpaceSpec(m.rows(), p), m)));
    return path;
  }

  /// Runs the CLI and returns its exit code; the report lands in out.json.
  int run(const std::string &args, const std::string &out = "out.json")
  {
    const std::string cmd = std::string(OPTRIG_CLI_PATH) + " --out " + (dir_ / out).string() + " " + args +
                            " 2>" + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  io::Json report(const std::string &out = "out.json") { return io::read_json_file(dir_ / out); }

  std::string text(const std::string &name)
  {
    std::ifstream in(dir_ / name);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  fs::path dir_;
};

CMatrix mat2(Complex a, Complex b, Complex c, Complex d)
{
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_F(Cli, DecomposeProjection)
{
  const auto a = write_matrix("a", mat2(1, 0, 0, 0));
  ASSERT_EQ(run("decompose --matrix " + a.string()), 0);
  const auto r = report();
  EXPECT_EQ(r["manifest"]["command"], "decompose");
  EXPECT_TRUE(r["result"]["complementary"].get<bool>());
  EXPECT_EQ(r["result"]["rank"], 1);
}

TEST_F(Cli, AngleOfIdentityIsZero)
{
  const auto a = write_matrix("a", mat2(1, 0, 0, 1), 3.0);
  ASSERT_EQ(run("angle --matrix " + a.string()), 0);
  EXPECT_NEAR(report()["result"]["cosine"].get<double>(), 1.0, 1e-9);
}

TEST_F(Cli, NilpotentAmplitudeExitsTwo)
{
  const auto a = write_matrix("a", mat2(0, 1, 0, 0));
  EXPECT_EQ(run(std::string("amplitude --matrix ") + a.string() + kLight), 2);
  const auto r = report();
  EXPECT_EQ(r["result"]["classification"], "AT_PI");
  EXPECT_LE(r["result"]["best_cosine"].get<double>(), -0.999);
  EXPECT_EQ(text("out.rays.csv").rfind("theta,cosine,angle\n", 0), 0u);
}

TEST_F(Cli, CertifyInvertibleMatchesDirectSolve)
{
  const auto a = write_matrix("a", mat2(3, 1, 0, 2));
  const auto t = write_matrix("t", mat2(1, 0, 0, 1));
  const auto y = dir_ / "y.json";
  CVector v(2);
  v << 1.0, Complex(0.0, 2.0);
  io::write_json(y, io::to_json(Vector(SpaceSpec(2, 2.0), v)));
  ASSERT_EQ(run("certify-invertible --matrix " + a.string() + " --aux " + t.string() + " --t0 1 --rhs " + y.string()),
            0);
  EXPECT_LE(report()["result"]["relative_error_vs_direct"].get<double>(), 1e-8);
  EXPECT_FALSE(text("out.steps.csv").empty());
}

TEST_F(Cli, IterateWritesTrace)
{
  const auto a = write_matrix("a", mat2(1, 0, 0, 0.5));
  ASSERT_EQ(run("iterate --matrix " + a.string()), 0);
  const auto r = report();
  EXPECT_EQ(r["result"]["status"], "converged");
  EXPECT_TRUE(r["result"]["limit_matches_decomposition"].get<bool>());
  EXPECT_EQ(text("out.iterations.csv").rfind("n,residual,iterate_max_norm\n", 0), 0u);
}

TEST_F(Cli, ValidateSuiteIsDeterministic)
{
  const auto suite_dir = dir_ / "suite";
  auto curated = fixtures::curated_suite();
  curated.resize(4);
  write_suite(suite_dir, curated);
  const std::string args = std::string("validate-suite --dir ") + suite_dir.string() + kLight;
  // The manifest records the output path, so both runs write to the same one.
  ASSERT_EQ(run(args), 0);
  const std::string report_a = text("out.json");
  const std::string csv_a = text("out.summary.csv");
  fs::remove(dir_ / "out.json");
  fs::remove(dir_ / "out.summary.csv");
  ASSERT_EQ(run(args), 0);
  EXPECT_EQ(text("out.json"), report_a);
  EXPECT_EQ(text("out.summary.csv"), csv_a);
  EXPECT_EQ(report()["result"]["total"], 4);
}

TEST_F(Cli, ExitCodes)
{
  EXPECT_EQ(run("decompose --matrix " + (dir_ / "missing.json").string()), 3);
  EXPECT_EQ(report()["verdict"], "error");
  EXPECT_EQ(report()["error"]["exit_code"], 3);

  const auto a = write_matrix("a", mat2(1, 0, 0, 1));
  EXPECT_EQ(run("--set no.such.key=1 decompose --matrix " + a.string()), 3);
  EXPECT_EQ(run("decompose"), 3);

  // Both complementarity tests run; here they disagree at the default tolerance.
  const auto b = write_matrix("b", mat2(1, 0, 0, 1e-7));
  EXPECT_EQ(run("decompose --matrix " + b.string()), 4);
  EXPECT_EQ(report()["error"]["type"], "InternalInconsistency");
}
