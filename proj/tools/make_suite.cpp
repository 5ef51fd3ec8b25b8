// Writes the curated fixture suite as matrix files into a directory.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "optrig/fixtures.hpp"
#include "optrig/validate.hpp"

int main(int argc, char **argv)
{
  CLI::App app{"Write the curated suite as matrix files"};
  std::string dir = "suite";
  app.add_option("--dir", dir, "Target directory")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  try
  {
    const auto suite = optrig::fixtures::curated_suite();
    optrig::write_suite(dir, suite);
    std::cout << "wrote " << suite.size() << " matrices to " << dir << "\n";
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
