#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "awmi/error.hpp"
#include "awmi/report.hpp"

namespace fs = std::filesystem;
using namespace awmi;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-7), "-2.5e-07");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  std::mt19937_64 g(1);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(static_cast<double>(g() >> 11), static_cast<int>(g() % 80) - 100);
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

TEST(Csv, Escaping) {
  CsvWriter w;
  w.metadata("tool x");
  w.header({"a", "b"});
  w.row({"plain", "has,comma"});
  w.row({"say \"hi\"", ""});
  EXPECT_EQ(w.str(), "# tool x\na,b\nplain,\"has,comma\"\n\"say \"\"hi\"\"\",\n");
}

TEST(WriteAtomic, ReplacesContents) {
  const fs::path dir = fs::temp_directory_path() / "awmi_unit_atomic";
  fs::create_directories(dir);
  const fs::path p = dir / "out.csv";
  write_atomic(p, "first\n");
  write_atomic(p, "second\n");
  std::stringstream ss;
  ss << std::ifstream(p).rdbuf();
  EXPECT_EQ(ss.str(), "second\n");
  EXPECT_FALSE(fs::exists(dir / "out.csv.partial"));
  EXPECT_THROW(write_atomic(dir / "missing_dir" / "x.csv", "x"), IoError);
}
