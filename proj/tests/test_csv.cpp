#include <doctest.h>

#include <centrifugal/csv.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace centrifugal;

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(2.0 / 3.0 * 1e-20) == "6.66666666667e-21");
  CHECK(format_number(-1234567.891) == "-1234567.891");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(INFINITY) == "inf");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_number(0.0) == "0");
  CHECK(std::stod(format_number(M_PI)) == doctest::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("table layout") {
  CsvTable t({"a", "b"});
  t.row({"1", "2"}).row({"3", "4"});
  CHECK(t.size() == 2);
  CHECK(t.str() == "a,b\n1,2\n3,4\n");
  CHECK_THROWS_AS(t.row({"1"}), std::invalid_argument);
  CHECK_THROWS_AS(t.row({"1", "2", "3"}), std::invalid_argument);
  CHECK(t.size() == 2);

  std::ostringstream out;
  CsvTable({"only"}).write(out);
  CHECK(out.str() == "only\n");
}

TEST_CASE("atomic write") {
  const auto dir = std::filesystem::temp_directory_path() / "centrifugal_csv_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.csv";
  write_file_atomic(path.string(), "x\n1\n");
  write_file_atomic(path.string(), "y\n2\n");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "y\n2\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);
  std::filesystem::remove_all(dir);

  CHECK_THROWS(write_file_atomic("/nonexistent/dir/out.csv", "x\n"));
}
