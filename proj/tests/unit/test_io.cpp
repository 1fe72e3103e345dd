#include <doctest.h>

#include <random>
#include <sstream>
#include <string>

#include "vibropol/errors.hpp"
#include "vibropol/io.hpp"

using namespace vibropol;

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(1740.0) == "1740");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.5e-12) == "-2.5e-12");
  CHECK(format_double(std::nan("")) == "nan");
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(u(rng)) % 30);
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("spectrum csv layout") {
  Spectrum s;
  s.grid = {1000.0, 1001.0, 0.5};
  s.T = {0.1, 0.2, 0.3};
  s.R = {0.5, 0.5, 0.5};
  s.A = {0.4, 0.3, 0.2};
  std::ostringstream out;
  write_spectrum_csv(out, s);
  CHECK(out.str() == "k_cm1,T,R,A\n1000,0.1,0.5,0.4\n1000.5,0.2,0.5,0.3\n1001,0.3,0.5,0.2\n");
}

TEST_CASE("csv reader") {
  std::istringstream in("# measured\n\nk_cm1,T,R,A\n1000,0.1,0.5,0.4\n# mid comment\n1001,0.3,0.5,0.2\n");
  const CsvTable t = read_csv(in);
  CHECK(t.header == std::vector<std::string>{"k_cm1", "T", "R", "A"});
  CHECK(t.rows() == 2);
  CHECK(target_from_csv(t, Channel::R).values == std::vector<double>{0.5, 0.5});
  CHECK(target_from_csv(t, Channel::T).k == std::vector<double>{1000.0, 1001.0});

  std::istringstream two("1500, 0.25\n1501, 0.5\n");
  const CsvTable u = read_csv(two);
  CHECK(u.header.empty());
  CHECK(target_from_csv(u, Channel::A).values == std::vector<double>{0.25, 0.5});

  std::istringstream bad("k,v\n1,2\n3,x\n");
  try {
    read_csv(bad, "m.csv");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("m.csv:3") != std::string::npos);
  }
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(read_csv(ragged), ConfigError);
}

TEST_CASE("round trip of a spectrum through csv") {
  Spectrum s;
  s.grid = {400.0, 410.0, 1.0};
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    s.T.push_back(1.0 / 3.0 + i * 1e-17);
    s.R.push_back(std::sqrt(2.0) / (i + 1));
    s.A.push_back(1.0 - s.T.back() - s.R.back());
  }
  std::ostringstream out;
  write_spectrum_csv(out, s);
  std::istringstream in(out.str());
  const CsvTable t = read_csv(in);
  CHECK(t.columns[1] == s.T);
  CHECK(t.columns[2] == s.R);
  CHECK(t.columns[3] == s.A);
}
