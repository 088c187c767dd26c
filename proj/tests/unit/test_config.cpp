#include "doctest.h"

#include <filesystem>
#include <string>

#include "helmkit/config.hpp"
#include "helmkit/output.hpp"
#include "helmkit/types.hpp"

using namespace helmkit;

TEST_CASE("defaults and a full file") {
  const auto c = parse_config_text(R"(
; comment
[coefficients]
preset = nu_bump
peak = 3
radius = 0.4
center = 0.1, -0.2

[obstacle]
rho_fourier_coefficients = 0.3, 0.05, 0
center = 0.5, 0
rho_fourier_coefficients_2 = 0.2
center_2 = -0.5, 0

[geometry]
R1 = 1.1
R = 1.7
R_ray = 3.2

[wave]
k = 12.5
k0 = 3
incident_angle = 0.25

[rays]
grid_pos = 9
allow_censored = yes

[experiments]
k_list = 1, 2.5, 4
method = radial

[run]
seed = 18446744073709551615
)");
  CHECK(c.coefficients.preset == "nu_bump");
  CHECK(c.coefficients.peak == 3.0);
  CHECK(c.coefficients.center.y() == -0.2);
  REQUIRE(c.obstacle.parts.size() == 2);
  CHECK(c.obstacle.parts[0] == std::vector<double>{0.3, 0.05, 0.0});
  CHECK(c.obstacle.centers[1].x() == -0.5);
  CHECK(c.geometry.R_ray == 3.2);
  CHECK(c.wave.k == 12.5);
  CHECK(c.incident_angle == 0.25);
  CHECK(c.rays.grid_pos == 9);
  CHECK(c.rays.allow_censored);
  CHECK(c.experiments.k_list == std::vector<double>{1.0, 2.5, 4.0});
  CHECK(c.resolvent_options().method == ResolventMethod::radial);
  CHECK(c.seed == 18446744073709551615ULL);
  // untouched keys keep their defaults
  CHECK(c.fem.h == RunConfig{}.fem.h);
  CHECK(c.obstacle_shape().parts().size() == 2);
  CHECK(c.coefficient_field().bounds().nu_max == doctest::Approx(3.0));
}

TEST_CASE("serialize is canonical and round-trips") {
  auto c = parse_config_text("[geometry]\nR = 2.0000000000000004\n[wave]\nk = 0.1\n[obstacle]\nrho_fourier_coefficients = 1\n");
  const auto text = c.serialize();
  const auto back = parse_config_text(text);
  CHECK(back == c);
  CHECK(back.serialize() == text);
  CHECK(back.geometry.R == 2.0000000000000004);
  CHECK(back.wave.k == 0.1);
  CHECK(c.hash().size() == 16);
  CHECK(back.hash() == c.hash());
  c.seed += 1;
  CHECK(c.hash() != back.hash());
  CHECK(parse_config_text(RunConfig{}.serialize()) == RunConfig{});
}

TEST_CASE("configuration errors name the offending key") {
  auto message = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("[wave]\nkk = 1\n").find("wave.kk") != std::string::npos);
  CHECK(message("[nonsense]\nk = 1\n").find("nonsense.k") != std::string::npos);
  CHECK(message("[wave]\nk = abc\n").find("wave.k") != std::string::npos);
  CHECK(message("[wave]\nk = 1.5x\n").find("wave.k") != std::string::npos);
  CHECK(message("[rays]\ngrid_pos = 2.5\n").find("rays.grid_pos") != std::string::npos);
  CHECK(message("[coefficients]\npreset = marble\n").find("marble") != std::string::npos);
  CHECK(message("[obstacle]\ncenter_2 = 1, 0\n").find("obstacle part") != std::string::npos);
  CHECK(message("[obstacle]\nrho_fourier_coefficients_1 = 1\n").find("obstacle.rho_fourier_coefficients_1") !=
        std::string::npos);
  CHECK(message("[run]\nseed = -1\n").find("run.seed") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/helmkit.cfg"), ConfigError);
}

TEST_CASE("the shipped configurations parse") {
  for (const char* name : {"euclid", "disk", "scattering", "bump", "two_disks"}) {
    CAPTURE(name);
    const auto c = load_config(std::string(HELMKIT_CONFIG_DIR) + "/" + name + ".cfg");
    CHECK(parse_config_text(c.serialize()) == c);
  }
}

TEST_CASE("CSV quoting follows RFC 4180") {
  CHECK(CsvTable::escape("plain") == "plain");
  CHECK(CsvTable::escape("a,b") == "\"a,b\"");
  CHECK(CsvTable::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(CsvTable::escape("two\nlines") == "\"two\nlines\"");
  CHECK(CsvTable::format(CsvTable::Cell{0.1}) == "0.10000000000000001");
  CHECK(CsvTable::format(CsvTable::Cell{std::int64_t{-7}}) == "-7");

  CsvTable t({"name", "value", "count"});
  t.add_row({std::string("x, y"), 1.5, std::int64_t{3}});
  t.add_row({std::string("q\"uote"), -0.0, std::int64_t{0}});
  const auto text = t.str();
  CHECK(text.substr(0, 18) == "name,value,count\r\n");
  const auto rows = parse_csv(text);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1] == std::vector<std::string>{"x, y", "1.5", "3"});
  CHECK(rows[2][0] == "q\"uote");
  CHECK(std::stod(rows[2][1]) == 0.0);
  CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("files and hashes") {
  const auto dir = std::filesystem::temp_directory_path() / "helmkit_test_config" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  write_file((dir / "a.txt").string(), "bytes\r\n");
  CHECK(read_file((dir / "a.txt").string()) == "bytes\r\n");
  std::filesystem::remove_all(dir.parent_path());
  // FNV-1a 64 reference values
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(utc_timestamp().size() == 20);
}
