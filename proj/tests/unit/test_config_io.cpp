#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tpmpm/config.hpp"
#include "tpmpm/error.hpp"
#include "tpmpm/io.hpp"
#include "tpmpm/scenarios.hpp"

using namespace tpmpm;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "tpmpm_unit";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("config round trip is the identity") {
  for (const auto& name : scenario_names()) {
    CAPTURE(name);
    const auto c = build_scenario(name);
    const auto text = serialize_config(c);
    const auto back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
  }
}

TEST_CASE("config with every optional section") {
  auto c = build_consolidation();
  c.scheme = Scheme::kExplicit;
  c.basis = BasisKind::kGimp;
  c.pic_fraction = 0.01;
  c.water_bulk_modulus = 5e8;
  c.gravity = Vec2(0.0, -9.81);
  c.materials[0].undrained_strength = 12.5e3;
  c.regions[0].initial_stress = {-1.0, -2.0, 0.5, -1.5};
  c.tractions.push_back({{Vec2(0.0, 0.99), Vec2(0.02, 1.0)}, Vec2(0.0, -1e4),
                         Vec2(0.0, 1.0), Ramp{{{0.0, 0.0}, {0.1, 1.0}}}});
  c.output.snapshot_formats = {"particles-csv", "legacy-vtk-points"};
  c.seed = 99;
  c.particle_jitter = 0.1;
  c.solver.tolerance = 1e-10;
  c.rigid->initial_velocity = Vec2(0.0, -0.1);
  CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("config errors name the field") {
  auto text = serialize_config(build_impact());
  const auto pos = text.find("\"dt\"");
  REQUIRE(pos != std::string::npos);

  auto unknown = text;
  unknown.insert(pos, "\"dtt\": 1.0, ");
  CHECK(error_of(unknown).find("dtt: unknown key") != std::string::npos);

  auto negative = parse_config(text);
  negative.dt = -1.0;
  CHECK(error_of(serialize_config(negative)).find("dt: must be positive") !=
        std::string::npos);

  auto dangling = parse_config(text);
  dangling.regions[0].material = "sand";
  CHECK(error_of(serialize_config(dangling)).find("regions[0].material") !=
        std::string::npos);

  const auto syntax = error_of("{\n  \"name\": \"x\",\n  oops\n}");
  CHECK(syntax.find("line 3") != std::string::npos);

  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  CHECK_THROWS_AS(scheme_from_string("implicit"), ConfigError);
  CHECK(to_string(basis_from_string("gimp")) == "gimp");
}

TEST_CASE("bundled invalid config file is rejected") {
  CHECK_THROWS_AS(load_config(std::string(TPMPM_TEST_DATA) + "/bad_config.json"),
                  ConfigError);
}

TEST_CASE("probe CSV round trip is exact") {
  const std::vector<ProbeRecord> records{
      {0.0, "A", "pore_pressure", 1.0e4},
      {1.0e-4, "A", "pore_pressure", 9999.123456789012345},
      {0.1 + 0.2, "cap", "displacement_y", -3.0e-17},
      {2.0, "B", "plastic_strain", 0.0}};
  const auto path = scratch("probes.csv").string();
  write_probe_csv(records, path);
  const auto back = read_probe_csv(path);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].time == records[i].time);
    CHECK(back[i].probe == records[i].probe);
    CHECK(back[i].field == records[i].field);
    CHECK(back[i].value == records[i].value);
  }
  std::ofstream(scratch("bad.csv")) << "t,p\n";
  CHECK_THROWS_AS(read_probe_csv(scratch("bad.csv").string()), IoError);
  CHECK_THROWS_AS(write_probe_csv(records, "/nonexistent/dir/p.csv"), IoError);
}

TEST_CASE("snapshot formats") {
  std::vector<TwoPhaseParticle> ps(3);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ps[i].id = i;
    ps[i].position = Vec2(0.1 * i, 0.2);
    ps[i].pore_pressure = 5.0 * i;
  }
  CHECK(snapshot_format_from_string("legacy-vtk-points") ==
        SnapshotFormat::kLegacyVtkPoints);
  CHECK(extension(SnapshotFormat::kParticlesCsv) == ".csv");
  CHECK_THROWS_AS(snapshot_format_from_string("hdf5"), ConfigError);

  std::ostringstream vtk;
  write_snapshot(ps, 0.5, SnapshotFormat::kLegacyVtkPoints, vtk);
  std::istringstream in(vtk.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# vtk DataFile Version 3.0");
  CHECK(vtk.str().find("DATASET POLYDATA") != std::string::npos);
  CHECK(vtk.str().find("POINTS 3 double") != std::string::npos);
  CHECK(vtk.str().find("VERTICES 3 6") != std::string::npos);
  CHECK(vtk.str().find("SCALARS pore_pressure double 1") != std::string::npos);

  std::ostringstream csv;
  write_snapshot(ps, 0.5, SnapshotFormat::kParticlesCsv, csv);
  int lines = 0;
  std::istringstream cin(csv.str());
  while (std::getline(cin, line)) ++lines;
  CHECK(lines == 2 + 3);
}

TEST_CASE("default output directory") {
  ::setenv("TPMPM_OUTPUT_DIR", "/tmp/somewhere", 1);
  CHECK(default_output_dir() == "/tmp/somewhere");
  ::unsetenv("TPMPM_OUTPUT_DIR");
  CHECK(default_output_dir() == "tpmpm_out");
}
