#include "tpmpm/io.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "tpmpm/error.hpp"

namespace tpmpm {

SnapshotFormat snapshot_format_from_string(const std::string& s) {
  if (s == "particles-csv") return SnapshotFormat::kParticlesCsv;
  if (s == "legacy-vtk-points") return SnapshotFormat::kLegacyVtkPoints;
  throw ConfigError("unknown snapshot format '" + s + "'");
}

std::string to_string(SnapshotFormat f) {
  return f == SnapshotFormat::kParticlesCsv ? "particles-csv"
                                            : "legacy-vtk-points";
}

std::string extension(SnapshotFormat f) {
  return f == SnapshotFormat::kParticlesCsv ? ".csv" : ".vtk";
}

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

void check_written(std::ostream& f, const std::string& path) {
  f.flush();
  if (!f) throw IoError("write failed for '" + path + "'");
}

}  // namespace

void write_probe_csv(std::span<const ProbeRecord> records, std::ostream& out) {
  out << "time,probe,field,value\n";
  out << std::scientific << std::setprecision(17);
  for (const auto& r : records)
    out << r.time << ',' << r.probe << ',' << r.field << ',' << r.value << '\n';
}

void write_probe_csv(std::span<const ProbeRecord> records,
                     const std::string& path) {
  auto f = open_for_write(path);
  write_probe_csv(records, f);
  check_written(f, path);
}

std::vector<ProbeRecord> read_probe_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::string line;
  std::getline(f, line);
  if (line != "time,probe,field,value")
    throw IoError("'" + path + "': unexpected header");
  std::vector<ProbeRecord> out;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string t, probe, field, value;
    if (!std::getline(ss, t, ',') || !std::getline(ss, probe, ',') ||
        !std::getline(ss, field, ',') || !std::getline(ss, value))
      throw IoError("'" + path + "' line " + std::to_string(lineno) +
                    ": expected 4 columns");
    try {
      out.push_back({std::stod(t), probe, field, std::stod(value)});
    } catch (const std::exception&) {
      throw IoError("'" + path + "' line " + std::to_string(lineno) +
                    ": bad number");
    }
  }
  return out;
}

void write_snapshot(std::span<const TwoPhaseParticle> particles, double time,
                    SnapshotFormat format, std::ostream& out) {
  out << std::scientific << std::setprecision(17);
  if (format == SnapshotFormat::kParticlesCsv) {
    out << "# time " << time << '\n';
    out << "id,x,y,vx,vy,pore_pressure,mean_effective_stress,max_shear,"
           "von_mises,plastic_strain\n";
    for (const auto& p : particles)
      out << p.id << ',' << p.position.x() << ',' << p.position.y() << ','
          << p.velocity.x() << ',' << p.velocity.y() << ',' << p.pore_pressure
          << ',' << p.effective_stress.mean_in_plane() << ','
          << p.effective_stress.max_shear() << ','
          << p.effective_stress.von_mises() << ','
          << p.plastic_strain.equivalent() << '\n';
    return;
  }

  const auto n = particles.size();
  out << "# vtk DataFile Version 3.0\n";
  out << "particles t=" << time << '\n';
  out << "ASCII\nDATASET POLYDATA\n";
  out << "POINTS " << n << " double\n";
  for (const auto& p : particles)
    out << p.position.x() << ' ' << p.position.y() << " 0\n";
  out << "VERTICES " << n << ' ' << 2 * n << '\n';
  for (std::size_t i = 0; i < n; ++i) out << "1 " << i << '\n';
  if (n == 0) return;
  out << "POINT_DATA " << n << '\n';
  out << "VECTORS velocity double\n";
  for (const auto& p : particles)
    out << p.velocity.x() << ' ' << p.velocity.y() << " 0\n";
  auto scalar = [&](const char* name, auto&& fn) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (const auto& p : particles) out << fn(p) << '\n';
  };
  scalar("pore_pressure", [](const TwoPhaseParticle& p) { return p.pore_pressure; });
  scalar("mean_effective_stress", [](const TwoPhaseParticle& p) {
    return p.effective_stress.mean_in_plane();
  });
  scalar("max_shear", [](const TwoPhaseParticle& p) {
    return p.effective_stress.max_shear();
  });
  scalar("von_mises", [](const TwoPhaseParticle& p) {
    return p.effective_stress.von_mises();
  });
  scalar("plastic_strain", [](const TwoPhaseParticle& p) {
    return p.plastic_strain.equivalent();
  });
}

void write_snapshot(std::span<const TwoPhaseParticle> particles, double time,
                    SnapshotFormat format, const std::string& path) {
  auto f = open_for_write(path);
  write_snapshot(particles, time, format, f);
  check_written(f, path);
}

std::string default_output_dir() {
  const char* env = std::getenv("TPMPM_OUTPUT_DIR");
  return env && *env ? std::string(env) : std::string("tpmpm_out");
}

}  // namespace tpmpm
