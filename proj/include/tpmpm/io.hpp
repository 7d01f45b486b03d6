#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tpmpm/particles.hpp"
#include "tpmpm/timestepper.hpp"

namespace tpmpm {

enum class SnapshotFormat { kParticlesCsv, kLegacyVtkPoints };

SnapshotFormat snapshot_format_from_string(const std::string& s);
std::string to_string(SnapshotFormat f);
//! File extension including the dot
std::string extension(SnapshotFormat f);

//! Header `time,probe,field,value`, one record per row, values in
//! full-precision scientific notation
void write_probe_csv(std::span<const ProbeRecord> records, std::ostream& out);
void write_probe_csv(std::span<const ProbeRecord> records,
                     const std::string& path);
std::vector<ProbeRecord> read_probe_csv(const std::string& path);

//! Particle positions, velocities, pore pressure, effective stress
//! invariants and plastic strain
void write_snapshot(std::span<const TwoPhaseParticle> particles, double time,
                    SnapshotFormat format, std::ostream& out);
void write_snapshot(std::span<const TwoPhaseParticle> particles, double time,
                    SnapshotFormat format, const std::string& path);

//! TPMPM_OUTPUT_DIR, or "tpmpm_out" when unset
std::string default_output_dir();

}  // namespace tpmpm
