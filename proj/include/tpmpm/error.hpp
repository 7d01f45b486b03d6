#pragma once

#include <stdexcept>
#include <string>

namespace tpmpm {

//! Base of every error raised by the solver library
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Invalid or inconsistent configuration (grid, regions, scenario files)
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error("config: " + msg) {}
};

//! A particle left the background grid
class ParticleEscapedError : public Error {
 public:
  explicit ParticleEscapedError(const std::string& msg)
      : Error("particle escaped: " + msg) {}
};

//! GIMP domain wider than the half cell
class UnsupportedDomainError : public Error {
 public:
  explicit UnsupportedDomainError(const std::string& msg)
      : Error("unsupported particle domain: " + msg) {}
};

//! det F <= 0
class InvertedParticleError : public Error {
 public:
  explicit InvertedParticleError(const std::string& msg)
      : Error("inverted particle: " + msg) {}
};

//! Contact detection called with a degenerate normal
class DetectionError : public Error {
 public:
  explicit DetectionError(const std::string& msg)
      : Error("contact detection: " + msg) {}
};

//! Pressure solve did not converge
class SolverError : public Error {
 public:
  SolverError(const std::string& msg, double residual, int iterations)
      : Error("pressure solver: " + msg), residual_(residual),
        iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

//! File output failure
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error("io: " + msg) {}
};

}  // namespace tpmpm
