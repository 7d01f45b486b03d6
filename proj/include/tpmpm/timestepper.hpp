#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tpmpm/basis.hpp"
#include "tpmpm/config.hpp"
#include "tpmpm/grid.hpp"
#include "tpmpm/particles.hpp"
#include "tpmpm/pressure.hpp"

namespace tpmpm {

struct StepContext {
  double dt = 0.0;
  double time = 0.0;
  Vec2 gravity = Vec2::Zero();
  Scheme scheme = Scheme::kSemiImplicit;
};

//! Per-step diagnostics
struct StepStats {
  std::size_t contact_nodes = 0;
  std::size_t active_contacts = 0;
  int cg_iterations = 0;
  double cg_residual = 0.0;
  //! ||D v*|| and ||D v_final|| over free pressure DOFs
  double divergence_star = 0.0;
  double divergence_final = 0.0;
};

//! Two-phase soil with an optional rigid body advanced by either the
//! semi-implicit projection scheme or the explicit weakly compressible one.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& config);

  //! One full step of the configured scheme
  void step();

  //! Semi-implicit pipeline, exposed for inspection. begin_step() rebuilds the
  //! grid fields (P2G, normals, detection, initial velocity correction,
  //! forces); step_a/b/c follow.
  void begin_step();
  void step_a();
  void step_b();
  void step_c();

  //! Forward-Euler u-p step with K_w pressure update; calls begin_step()
  void explicit_step();

  //! Critical explicit step h / sqrt((M + K_w/n)/rho) over all materials
  double explicit_stable_dt() const;

  const ScenarioConfig& config() const noexcept { return config_; }
  const StepContext& context() const noexcept { return ctx_; }
  double time() const noexcept { return ctx_.time; }
  std::size_t steps_taken() const noexcept { return steps_; }
  const BackgroundGrid& grid() const noexcept { return grid_; }
  BackgroundGrid& grid() noexcept { return grid_; }
  const std::vector<TwoPhaseParticle>& particles() const noexcept {
    return particles_;
  }
  std::vector<TwoPhaseParticle>& particles() noexcept { return particles_; }
  const std::vector<SoilMaterial>& materials() const noexcept {
    return materials_;
  }
  const std::optional<RigidBody>& rigid() const noexcept { return rigid_; }
  std::optional<RigidBody>& rigid() noexcept { return rigid_; }
  const std::vector<BasisEvaluation>& basis() const noexcept {
    return basis_;
  }
  const PressureSystem& pressure_system() const noexcept { return system_; }
  const StepStats& last_stats() const noexcept { return stats_; }
  //! Time at the start of the first step with a detected contact node
  std::optional<double> first_contact_time() const noexcept {
    return first_contact_;
  }
  //! Rigid body velocity when first contact was detected
  std::optional<Vec2> rigid_velocity_at_contact() const noexcept {
    return contact_velocity_;
  }
  const std::vector<std::string>& warnings() const noexcept {
    return warnings_;
  }

 private:
  void apply_tractions();
  void rigid_free_trial(Vec2& external, Vec2& trial_velocity) const;
  void compute_seepage(Vec2 TwoPhaseNodeFields::*acceleration,
                       Vec2 TwoPhaseNodeFields::*seepage);
  void advance_rigid(const Vec2& acceleration);
  void finish_step();

  ScenarioConfig config_;
  StepContext ctx_;
  BackgroundGrid grid_;
  std::vector<SoilMaterial> materials_;
  std::vector<TwoPhaseParticle> particles_;
  std::optional<RigidBody> rigid_;
  std::vector<BasisEvaluation> basis_;
  std::vector<BasisEvaluation> rigid_basis_;
  PressureSystem system_;
  StepStats stats_;
  double cutoff_ = 0.0;
  Vec2 rigid_external_ = Vec2::Zero();
  Vec2 rigid_star_acc_ = Vec2::Zero();
  std::size_t steps_ = 0;
  std::optional<double> first_contact_;
  std::optional<Vec2> contact_velocity_;
  std::vector<std::string> warnings_;
};

//! Structured record of one probe sample
struct ProbeRecord {
  double time = 0.0;
  std::string probe;
  std::string field;
  double value = 0.0;
};

//! Resolves probe specs against the initial particle set and samples them
class ProbeSampler {
 public:
  ProbeSampler(const ScenarioConfig& config, const Simulation& sim);
  void sample(const Simulation& sim, std::vector<ProbeRecord>& out) const;
  //! Particle index bound to a probe id, if any
  std::optional<std::size_t> particle_of(const std::string& probe) const;

 private:
  struct Bound {
    ProbeSpec spec;
    std::optional<std::size_t> particle;
  };
  std::vector<Bound> probes_;
};

//! Value of a named field at a particle or on the rigid body. Throws
//! ConfigError for unknown names.
double particle_field(const TwoPhaseParticle& p, const std::string& field);
double rigid_field(const RigidBody& body, double time,
                   const std::string& field);

struct RunOptions {
  //! empty = no files
  std::string output_dir;
  //! called after every step with the simulation
  std::function<void(const Simulation&)> observer;
};

struct RunResult {
  std::size_t steps = 0;
  std::vector<ProbeRecord> probes;
  std::vector<std::string> snapshot_files;
  std::optional<double> first_contact_time;
};

//! Time loop to end_time; probes and snapshots per the output schedule.
//! Any step error is rethrown after a diagnostic snapshot is written.
RunResult run(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace tpmpm
