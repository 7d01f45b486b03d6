#include "tpmpm/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "tpmpm/contact.hpp"
#include "tpmpm/error.hpp"
#include "tpmpm/io.hpp"
#include "tpmpm/transfer.hpp"

namespace tpmpm {

namespace {

double norm_over(const std::vector<double>& values,
                 const std::vector<std::size_t>& nodes) {
  double s = 0.0;
  for (const auto i : nodes) s += values[i] * values[i];
  return std::sqrt(s);
}

}  // namespace

Simulation::Simulation(const ScenarioConfig& config) : config_(config) {
  config_.validate();
  const auto& g = config_.grid;
  grid_ = build_grid(g.origin, g.cell_size, g.nx, g.ny);
  const double tol = 1e-9 * g.cell_size;

  for (std::size_t i = 0; i < grid_.num_nodes(); ++i) {
    const Vec2 x = grid_.coordinates(i);
    auto& c = grid_.constraints(i);
    for (const auto& vc : config_.velocity_constraints) {
      if (!vc.box.contains(x, tol)) continue;
      if (vc.solid) c.solid_fixed[vc.component] = true;
      if (vc.water) c.water_fixed[vc.component] = true;
    }
    for (const auto& box : config_.drained)
      if (box.contains(x, tol)) c.drained = true;
  }

  materials_ = config_.materials;
  std::mt19937_64 rng(config_.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  for (const auto& region : config_.regions) {
    int index = 0;
    for (std::size_t m = 0; m < materials_.size(); ++m)
      if (materials_[m].name == region.material) index = static_cast<int>(m);
    auto seeded = seed_particles(grid_, region.box, region.particles_per_cell,
                                 materials_[index], index);
    for (auto& p : seeded) {
      p.id = particles_.size();
      p.pore_pressure = region.initial_pore_pressure;
      p.effective_stress = region.initial_stress;
      if (config_.particle_jitter > 0.0) {
        const double amp = 2.0 * p.initial_half_size.x() * config_.particle_jitter;
        p.position += amp * Vec2(jitter(rng), jitter(rng));
        p.initial_position = p.position;
      }
      particles_.push_back(p);
    }
  }

  if (config_.rigid) {
    const auto& spec = *config_.rigid;
    RigidBody body;
    body.mass = spec.mass;
    body.velocity = spec.initial_velocity;
    body.load_direction = spec.load_direction;
    body.traction = spec.traction;
    body.loaded_length = spec.loaded_length;
    body.fixed = spec.fixed;
    body.particles = seed_rigid_particles(grid_, spec.box, spec.particles_per_cell);
    body.constrain(body.velocity);
    rigid_ = std::move(body);
  }

  ctx_.dt = config_.dt;
  ctx_.time = 0.0;
  ctx_.gravity = config_.gravity;
  ctx_.scheme = config_.scheme;
  cutoff_ = mass_cutoff(particles_);

  if (ctx_.scheme == Scheme::kExplicit) {
    const double crit = explicit_stable_dt();
    if (ctx_.dt > crit) {
      std::ostringstream msg;
      msg << "dt = " << ctx_.dt << " exceeds the explicit stability estimate "
          << crit << "; the run is likely to diverge";
      warnings_.push_back(msg.str());
    }
  }
}

double Simulation::explicit_stable_dt() const {
  double crit = std::numeric_limits<double>::infinity();
  for (const auto& m : materials_) {
    const double rho = m.mixture_density();
    const double c = std::sqrt(
        (m.constrained_modulus() + config_.water_bulk_modulus / m.porosity) /
        rho);
    crit = std::min(crit, grid_.cell_size() / c);
  }
  return crit;
}

void Simulation::apply_tractions() {
  for (auto& p : particles_) p.traction_force = Vec2::Zero();
  const double tol = 1e-9 * grid_.cell_size();
  for (const auto& load : config_.tractions) {
    const double scale = load.ramp(ctx_.time);
    const Vec2 n = load.face_normal.normalized();
    for (auto& p : particles_) {
      if (!load.box.contains(p.position, tol)) continue;
      const auto dom = update_domain(p.deformation_gradient, p.initial_half_size);
      const double length = 2.0 * dom.projected_size(Vec2(-n.y(), n.x()));
      p.traction_force += scale * length * load.traction;
    }
  }
}

void Simulation::begin_step() {
  grid_.reset();
  basis_ = compute_basis(config_.basis, grid_, particles_);
  p2g_mass_momentum(particles_, basis_, grid_, cutoff_);
  apply_tractions();
  p2g_forces(particles_, basis_, grid_, ctx_.gravity);
  stats_ = StepStats{};

  if (!rigid_) return;
  auto& body = *rigid_;
  rigid_basis_ = compute_basis(config_.basis, grid_, body.particles);
  p2g_rigid_mass(body, rigid_basis_, grid_);
  nodal_normals(grid_, cutoff_);
  const auto states = detect_contact_nodes(
      grid_, particles_, basis_, body, rigid_basis_,
      config_.solver.contact_tolerance * grid_.cell_size());
  for (const auto& s : states)
    if (s.detected) ++stats_.contact_nodes;
  if (stats_.contact_nodes > 0 && !first_contact_) {
    first_contact_ = ctx_.time;
    contact_velocity_ = body.velocity;
  }
  contact_correct_velocity(grid_, &TwoPhaseNodeFields::velocity_initial,
                           body.velocity);
  rigid_external_ = body.external_force(ctx_.time, ctx_.gravity);
}

void Simulation::rigid_free_trial(Vec2& external, Vec2& trial_velocity) const {
  external = rigid_external_;
  Vec2 a = external / rigid_->mass;
  rigid_->constrain(a);
  trial_velocity = rigid_->velocity + ctx_.dt * a;
}

void Simulation::compute_seepage(Vec2 TwoPhaseNodeFields::*acceleration,
                                 Vec2 TwoPhaseNodeFields::*seepage) {
  const bool impervious = config_.impervious_contact && rigid_.has_value();
  for (std::size_t i = 0; i < grid_.num_nodes(); ++i) {
    auto& node = grid_.node(i);
    auto& tb = node.tb;
    Vec2& w = tb.*seepage;
    w = Vec2::Zero();
    if (tb.mass_mix <= cutoff_ || tb.mass_water <= 0.0) continue;
    const double n = tb.porosity();
    const double k = tb.permeability();
    w = k * (tb.force_water() - tb.mass_water * (tb.*acceleration)) /
        (tb.mass_water * n * kStandardGravity);
    const auto& c = grid_.constraints(i);
    for (int d = 0; d < 2; ++d)
      if (c.water_fixed[d]) w[d] = 0.0;
    if (impervious && node.contact_detected)
      w -= w.dot(node.normal) * node.normal;
  }
}

void Simulation::step_a() {
  const double dt = ctx_.dt;
  for (std::size_t i = 0; i < grid_.num_nodes(); ++i) {
    auto& tb = grid_.node(i).tb;
    if (tb.mass_mix <= cutoff_) continue;
    tb.acceleration_star = tb.force_mix() / tb.mass_mix;
    apply_solid_constraints(grid_.constraints(i), tb.acceleration_star);
    tb.velocity_star = tb.velocity_initial + dt * tb.acceleration_star;
  }
  if (rigid_) {
    Vec2 external, trial;
    rigid_free_trial(external, trial);
    stats_.active_contacts = activate_contacts(grid_, trial, dt);
    rigid_star_acc_ = rigid_intermediate_acceleration(grid_, *rigid_, external);
    contact_correct_acceleration(grid_, rigid_star_acc_, dt);
  }
  compute_seepage(&TwoPhaseNodeFields::acceleration_star,
                  &TwoPhaseNodeFields::seepage_star);
}

void Simulation::step_b() {
  system_ = assemble_pressure_system(particles_, basis_, grid_, ctx_.dt,
                                     cutoff_);
  const int dofs = static_cast<int>(system_.size());
  const int max_iter = config_.solver.max_iterations > 0
                           ? config_.solver.max_iterations
                           : std::max(10, 10 * dofs);
  SolveReport report;
  const auto x = solve_cg(system_, config_.solver.tolerance, max_iter, &report);
  store_pressure_increment(system_, x, grid_);
  stats_.cg_iterations = report.iterations;
  stats_.cg_residual = report.residual;
  stats_.divergence_star = norm_over(
      mixture_divergence(particles_, basis_, grid_,
                         &TwoPhaseNodeFields::velocity_star,
                         &TwoPhaseNodeFields::seepage_star),
      system_.dof_nodes);
}

void Simulation::advance_rigid(const Vec2& acceleration) {
  auto& body = *rigid_;
  body.acceleration = acceleration;
  body.velocity += ctx_.dt * acceleration;
  body.constrain(body.velocity);
  const Vec2 du = ctx_.dt * body.velocity;
  body.displacement += du;
  for (auto& p : body.particles) {
    p.position += du;
    if (!grid_.contains(p.position)) {
      std::ostringstream msg;
      msg << "rigid particle moved to (" << p.position.x() << ", "
          << p.position.y() << ")";
      throw ParticleEscapedError(msg.str());
    }
  }
}

void Simulation::step_c() {
  const double dt = ctx_.dt;
  scatter_pressure_gradient(particles_, basis_, grid_);
  for (std::size_t i = 0; i < grid_.num_nodes(); ++i) {
    auto& tb = grid_.node(i).tb;
    if (tb.mass_mix <= cutoff_) continue;
    tb.acceleration_final =
        (tb.force_mix() + tb.pressure_increment_force) / tb.mass_mix;
    apply_solid_constraints(grid_.constraints(i), tb.acceleration_final);
    tb.velocity_final = tb.velocity_initial + dt * tb.acceleration_final;
  }
  if (rigid_) {
    advance_rigid(rigid_final_acceleration(grid_, *rigid_, rigid_external_));
    contact_correct_velocity(grid_, &TwoPhaseNodeFields::velocity_final,
                             rigid_->velocity);
    for (auto& node : grid_.nodes())
      if (node.contact_detected && node.tb.mass_mix > cutoff_)
        node.tb.acceleration_final =
            (node.tb.velocity_final - node.tb.velocity_initial) / dt;
  }

  const bool impervious = config_.impervious_contact && rigid_.has_value();
  for (std::size_t i = 0; i < grid_.num_nodes(); ++i) {
    auto& node = grid_.node(i);
    auto& tb = node.tb;
    if (tb.mass_mix <= cutoff_ || tb.mass_water <= 0.0) continue;
    const double n = tb.porosity();
    const double k = tb.permeability();
    Vec2 w = tb.seepage_star +
             k * (n - tb.mass_water / tb.mass_mix) /
                 (n * kStandardGravity * tb.mass_water) *
                 tb.pressure_increment_force;
    const auto& c = grid_.constraints(i);
    for (int d = 0; d < 2; ++d)
      if (c.water_fixed[d]) w[d] = 0.0;
    if (impervious && node.contact_detected)
      w -= w.dot(node.normal) * node.normal;
    tb.seepage_final = w;
  }
  stats_.divergence_final = norm_over(
      mixture_divergence(particles_, basis_, grid_,
                         &TwoPhaseNodeFields::velocity_final,
                         &TwoPhaseNodeFields::seepage_final),
      system_.dof_nodes);

  g2p_update(grid_, particles_, basis_, materials_,
             G2POptions{dt, config_.pic_fraction});
  finish_step();
}

void Simulation::explicit_step() {
  const double dt = ctx_.dt;
  begin_step();
  step_a();
  for (std::size_t i = 0; i < grid_.num_nodes(); ++i) {
    auto& tb = grid_.node(i).tb;
    if (tb.mass_mix <= cutoff_) continue;
    tb.velocity_final = tb.velocity_star;
    tb.acceleration_final = tb.acceleration_star;
  }
  if (rigid_) {
    advance_rigid(rigid_star_acc_);
    contact_correct_velocity(grid_, &TwoPhaseNodeFields::velocity_final,
                             rigid_->velocity);
    for (auto& node : grid_.nodes())
      if (node.contact_detected && node.tb.mass_mix > cutoff_)
        node.tb.acceleration_final =
            (node.tb.velocity_final - node.tb.velocity_initial) / dt;
  }
  compute_seepage(&TwoPhaseNodeFields::acceleration_final,
                  &TwoPhaseNodeFields::seepage_final);

  // weakly compressible pressure rate, mapped to nodes by mass
  const double kw = config_.water_bulk_modulus;
  std::vector<double> numer(grid_.num_nodes(), 0.0);
  for (std::size_t p = 0; p < particles_.size(); ++p) {
    const auto& pt = particles_[p];
    const auto& b = basis_[p];
    double ds = 0.0, dw = 0.0;
    for (int k = 0; k < b.count; ++k) {
      const auto& tb = grid_.node(b.nodes[k]).tb;
      ds += b.gradients[k].dot(tb.velocity_final);
      dw += b.gradients[k].dot(tb.seepage_final);
    }
    const double dp = -kw / pt.porosity * dt * (ds + pt.porosity * dw);
    const double m = pt.mixture_mass();
    for (int k = 0; k < b.count; ++k) numer[b.nodes[k]] += b.weights[k] * m * dp;
  }
  for (std::size_t i = 0; i < grid_.num_nodes(); ++i) {
    auto& tb = grid_.node(i).tb;
    tb.pressure_increment = 0.0;
    if (tb.mass_mix <= cutoff_) continue;
    tb.pressure_increment = grid_.constraints(i).drained
                                ? -tb.pressure
                                : numer[i] / tb.mass_mix;
  }

  g2p_update(grid_, particles_, basis_, materials_,
             G2POptions{dt, config_.pic_fraction});
  finish_step();
}

void Simulation::finish_step() {
  ctx_.time = static_cast<double>(steps_ + 1) * ctx_.dt;
  ++steps_;
}

void Simulation::step() {
  if (ctx_.scheme == Scheme::kExplicit) {
    explicit_step();
    return;
  }
  begin_step();
  step_a();
  step_b();
  step_c();
}

double particle_field(const TwoPhaseParticle& p, const std::string& field) {
  if (field == "pore_pressure") return p.pore_pressure;
  if (field == "effective_stress_xx") return p.effective_stress.xx;
  if (field == "effective_stress_yy") return p.effective_stress.yy;
  if (field == "effective_stress_xy") return p.effective_stress.xy;
  if (field == "effective_stress_zz") return p.effective_stress.zz;
  if (field == "total_stress_xx") return p.total_stress().xx;
  if (field == "total_stress_yy") return p.total_stress().yy;
  if (field == "total_stress_xy") return p.total_stress().xy;
  if (field == "max_shear") return p.effective_stress.max_shear();
  if (field == "displacement_x") return p.displacement().x();
  if (field == "displacement_y") return p.displacement().y();
  if (field == "velocity_x") return p.velocity.x();
  if (field == "velocity_y") return p.velocity.y();
  if (field == "position_x") return p.position.x();
  if (field == "position_y") return p.position.y();
  if (field == "plastic_strain") return p.plastic_strain.equivalent();
  if (field == "porosity") return p.porosity;
  throw ConfigError("unknown particle probe field '" + field + "'");
}

double rigid_field(const RigidBody& body, double time,
                   const std::string& field) {
  if (field == "velocity_x") return body.velocity.x();
  if (field == "velocity_y") return body.velocity.y();
  if (field == "displacement_x") return body.displacement.x();
  if (field == "displacement_y") return body.displacement.y();
  if (field == "acceleration_x") return body.acceleration.x();
  if (field == "acceleration_y") return body.acceleration.y();
  if (field == "traction") return body.traction(time);
  throw ConfigError("unknown rigid probe field '" + field + "'");
}

ProbeSampler::ProbeSampler(const ScenarioConfig& config,
                           const Simulation& sim) {
  for (const auto& spec : config.probes) {
    Bound b{spec, std::nullopt};
    if (spec.target == ProbeTarget::kParticle) {
      const auto& ps = sim.particles();
      if (ps.empty())
        throw ConfigError("probes." + spec.id + ": no particles to bind");
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < ps.size(); ++p) {
        const double d = (ps[p].position - spec.point).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = p;
        }
      }
      b.particle = best;
      for (const auto& f : spec.fields) particle_field(ps[best], f);
    } else {
      if (!sim.rigid())
        throw ConfigError("probes." + spec.id + ": no rigid body");
      for (const auto& f : spec.fields) rigid_field(*sim.rigid(), 0.0, f);
    }
    probes_.push_back(std::move(b));
  }
}

void ProbeSampler::sample(const Simulation& sim,
                          std::vector<ProbeRecord>& out) const {
  for (const auto& b : probes_) {
    for (const auto& f : b.spec.fields) {
      const double v = b.particle
                           ? particle_field(sim.particles()[*b.particle], f)
                           : rigid_field(*sim.rigid(), sim.time(), f);
      out.push_back({sim.time(), b.spec.id, f, v});
    }
  }
}

std::optional<std::size_t> ProbeSampler::particle_of(
    const std::string& probe) const {
  for (const auto& b : probes_)
    if (b.spec.id == probe) return b.particle;
  return std::nullopt;
}

namespace {

std::size_t steps_for(double interval, double dt) {
  if (interval <= 0.0) return 0;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(interval / dt)));
}

}  // namespace

RunResult run(const ScenarioConfig& config, const RunOptions& options) {
  Simulation sim(config);
  ProbeSampler sampler(config, sim);
  RunResult result;

  const auto total = static_cast<std::size_t>(
      std::ceil(config.end_time / config.dt - 1e-9));
  const std::size_t probe_every = std::max<std::size_t>(
      1, steps_for(config.output.probe_interval, config.dt));
  const std::size_t snap_every = steps_for(config.output.snapshot_interval,
                                           config.dt);

  std::vector<SnapshotFormat> formats;
  for (const auto& f : config.output.snapshot_formats)
    formats.push_back(snapshot_format_from_string(f));
  const bool files = !options.output_dir.empty();
  if (files) std::filesystem::create_directories(options.output_dir);

  auto snapshot = [&](const std::string& stem) {
    if (!files) return;
    for (const auto f : formats) {
      const auto path = (std::filesystem::path(options.output_dir) /
                         (stem + extension(f)))
                            .string();
      write_snapshot(sim.particles(), sim.time(), f, path);
      result.snapshot_files.push_back(path);
    }
  };
  auto stem = [](std::size_t step) {
    std::ostringstream s;
    s << "snapshot_" << std::setw(6) << std::setfill('0') << step;
    return s.str();
  };
  auto write_probes = [&] {
    if (files && !config.probes.empty())
      write_probe_csv(result.probes,
                      (std::filesystem::path(options.output_dir) / "probes.csv")
                          .string());
  };

  sampler.sample(sim, result.probes);
  snapshot(stem(0));
  for (std::size_t s = 1; s <= total; ++s) {
    try {
      sim.step();
    } catch (const std::exception&) {
      snapshot("failure_" + stem(s));
      write_probes();
      throw;
    }
    if (s % probe_every == 0 || s == total) sampler.sample(sim, result.probes);
    if ((snap_every > 0 && s % snap_every == 0) || s == total)
      snapshot(stem(s));
    if (options.observer) options.observer(sim);
  }
  write_probes();
  result.steps = sim.steps_taken();
  result.first_contact_time = sim.first_contact_time();
  return result;
}

}  // namespace tpmpm
