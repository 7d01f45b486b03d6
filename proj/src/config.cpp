#include "tpmpm/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tpmpm/error.hpp"

namespace tpmpm {

using json = nlohmann::json;

std::string to_string(Scheme scheme) {
  return scheme == Scheme::kExplicit ? "explicit" : "semi-implicit";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "semi-implicit") return Scheme::kSemiImplicit;
  if (s == "explicit") return Scheme::kExplicit;
  throw ConfigError("scheme: expected 'semi-implicit' or 'explicit', got '" +
                    s + "'");
}

std::string to_string(BasisKind kind) {
  return kind == BasisKind::kGimp ? "gimp" : "linear";
}

BasisKind basis_from_string(const std::string& s) {
  if (s == "linear") return BasisKind::kLinear;
  if (s == "gimp") return BasisKind::kGimp;
  throw ConfigError("basis: expected 'linear' or 'gimp', got '" + s + "'");
}

namespace {

// JSON object cursor that tracks its field path and rejects unknown keys
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError((path_.empty() ? std::string("<root>") : path_) + ": " +
                      msg);
  }

  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) const {
    if (!has(key)) throw ConfigError(child(key) + ": required field missing");
    return j_.at(key);
  }

  double number(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError(child(key) + ": expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double def) const {
    return has(key) ? number(key) : def;
  }
  long integer(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_number_integer())
      throw ConfigError(child(key) + ": expected an integer");
    return v.get<long>();
  }
  long integer(const std::string& key, long def) const {
    return has(key) ? integer(key) : def;
  }
  bool boolean(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(child(key) + ": expected a boolean");
    return v.get<bool>();
  }
  std::string string(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError(child(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& def) const {
    return has(key) ? string(key) : def;
  }
  Vec2 vec2(const std::string& key) const { return to_vec2(at(key), child(key)); }
  Vec2 vec2(const std::string& key, const Vec2& def) const {
    return has(key) ? vec2(key) : def;
  }
  const json& array(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_array()) throw ConfigError(child(key) + ": expected an array");
    return v;
  }

  static Vec2 to_vec2(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number())
      throw ConfigError(path + ": expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
  }

  //! Call after reading every field
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key()))
        throw ConfigError(child(it.key()) + ": unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

Box read_box(const json& j, const std::string& path) {
  Reader r(j, path);
  Box b{r.vec2("lo"), r.vec2("hi")};
  r.finish();
  return b;
}

Ramp read_ramp(const json& j, const std::string& path) {
  if (j.is_number()) return Ramp::constant(j.get<double>());
  if (!j.is_array()) throw ConfigError(path + ": expected a number or [[t, v], ...]");
  Ramp ramp;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vec2 k = Reader::to_vec2(j[i], path + "[" + std::to_string(i) + "]");
    ramp.knots.push_back({k.x(), k.y()});
  }
  return ramp;
}

Stress read_stress(const json& j, const std::string& path) {
  Reader r(j, path);
  Stress s;
  s.xx = r.number("xx", 0.0);
  s.yy = r.number("yy", 0.0);
  s.xy = r.number("xy", 0.0);
  s.zz = r.number("zz", 0.0);
  r.finish();
  return s;
}

int read_component(const Reader& r, const std::string& key) {
  const auto c = r.string(key);
  if (c == "x") return 0;
  if (c == "y") return 1;
  throw ConfigError(r.child(key) + ": expected 'x' or 'y'");
}

template <typename Fn>
void for_each_item(const Reader& r, const std::string& key, Fn&& fn) {
  if (!r.has(key)) return;
  const auto& arr = r.array(key);
  for (std::size_t i = 0; i < arr.size(); ++i)
    fn(arr[i], r.child(key) + "[" + std::to_string(i) + "]");
}

json box_json(const Box& b) {
  return {{"lo", {b.lo.x(), b.lo.y()}}, {"hi", {b.hi.x(), b.hi.y()}}};
}
json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }
json ramp_json(const Ramp& r) {
  json out = json::array();
  for (const auto& k : r.knots) out.push_back({k[0], k[1]});
  return out;
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("syntax error at " + line_column(text, e.byte) + ": " +
                      e.what());
  }
  Reader r(root, "");
  ScenarioConfig c;
  c.name = r.string("name", "");

  {
    Reader g(r.at("grid"), "grid");
    c.grid.origin = g.vec2("origin", Vec2::Zero());
    c.grid.cell_size = g.number("cell_size");
    c.grid.nx = static_cast<int>(g.integer("nx"));
    c.grid.ny = static_cast<int>(g.integer("ny"));
    g.finish();
  }

  for_each_item(r, "materials", [&](const json& j, const std::string& path) {
    Reader m(j, path);
    SoilMaterial mat;
    mat.name = m.string("name");
    mat.youngs_modulus = m.number("youngs_modulus");
    mat.poisson_ratio = m.number("poisson_ratio");
    if (m.has("undrained_strength"))
      mat.undrained_strength = m.number("undrained_strength");
    mat.solid_density = m.number("solid_density");
    mat.water_density = m.number("water_density", 1000.0);
    mat.porosity = m.number("porosity");
    mat.permeability = m.number("permeability");
    m.finish();
    c.materials.push_back(mat);
  });

  for_each_item(r, "regions", [&](const json& j, const std::string& path) {
    Reader g(j, path);
    ParticleRegion reg;
    reg.name = g.string("name", "");
    reg.box = read_box(g.at("box"), g.child("box"));
    reg.particles_per_cell = static_cast<int>(g.integer("particles_per_cell", 4));
    reg.material = g.string("material");
    reg.initial_pore_pressure = g.number("initial_pore_pressure", 0.0);
    if (g.has("initial_stress"))
      reg.initial_stress = read_stress(g.at("initial_stress"),
                                       g.child("initial_stress"));
    g.finish();
    c.regions.push_back(reg);
  });

  if (r.has("rigid")) {
    Reader g(r.at("rigid"), "rigid");
    RigidBodySpec s;
    s.box = read_box(g.at("box"), g.child("box"));
    s.particles_per_cell = static_cast<int>(g.integer("particles_per_cell", 4));
    s.mass = g.number("mass");
    s.initial_velocity = g.vec2("initial_velocity", Vec2::Zero());
    s.load_direction = g.vec2("load_direction", Vec2::Zero());
    if (g.has("traction"))
      s.traction = read_ramp(g.at("traction"), g.child("traction"));
    s.loaded_length = g.number("loaded_length", 0.0);
    if (g.has("fixed")) {
      const auto& f = g.array("fixed");
      if (f.size() != 2 || !f[0].is_boolean() || !f[1].is_boolean())
        throw ConfigError("rigid.fixed: expected [bool, bool]");
      s.fixed = {f[0].get<bool>(), f[1].get<bool>()};
    }
    g.finish();
    c.rigid = s;
  }

  for_each_item(r, "velocity_constraints",
                [&](const json& j, const std::string& path) {
                  Reader g(j, path);
                  VelocityConstraint v;
                  v.box = read_box(g.at("box"), g.child("box"));
                  v.component = read_component(g, "component");
                  v.solid = g.boolean("solid", true);
                  v.water = g.boolean("water", true);
                  g.finish();
                  c.velocity_constraints.push_back(v);
                });

  for_each_item(r, "drained", [&](const json& j, const std::string& path) {
    c.drained.push_back(read_box(j, path));
  });

  c.impervious_contact = r.boolean("impervious_contact", false);

  for_each_item(r, "tractions", [&](const json& j, const std::string& path) {
    Reader g(j, path);
    TractionLoad t;
    t.box = read_box(g.at("box"), g.child("box"));
    t.traction = g.vec2("traction");
    t.face_normal = g.vec2("face_normal", Vec2::UnitY());
    if (g.has("ramp")) t.ramp = read_ramp(g.at("ramp"), g.child("ramp"));
    g.finish();
    c.tractions.push_back(t);
  });

  c.gravity = r.vec2("gravity", Vec2::Zero());
  c.dt = r.number("dt");
  c.end_time = r.number("end_time");
  if (r.has("scheme")) {
    try {
      c.scheme = scheme_from_string(r.string("scheme"));
    } catch (const ConfigError&) {
      throw ConfigError("scheme: expected 'semi-implicit' or 'explicit'");
    }
  }
  if (r.has("basis")) c.basis = basis_from_string(r.string("basis"));
  c.pic_fraction = r.number("pic_fraction", 0.0);
  c.water_bulk_modulus = r.number("water_bulk_modulus", 2.2e9);

  for_each_item(r, "probes", [&](const json& j, const std::string& path) {
    Reader g(j, path);
    ProbeSpec p;
    p.id = g.string("id");
    const auto target = g.string("target", "particle");
    if (target == "particle")
      p.target = ProbeTarget::kParticle;
    else if (target == "rigid")
      p.target = ProbeTarget::kRigid;
    else
      throw ConfigError(g.child("target") + ": expected 'particle' or 'rigid'");
    p.point = g.vec2("point", Vec2::Zero());
    for (const auto& f : g.array("fields")) {
      if (!f.is_string()) throw ConfigError(g.child("fields") + ": expected strings");
      p.fields.push_back(f.get<std::string>());
    }
    g.finish();
    c.probes.push_back(p);
  });

  if (r.has("output")) {
    Reader g(r.at("output"), "output");
    c.output.probe_interval = g.number("probe_interval", 0.0);
    c.output.snapshot_interval = g.number("snapshot_interval", 0.0);
    if (g.has("snapshot_formats")) {
      c.output.snapshot_formats.clear();
      for (const auto& f : g.array("snapshot_formats")) {
        if (!f.is_string())
          throw ConfigError("output.snapshot_formats: expected strings");
        c.output.snapshot_formats.push_back(f.get<std::string>());
      }
    }
    g.finish();
  }
  if (r.has("solver")) {
    Reader g(r.at("solver"), "solver");
    c.solver.tolerance = g.number("tolerance", 1e-8);
    c.solver.max_iterations = static_cast<int>(g.integer("max_iterations", 0));
    c.solver.contact_tolerance = g.number("contact_tolerance", 1e-6);
    g.finish();
  }
  const long seed = r.integer("seed", 0);
  if (seed < 0) throw ConfigError("seed: must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.particle_jitter = r.number("particle_jitter", 0.0);
  r.finish();

  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + std::string(e.what()).substr(8));
  }
}

std::string serialize_config(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["grid"] = {{"origin", vec_json(c.grid.origin)},
               {"cell_size", c.grid.cell_size},
               {"nx", c.grid.nx},
               {"ny", c.grid.ny}};
  j["materials"] = json::array();
  for (const auto& m : c.materials) {
    json mj = {{"name", m.name},
               {"youngs_modulus", m.youngs_modulus},
               {"poisson_ratio", m.poisson_ratio},
               {"solid_density", m.solid_density},
               {"water_density", m.water_density},
               {"porosity", m.porosity},
               {"permeability", m.permeability}};
    if (m.undrained_strength) mj["undrained_strength"] = *m.undrained_strength;
    j["materials"].push_back(mj);
  }
  j["regions"] = json::array();
  for (const auto& r : c.regions) {
    j["regions"].push_back(
        {{"name", r.name},
         {"box", box_json(r.box)},
         {"particles_per_cell", r.particles_per_cell},
         {"material", r.material},
         {"initial_pore_pressure", r.initial_pore_pressure},
         {"initial_stress",
          {{"xx", r.initial_stress.xx},
           {"yy", r.initial_stress.yy},
           {"xy", r.initial_stress.xy},
           {"zz", r.initial_stress.zz}}}});
  }
  if (c.rigid) {
    const auto& s = *c.rigid;
    j["rigid"] = {{"box", box_json(s.box)},
                  {"particles_per_cell", s.particles_per_cell},
                  {"mass", s.mass},
                  {"initial_velocity", vec_json(s.initial_velocity)},
                  {"load_direction", vec_json(s.load_direction)},
                  {"traction", ramp_json(s.traction)},
                  {"loaded_length", s.loaded_length},
                  {"fixed", {s.fixed[0], s.fixed[1]}}};
  }
  j["velocity_constraints"] = json::array();
  for (const auto& v : c.velocity_constraints)
    j["velocity_constraints"].push_back({{"box", box_json(v.box)},
                                         {"component", v.component ? "y" : "x"},
                                         {"solid", v.solid},
                                         {"water", v.water}});
  j["drained"] = json::array();
  for (const auto& b : c.drained) j["drained"].push_back(box_json(b));
  j["impervious_contact"] = c.impervious_contact;
  j["tractions"] = json::array();
  for (const auto& t : c.tractions)
    j["tractions"].push_back({{"box", box_json(t.box)},
                              {"traction", vec_json(t.traction)},
                              {"face_normal", vec_json(t.face_normal)},
                              {"ramp", ramp_json(t.ramp)}});
  j["gravity"] = vec_json(c.gravity);
  j["dt"] = c.dt;
  j["end_time"] = c.end_time;
  j["scheme"] = to_string(c.scheme);
  j["basis"] = to_string(c.basis);
  j["pic_fraction"] = c.pic_fraction;
  j["water_bulk_modulus"] = c.water_bulk_modulus;
  j["probes"] = json::array();
  for (const auto& p : c.probes)
    j["probes"].push_back(
        {{"id", p.id},
         {"target", p.target == ProbeTarget::kRigid ? "rigid" : "particle"},
         {"point", vec_json(p.point)},
         {"fields", p.fields}});
  j["output"] = {{"probe_interval", c.output.probe_interval},
                 {"snapshot_interval", c.output.snapshot_interval},
                 {"snapshot_formats", c.output.snapshot_formats}};
  j["solver"] = {{"tolerance", c.solver.tolerance},
                 {"max_iterations", c.solver.max_iterations},
                 {"contact_tolerance", c.solver.contact_tolerance}};
  j["seed"] = c.seed;
  j["particle_jitter"] = c.particle_jitter;
  return j.dump(2) + "\n";
}

namespace {

bool inside_grid(const Box& b, const GridSpec& g) {
  const double tol = 1e-9 * g.cell_size;
  const Vec2 hi = g.origin + g.cell_size * Vec2(g.nx, g.ny);
  return b.lo.x() >= g.origin.x() - tol && b.lo.y() >= g.origin.y() - tol &&
         b.hi.x() <= hi.x() + tol && b.hi.y() <= hi.y() + tol &&
         b.lo.x() <= b.hi.x() && b.lo.y() <= b.hi.y();
}

bool valid_ppc(int n) { return n == 1 || n == 4 || n == 9; }

}  // namespace

const SoilMaterial& ScenarioConfig::material(const std::string& name) const {
  for (const auto& m : materials)
    if (m.name == name) return m;
  throw ConfigError("material '" + name + "' is not defined");
}

void ScenarioConfig::validate() const {
  if (!(grid.cell_size > 0.0)) throw ConfigError("grid.cell_size: must be positive");
  if (grid.nx < 1) throw ConfigError("grid.nx: must be at least 1");
  if (grid.ny < 1) throw ConfigError("grid.ny: must be at least 1");

  std::set<std::string> names;
  for (std::size_t i = 0; i < materials.size(); ++i) {
    const auto path = "materials[" + std::to_string(i) + "]";
    try {
      materials[i].validate();
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": " + std::string(e.what()).substr(8));
    }
    if (!names.insert(materials[i].name).second)
      throw ConfigError(path + ".name: duplicate material '" +
                        materials[i].name + "'");
  }
  if (regions.empty()) throw ConfigError("regions: at least one region required");
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto path = "regions[" + std::to_string(i) + "]";
    const auto& r = regions[i];
    if (!names.count(r.material))
      throw ConfigError(path + ".material: dangling reference to '" +
                        r.material + "'");
    if (!inside_grid(r.box, grid))
      throw ConfigError(path + ".box: region lies outside the grid");
    if (!valid_ppc(r.particles_per_cell))
      throw ConfigError(path + ".particles_per_cell: must be 1, 4 or 9");
  }
  if (rigid) {
    if (!(rigid->mass > 0.0)) throw ConfigError("rigid.mass: must be positive");
    if (!inside_grid(rigid->box, grid))
      throw ConfigError("rigid.box: body lies outside the grid");
    if (!valid_ppc(rigid->particles_per_cell))
      throw ConfigError("rigid.particles_per_cell: must be 1, 4 or 9");
    if (rigid->loaded_length < 0.0)
      throw ConfigError("rigid.loaded_length: must be nonnegative");
    rigid->traction.validate("rigid.traction");
  }
  for (std::size_t i = 0; i < velocity_constraints.size(); ++i)
    if (velocity_constraints[i].component < 0 ||
        velocity_constraints[i].component > 1)
      throw ConfigError("velocity_constraints[" + std::to_string(i) +
                        "].component: must be x or y");
  for (std::size_t i = 0; i < tractions.size(); ++i) {
    const auto path = "tractions[" + std::to_string(i) + "]";
    if (!(tractions[i].face_normal.norm() > 0.0))
      throw ConfigError(path + ".face_normal: must be nonzero");
    tractions[i].ramp.validate(path + ".ramp");
  }
  if (!(dt > 0.0)) throw ConfigError("dt: must be positive");
  if (!(end_time >= 0.0)) throw ConfigError("end_time: must be nonnegative");
  if (!(pic_fraction >= 0.0 && pic_fraction <= 1.0))
    throw ConfigError("pic_fraction: must lie in [0, 1]");
  if (!(water_bulk_modulus > 0.0))
    throw ConfigError("water_bulk_modulus: must be positive");
  if (!(particle_jitter >= 0.0 && particle_jitter < 0.5))
    throw ConfigError("particle_jitter: must lie in [0, 0.5)");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto path = "probes[" + std::to_string(i) + "]";
    if (probes[i].id.empty()) throw ConfigError(path + ".id: must be nonempty");
    if (!ids.insert(probes[i].id).second)
      throw ConfigError(path + ".id: duplicate probe '" + probes[i].id + "'");
    if (probes[i].fields.empty())
      throw ConfigError(path + ".fields: at least one field required");
    if (probes[i].target == ProbeTarget::kRigid && !rigid)
      throw ConfigError(path + ".target: no rigid body defined");
  }
  if (output.probe_interval < 0.0)
    throw ConfigError("output.probe_interval: must be nonnegative");
  if (output.snapshot_interval < 0.0)
    throw ConfigError("output.snapshot_interval: must be nonnegative");
  for (const auto& f : output.snapshot_formats)
    if (f != "particles-csv" && f != "legacy-vtk-points")
      throw ConfigError("output.snapshot_formats: unknown format '" + f + "'");
  if (!(solver.tolerance > 0.0)) throw ConfigError("solver.tolerance: must be positive");
  if (solver.max_iterations < 0)
    throw ConfigError("solver.max_iterations: must be nonnegative");
  if (!(solver.contact_tolerance >= 0.0))
    throw ConfigError("solver.contact_tolerance: must be nonnegative");
}

}  // namespace tpmpm
