#include "dimlab/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <Eigen/Core>
#include <fmt/format.h>

#include "dimlab/assouad.hpp"
#include "dimlab/capacity.hpp"
#include "dimlab/covering.hpp"
#include "dimlab/dyadic_tree.hpp"
#include "dimlab/error.hpp"
#include "dimlab/fourier.hpp"
#include "dimlab/intermediate.hpp"
#include "dimlab/projections.hpp"

namespace dimlab {

namespace {

constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;

const std::map<std::string, TaskConfig::Type>& task_types() {
  static const std::map<std::string, TaskConfig::Type> m{
      {"box", TaskConfig::Type::box},
      {"assouad", TaskConfig::Type::assouad},
      {"intermediate", TaskConfig::Type::intermediate},
      {"capacity-profile", TaskConfig::Type::capacity_profile},
      {"fourier", TaskConfig::Type::fourier},
      {"sweep", TaskConfig::Type::sweep},
      {"check", TaskConfig::Type::check},
  };
  return m;
}

const std::vector<std::string>& bound_ids() {
  static const std::vector<std::string> ids{"chain",         "assouad-spectrum", "assouad-theta0", "spectrum-profile",
                                            "profile-bounds", "fourier-curve",   "exceptional",    "continuity"};
  return ids;
}

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::invalid_config, field + ": " + what);
}

// Typed read with the field path in the error.
template <class T>
T get(const json& j, const std::string& key, const std::string& path, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(path + "." + key, "wrong type");
  }
}

bool uses_randomness(const TaskConfig& t) {
  using T = TaskConfig::Type;
  if (t.type == T::fourier || t.type == T::sweep) return true;
  if (t.type == T::check) {
    for (const auto& b : t.params.value("bounds", json::array()))
      if (b == "chain" || b == "continuity" || b == "fourier-curve" || b == "exceptional") return true;
  }
  return false;
}

std::string hex(std::uint64_t h) { return fmt::format("{:016x}", h); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Everything a check may reuse from earlier tasks.
struct Context {
  Context(const RunConfig& c, std::uint64_t sd, PointCloud pc) : cfg(c), seed(sd), cloud(std::move(pc)) {}

  const RunConfig& cfg;
  std::uint64_t seed;
  PointCloud cloud;
  std::optional<DyadicTree> tree;
  std::optional<BoxDimensionEstimate> box;
  std::optional<SpectrumCurve> assouad_curve;
  std::optional<AssouadEstimate> assouad;
  std::optional<IntermediateCurve> inter;
  std::optional<FourierCurve> witness;
  std::optional<FourierCurve> uniform;
  std::map<int, ProfileEstimate> box_profiles;  // by s for integer s = k
  std::string hash;
  std::vector<std::string> files;

  const DyadicTree& get_tree() {
    if (!tree) tree.emplace(cloud, tree_depth(cloud));
    return *tree;
  }
  const BoxDimensionEstimate& get_box() {
    if (!box) box = estimate_box_dimension(cloud, get_tree());
    return *box;
  }
  std::vector<double> assouad_thetas() const {
    std::vector<double> t;
    for (double v : cfg.theta_grid)
      if (v > 0.0 && v < 1.0) t.push_back(v);
    return t;
  }
  const SpectrumCurve& get_assouad_curve() {
    if (!assouad_curve) assouad_curve = assouad_spectrum(cloud, get_tree(), get_box().upper, assouad_thetas());
    return *assouad_curve;
  }
  const AssouadEstimate& get_assouad() {
    if (!assouad) assouad = assouad_dimension(cloud, get_tree(), get_box().upper);
    return *assouad;
  }
  const IntermediateCurve& get_inter() {
    if (!inter) {
      std::vector<double> t;
      for (double v : cfg.theta_grid)
        if (v > 0.0) t.push_back(v);
      inter = intermediate_curve(cloud, get_tree(), t);
    }
    return *inter;
  }
  const ProfileEstimate& get_box_profile(int s) {
    auto it = box_profiles.find(s);
    if (it == box_profiles.end()) {
      CapacityOptions opt;
      opt.solver.seed = seed;
      it = box_profiles.emplace(s, box_dimension_profile(cloud, s, opt)).first;
    }
    return it->second;
  }

  // Fourier tasks may run on a coarser net; checks use the task's cloud.
  PointCloud fourier_cloud(const json& params) const {
    if (!params.contains("delta")) return cloud;
    GeneratorSpec g = cfg.generator;
    g.delta = params.at("delta").get<double>();
    return generate(g);
  }
  ShellOptions shell_options(const json& params) const {
    ShellOptions o;
    o.seed = seed;
    o.samples_per_shell = params.value("samples_per_shell", o.samples_per_shell);
    o.z_max = params.value("z_max", o.z_max);
    return o;
  }
  const FourierCurve& get_witness(const json& params) {
    if (!witness) witness = witness_fourier_curve(fourier_cloud(params), fourier_thetas(), shell_options(params));
    return *witness;
  }
  const FourierCurve& get_uniform(const json& params) {
    if (!uniform)
      uniform = fourier_curve(DiscreteMeasure::uniform(fourier_cloud(params)), fourier_thetas(), shell_options(params));
    return *uniform;
  }
  std::vector<double> fourier_thetas() const {
    std::vector<double> t;
    for (double v : cfg.theta_grid)
      if (v >= 0.0 && v <= 1.0) t.push_back(v);
    return t;
  }

  template <class F>
  void write(const std::string& stem, F&& body) {
    const auto path = std::filesystem::path(cfg.output_dir) / (stem + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::invalid_config, fmt::format("output: cannot write {}", path.string()));
    out << "# config_hash: " << hash << "\n";
    body(out);
    files.push_back(path.string());
  }
};

void write_reference(Context& ctx, const std::string& stem, SpectrumKind kind, const std::vector<double>& thetas,
                     const std::vector<double>& values) {
  if (!ctx.cfg.example) return;
  std::vector<double> ref;
  try {
    for (double t : thetas) ref.push_back(t > 0.0 && t < 1.0 ? reference_spectrum(*ctx.cfg.example, kind, t) : NAN);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::unknown_example) return;
    throw;
  }
  ctx.write(stem + "_vs_reference", [&](std::ostream& out) {
    out << "theta,estimate,reference\n";
    for (std::size_t i = 0; i < thetas.size(); ++i)
      out << fmt::format("{:.17g},{:.17g},{}\n", thetas[i], values[i],
                         std::isnan(ref[i]) ? std::string("nan") : fmt::format("{:.17g}", ref[i]));
  });
}

json run_box(Context& ctx, const TaskConfig& t) {
  const auto& b = ctx.get_box();
  ctx.write(t.name, [&](std::ostream& out) { write_csv(out, b.curve); });
  return {{"lower", b.lower}, {"upper", b.upper}, {"fit", b.fit}};
}

json run_assouad(Context& ctx, const TaskConfig& t) {
  const auto& c = ctx.get_assouad_curve();
  const auto& a = ctx.get_assouad();
  ctx.write(t.name, [&](std::ostream& out) { write_csv(out, c); });
  write_reference(ctx, t.name, SpectrumKind::assouad, c.thetas, c.values);
  return {{"spectrum", c}, {"quasi_assouad", quasi_assouad(c)}, {"assouad_dimension", a}};
}

json run_intermediate(Context& ctx, const TaskConfig& t) {
  const auto& c = ctx.get_inter();
  ctx.write(t.name, [&](std::ostream& out) { write_csv(out, c); });
  write_reference(ctx, t.name, SpectrumKind::intermediate, c.curve.thetas, c.curve.values);
  return {{"curve", c.curve}, {"hausdorff_proxy", hausdorff_proxy(c.curve)}, {"adjustment", c.adjustment}};
}

json run_profile(Context& ctx, const TaskConfig& t) {
  const auto& p = t.params;
  CapacityOptions opt;
  opt.solver.seed = ctx.seed;
  opt.max_support = get<std::size_t>(p, "max_support", t.name, opt.max_support);
  ProfileEstimate est;
  json out;
  if (p.contains("s")) {
    const double s = get<double>(p, "s", t.name, 0.0);
    est = box_dimension_profile(ctx.cloud, s, opt);
    out = {{"s", s}};
  } else {
    const double theta = get<double>(p, "theta", t.name, 1.0);
    const int k = get<int>(p, "k", t.name, ctx.cloud.dim());
    est = intermediate_dimension_profile(ctx.cloud, theta, k, opt);
    out = {{"theta", theta}, {"k", k}};
  }
  ctx.write(t.name, [&](std::ostream& o) { write_csv(o, est.curve); });
  out["profile"] = est;
  return out;
}

json run_fourier(Context& ctx, const TaskConfig& t) {
  const std::string measure = get<std::string>(t.params, "measure", t.name, "witness");
  const FourierCurve* c = nullptr;
  if (measure == "witness") c = &ctx.get_witness(t.params);
  else if (measure == "uniform") c = &ctx.get_uniform(t.params);
  else bad(t.name + ".measure", "expected \"witness\" or \"uniform\"");
  ctx.write(t.name, [&](std::ostream& out) { write_csv(out, *c); });
  std::vector<double> th, v;
  for (const auto& pt : c->points) {
    th.push_back(pt.theta);
    v.push_back(pt.estimate);
  }
  if (measure == "witness") write_reference(ctx, t.name, SpectrumKind::fourier_set, th, v);
  return {{"measure", measure}, {"curve", *c}};
}

json run_sweep(Context& ctx, const TaskConfig& t) {
  const auto& p = t.params;
  const int k = get<int>(p, "k", t.name, 1);
  const auto est = SweepEstimator::parse(get<std::string>(p, "estimator", t.name, "box"));
  SweepOptions opt;
  opt.n_dirs = get<std::size_t>(p, "n_dirs", t.name, opt.n_dirs);
  opt.include_axes = get<bool>(p, "include_axes", t.name, opt.include_axes);
  opt.random = get<bool>(p, "random", t.name, opt.random);
  opt.seed = ctx.seed;
  const SweepResult r = direction_sweep(ctx.cloud, k, est, opt);
  ctx.write(t.name, [&](std::ostream& out) { write_csv(out, r); });
  json j = r;
  if (p.contains("u")) j["exceptional_fraction"] = exceptional_fraction(r, p.at("u").get<double>());
  return j;
}

json run_check(Context& ctx, const TaskConfig& t, bool& failed) {
  const auto& p = t.params;
  const Slacks& sl = ctx.cfg.slacks;
  const int d = ctx.cloud.dim();
  const int k = get<int>(p, "k", t.name, d > 1 ? 1 : d);
  std::vector<BoundReport> reports;
  std::vector<std::string> skipped;
  std::vector<std::string> ids = get<std::vector<std::string>>(p, "bounds", t.name, {});

  for (const auto& id : ids) {
    if (id == "chain") {
      DimensionEstimates e;
      e.dim = d;
      e.fourier = ctx.get_witness(p).points.front().estimate;
      e.hausdorff_proxy = hausdorff_proxy(ctx.get_inter().curve);
      e.lower_box = ctx.get_box().lower;
      e.upper_box = ctx.get_box().upper;
      e.assouad = ctx.get_assouad().value;
      for (auto& r : chain_check(e, sl.chain)) reports.push_back(std::move(r));
    } else if (id == "assouad-spectrum") {
      const auto& c = ctx.get_assouad_curve();
      for (auto& r : assouad_spectrum_bound_check(c, ctx.get_box().upper, quasi_assouad(c), sl.assouad))
        reports.push_back(std::move(r));
    } else if (id == "assouad-theta0") {
      const auto& c = ctx.get_assouad_curve();
      if (c.size() == 0) throw Error(ErrorKind::insufficient_scales, "assouad-theta0: empty spectrum");
      BoundReport r;
      r.bound_id = id;
      r.bound = ctx.get_box().upper;
      r.measured = c.values.front();
      r.slack = sl.assouad;
      r.pass = std::abs(r.measured - r.bound) <= r.slack;
      r.inputs = {{"theta", c.thetas.front()}, {"relation", "|measured - bound| <= slack"}};
      reports.push_back(std::move(r));
    } else if (id == "spectrum-profile") {
      const auto& c = ctx.get_assouad_curve();
      const SpectrumProfileBound b =
          spectrum_profile_bound(ctx.get_box().upper, c, ctx.get_assouad().value, quasi_assouad(c), k);
      BoundReport r;
      r.bound_id = id;
      r.bound = std::max(b.bound, b.quasi_bound);
      r.measured = ctx.get_box_profile(k).estimate;
      r.slack = sl.assouad;
      r.pass = r.measured >= r.bound - r.slack;
      r.inputs = {{"s", k}, {"theta", b.theta}, {"grid_bound", b.bound}, {"quasi_bound", b.quasi_bound},
                  {"relation", "measured >= bound"}};
      reports.push_back(std::move(r));
    } else if (id == "profile-bounds") {
      const auto [lo, hi] = profile_bounds(ctx.get_box().upper, d, k);
      const double m = ctx.get_box_profile(k).estimate;
      BoundReport a;
      a.bound_id = "profile-lower";
      a.bound = lo;
      a.measured = m;
      a.slack = sl.box;
      a.pass = m >= lo - sl.box;
      a.inputs = {{"d", d}, {"k", k}, {"relation", "measured >= bound"}};
      BoundReport b = a;
      b.bound_id = "profile-upper";
      b.bound = hi;
      b.pass = m <= hi + sl.box;
      b.inputs["relation"] = "measured <= bound";
      reports.push_back(std::move(a));
      reports.push_back(std::move(b));
    } else if (id == "fourier-curve") {
      // Concavity is a property of measures, so the uniform measure is checked.
      for (auto& r : fourier_curve_check(ctx.get_uniform(p), d, sl.fourier)) reports.push_back(std::move(r));
    } else if (id == "exceptional") {
      const double u = get<double>(p, "u", t.name, std::min<double>(k, hausdorff_proxy(ctx.get_inter().curve)));
      const double dim_h = hausdorff_proxy(ctx.get_inter().curve);
      const auto& c = ctx.get_witness(p);
      const ExceptionalBounds eb = exceptional_bounds(d, k, u, dim_h, &c);
      for (const auto& r : eb.reports) reports.push_back(r);
      for (const auto& w : eb.skipped) skipped.push_back(w);
    } else if (id == "continuity") {
      reports.push_back(continuity_criterion(ctx.get_witness(p), d, k));
    } else {
      std::string list;
      for (const auto& v : bound_ids()) list += (list.empty() ? "" : ", ") + v;
      bad(t.name + ".bounds", fmt::format("unknown bound '{}'; valid: {}", id, list));
    }
  }

  ctx.write(t.name, [&](std::ostream& out) {
    out << "bound_id,bound,measured,slack,pass\n";
    for (const auto& r : reports)
      out << fmt::format("{},{:.17g},{:.17g},{:.17g},{}\n", r.bound_id, r.bound, r.measured, r.slack, r.pass ? 1 : 0);
  });
  // JSON lines, one report each.
  const auto path = std::filesystem::path(ctx.cfg.output_dir) / (t.name + ".jsonl");
  std::ofstream jl(path, std::ios::binary);
  for (const auto& r : reports) jl << json(r).dump() << "\n";
  ctx.files.push_back(path.string());

  if (!all_pass(reports)) failed = true;
  json out{{"reports", reports}, {"pass", all_pass(reports)}};
  if (!skipped.empty()) out["skipped"] = skipped;
  return out;
}

}  // namespace

const char* to_string(TaskConfig::Type type) {
  for (const auto& [name, t] : task_types())
    if (t == type) return name.c_str();
  return "?";
}

RunConfig RunConfig::parse(const json& j) {
  if (!j.is_object()) bad("config", "top-level object expected");
  RunConfig c;
  c.source = j;

  if (j.contains("example")) {
    try {
      c.example = Example::parse(j.at("example").get<std::string>());
    } catch (const Error& e) {
      bad("example", e.what());
    } catch (const json::exception&) {
      bad("example", "string expected");
    }
    if (j.contains("generator")) bad("generator", "give either \"example\" or \"generator\", not both");
    if (!j.contains("delta")) bad("delta", "required with \"example\"");
    c.generator = c.example->generator(get<double>(j, "delta", "config", 0.0));
  } else if (j.contains("generator")) {
    try {
      c.generator = j.at("generator").get<GeneratorSpec>();
    } catch (const json::exception& e) {
      bad("generator", e.what());
    }
  } else {
    bad("generator", "required (or \"example\" with \"delta\")");
  }

  if (!j.contains("tasks") || !j.at("tasks").is_array() || j.at("tasks").empty())
    bad("tasks", "non-empty array required");
  std::size_t i = 0;
  for (const auto& tj : j.at("tasks")) {
    const std::string path = fmt::format("tasks[{}]", i);
    if (!tj.is_object() || !tj.contains("type")) bad(path, "object with a \"type\" field expected");
    const auto type = get<std::string>(tj, "type", path, "");
    const auto it = task_types().find(type);
    if (it == task_types().end()) bad(path + ".type", fmt::format("unknown task '{}'", type));
    TaskConfig t;
    t.type = it->second;
    t.name = get<std::string>(tj, "name", path, fmt::format("{:02d}_{}", i + 1, type));
    t.params = tj;
    if (t.type == TaskConfig::Type::check && (!tj.contains("bounds") || !tj.at("bounds").is_array()))
      bad(path + ".bounds", "array of bound ids required");
    if (t.type == TaskConfig::Type::capacity_profile && !tj.contains("s") && !tj.contains("theta"))
      bad(path, "capacity-profile needs \"s\" or \"theta\"");
    c.tasks.push_back(std::move(t));
    ++i;
  }

  c.theta_grid = j.contains("theta_grid") ? get<std::vector<double>>(j, "theta_grid", "config", {})
                                          : default_theta_grid();
  for (double t : c.theta_grid)
    if (!(t >= 0.0 && t <= 1.0)) bad("theta_grid", fmt::format("{} outside [0, 1]", t));
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed", "config", 0);
  c.output_dir = get<std::string>(j, "output", "config", c.output_dir);
  if (j.contains("tolerances")) {
    const auto& tj = j.at("tolerances");
    c.slacks.box = get<double>(tj, "box", "tolerances", c.slacks.box);
    c.slacks.chain = get<double>(tj, "chain", "tolerances", c.slacks.chain);
    c.slacks.assouad = get<double>(tj, "assouad", "tolerances", c.slacks.assouad);
    c.slacks.fourier = get<double>(tj, "fourier", "tolerances", c.slacks.fourier);
    for (double v : {c.slacks.box, c.slacks.chain, c.slacks.assouad, c.slacks.fourier})
      if (!(v >= 0.0)) bad("tolerances", "slacks must be non-negative");
  }
  return c;
}

json RunConfig::effective() const {
  json j = source;
  j.erase("output");  // where files go does not change them
  if (seed) j["seed"] = *seed;
  return j;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : cfg.effective().dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

RunResult run(const RunConfig& cfg, std::ostream* log) {
  for (const auto& t : cfg.tasks)
    if (!cfg.seed && uses_randomness(t))
      throw Error(ErrorKind::invalid_config, fmt::format("seed: required, task '{}' uses randomness", t.name));
  std::filesystem::create_directories(cfg.output_dir);

  RunResult res;
  const auto hash = hex(config_hash(cfg));
  json& s = res.summary;
  s["config"] = cfg.effective();
  s["config_hash"] = hash;
  s["versions"] = {{"dimlab", kVersion},
                   {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
                   {"fmt", FMT_VERSION},
                   {"compiler", __VERSION__}};
  s["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  s["tasks"] = json::array();

  const auto t_all = std::chrono::steady_clock::now();
  bool failed = false;
  try {
    auto t0 = std::chrono::steady_clock::now();
    Context ctx(cfg, cfg.seed.value_or(0), generate(cfg.generator));
    ctx.hash = hash;
    s["cloud"] = {{"label", ctx.cloud.label()}, {"dim", ctx.cloud.dim()}, {"points", ctx.cloud.size()},
                  {"resolution", ctx.cloud.resolution()}, {"wall_time_s", seconds_since(t0)}};

    for (const auto& t : cfg.tasks) {
      if (log) *log << fmt::format("[dimlab] {} ...\n", t.name) << std::flush;
      t0 = std::chrono::steady_clock::now();
      json entry{{"name", t.name}, {"type", to_string(t.type)}};
      try {
        json out;
        switch (t.type) {
          case TaskConfig::Type::box: out = run_box(ctx, t); break;
          case TaskConfig::Type::assouad: out = run_assouad(ctx, t); break;
          case TaskConfig::Type::intermediate: out = run_intermediate(ctx, t); break;
          case TaskConfig::Type::capacity_profile: out = run_profile(ctx, t); break;
          case TaskConfig::Type::fourier: out = run_fourier(ctx, t); break;
          case TaskConfig::Type::sweep: out = run_sweep(ctx, t); break;
          case TaskConfig::Type::check: out = run_check(ctx, t, failed); break;
        }
        entry["result"] = std::move(out);
      } catch (const Error& e) {
        entry["error"] = e.what();
        entry["wall_time_s"] = seconds_since(t0);
        s["tasks"].push_back(std::move(entry));
        throw Error(e.kind(), fmt::format("task '{}': {}", t.name, e.what()));
      }
      entry["wall_time_s"] = seconds_since(t0);
      if (log) *log << fmt::format("[dimlab] {} done in {:.2f} s\n", t.name, entry["wall_time_s"].get<double>());
      s["tasks"].push_back(std::move(entry));
    }
    res.files = ctx.files;
    res.exit_code = failed ? 2 : 0;
  } catch (const Error& e) {
    s["error"] = e.what();
    res.exit_code = 1;
  }
  s["wall_time_s"] = seconds_since(t_all);
  s["exit_code"] = res.exit_code;

  const auto path = std::filesystem::path(cfg.output_dir) / "summary.json";
  std::ofstream out(path, std::ios::binary);
  out << s.dump(2) << "\n";
  res.files.push_back(path.string());
  return res;
}

std::string describe(const std::string& example_id) {
  const Example ex = Example::parse(example_id);
  const ExampleDims d = example_dims(ex);
  std::ostringstream o;
  o << ex.name() << " in R^" << ex.dim() << "\n\n";
  o << fmt::format("  Fourier dimension      {:.6g}\n", d.fourier);
  o << fmt::format("  Hausdorff dimension    {:.6g}\n", d.hausdorff);
  o << fmt::format("  box dimension          {:.6g}\n", d.upper_box);
  o << fmt::format("  quasi-Assouad          {:.6g}\n", d.quasi_assouad);
  o << fmt::format("  Assouad dimension      {:.6g}\n", d.assouad);
  if (d.generic_line_projection)
    o << fmt::format("  box dim of P_V X, a.e. line V   {:.6g}\n", *d.generic_line_projection);

  std::string forms[3];
  switch (ex.id) {
    case Example::Id::seq_times_segment:
      forms[0] = "theta";
      forms[1] = "(1 + 2 theta) / (1 + theta)";
      forms[2] = "min{(3/2 - theta) / (1 - theta), 2}";
      break;
    case Example::Id::f_p:
      forms[0] = "0";
      forms[1] = "theta / (theta + p)";
      forms[2] = "min{1 / ((1 + p)(1 - theta)), 1}";
      break;
    case Example::Id::f_p_product:
      forms[0] = "0";
      forms[1] = "(no closed form)";
      forms[2] = "min{2 / ((1 + p)(1 - theta)), 2}";
      break;
    case Example::Id::segment: forms[0] = forms[1] = forms[2] = "1"; break;
    case Example::Id::square: forms[0] = forms[1] = forms[2] = "2"; break;
  }
  const SpectrumKind kinds[3] = {SpectrumKind::fourier_set, SpectrumKind::intermediate, SpectrumKind::assouad};
  const char* labels[3] = {"Fourier spectrum", "intermediate dims", "Assouad spectrum"};
  o << "\n  spectrum               formula                                 theta = 0.25, 0.5, 0.75\n";
  for (int i = 0; i < 3; ++i) {
    std::string vals;
    try {
      for (double t : {0.25, 0.5, 0.75})
        vals += fmt::format("{}{:.4f}", vals.empty() ? "" : ", ", reference_spectrum(ex, kinds[i], t));
    } catch (const Error&) {
      vals = "-";
    }
    o << fmt::format("  {:<22} {:<39} {}\n", labels[i], forms[i], vals);
  }
  return o.str();
}

}  // namespace dimlab
