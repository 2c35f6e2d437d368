#include "app.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "cornerlab/busemann.hpp"
#include "cornerlab/competition.hpp"
#include "cornerlab/geodesic.hpp"
#include "cornerlab/parallel.hpp"
#include "cornerlab/passage.hpp"
#include "cornerlab/rng.hpp"
#include "cornerlab/stationary.hpp"
#include "cornerlab/stats.hpp"

namespace cornerlab::app {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string where(std::size_t line) { return line ? "line " + std::to_string(line) + ": " : ""; }

template <class T>
T parse_number(const std::string& key, const std::string& value, std::size_t line) {
  T out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key, line, where(line) + "'" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(std::string_view(s).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

json site_json(Site s) { return json::array({s.x, s.y}); }

json identity_json(const IdentityReport& r) {
  json j{{"checked", r.checked}, {"violations", r.violations}};
  if (r.first_violation) j["first_violation"] = site_json(*r.first_violation);
  return j;
}

class Outputs {
 public:
  explicit Outputs(const ExperimentConfig& cfg) : dir_(cfg.out) { std::filesystem::create_directories(dir_); }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const auto path = dir_ / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    body(os);
    files_.push_back(name);
  }
  void write_json(const std::string& name, const json& j) {
    write(name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }
  const std::vector<std::string>& files() const { return files_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

struct Context {
  const ExperimentConfig& cfg;
  WeightDistribution dist;
  Outputs& out;
  std::ostream& log;
  int workers;
};

LatticeWindow observation_window(const ExperimentConfig& cfg) {
  return LatticeWindow({0, 0}, cfg.window_width, cfg.window_height);
}

json exact_gradient_json(const WeightDistribution& d, DirectionU xi) {
  if (!d.is_solvable() || !xi.interior()) return nullptr;
  const auto g = shape_gradient_exact(d, xi);
  return json::array({g[0], g[1]});
}

// ---- commands --------------------------------------------------------------

int cmd_gen(Context& c) {
  const SiteWeightField field(observation_window(c.cfg), c.dist, c.cfg.seed, true, c.workers);
  if (c.cfg.wants("csv")) c.out.write("weights.csv", [&](std::ostream& os) { field.export_csv(os); });
  if (c.cfg.wants("json")) {
    std::vector<double> v;
    for (std::size_t k = 0; k < field.window().size(); ++k) v.push_back(field.weight_at(field.window().site(k)));
    c.out.write_json("weights.json", {{"distribution", c.dist.describe()},
                                      {"sites", v.size()},
                                      {"mean", stats::mean(v)},
                                      {"min", *std::min_element(v.begin(), v.end())},
                                      {"max", *std::max_element(v.begin(), v.end())},
                                      {"law_mean", c.dist.mean()}});
  }
  c.log << "generated " << field.window().size() << " weights\n";
  return 0;
}

int cmd_shape(Context& c) {
  const DirectionU xi(c.cfg.a);
  const auto est = shape_estimate(c.dist, xi, c.cfg.n, c.cfg.reps, c.cfg.seed, c.workers);
  if (c.cfg.wants("csv")) {
    c.out.write("shape.csv", [&](std::ostream& os) {
      os << "replicate,seed,g_over_n\n";
      for (std::size_t r = 0; r < est.samples.size(); ++r) {
        os << r << ',' << rng::derive_seed(c.cfg.seed, r) << ',' << json(est.samples[r]).dump() << '\n';
      }
    });
  }
  json j{{"n", est.n},         {"terminal", site_json(est.terminal)}, {"replicates", est.samples.size()},
         {"mean", est.mean},   {"standard_error", est.standard_error}, {"exact", nullptr},
         {"relative_error", nullptr}};
  if (c.dist.is_solvable()) {
    const double g = shape_exact(c.dist, xi);
    j["exact"] = g;
    j["relative_error"] = (est.mean - g) / g;
  }
  if (c.cfg.wants("json")) c.out.write_json("shape.json", j);
  c.log << "G/n = " << est.mean << " +- " << est.standard_error << '\n';
  return 0;
}

int cmd_busemann(Context& c) {
  const DirectionU xi(c.cfg.a);
  std::int64_t top = c.cfg.n;
  for (auto k : c.cfg.ladder) top = std::max(top, k);
  const Site far = xi.lattice_point(top);
  const LatticeWindow w = observation_window(c.cfg);
  const SiteWeightField field(LatticeWindow::spanning({0, 0}, Site{std::max(far.x, w.upper_right().x),
                                                                    std::max(far.y, w.upper_right().y)}),
                              c.dist, c.cfg.seed, true, c.workers);
  std::optional<BusemannEstimate> est;
  try {
    est.emplace(estimate(field, xi, c.cfg.n, w, c.workers));
  } catch (const InsufficientMargin& e) {
    throw ConfigError("window", 0, e.what());
  }
  const auto rec = est->check_recovery();
  const auto clo = est->check_closure();
  const bool staircase = assemble_busemann(*est) == assemble_busemann(*est, true);
  json j{{"n", c.cfg.n},
         {"sink", site_json(est->sink())},
         {"window", json::array({w.width(), w.height()})},
         {"mean_I", est->mean_horizontal()},
         {"mean_J", est->mean_vertical()},
         {"exact_gradient", exact_gradient_json(c.dist, xi)},
         {"recovery", identity_json(rec)},
         {"closure", identity_json(clo)},
         {"staircase_independent", staircase}};
  std::array<double, 2> h{-est->mean_horizontal(), -est->mean_vertical()};
  if (c.dist.is_solvable() && xi.interior()) {
    const auto g = shape_gradient_exact(c.dist, xi);
    h = {-g[0], -g[1]};
  }
  const auto dev = uniform_deviation_check(*est, h);
  j["uniform_deviation"] = {{"h", json::array({h[0], h[1]})},
                            {"max", dev.max_deviation},
                            {"argmax", site_json(dev.argmax)},
                            {"min_level", dev.min_level}};
  const auto sw = sandwich_check(field, xi, c.cfg.n, w.origin());
  j["sandwich"] = {{"paths", sw.paths_checked}, {"violations", sw.violations}, {"enumerated", sw.enumerated}};
  if (!c.cfg.ladder.empty()) {
    json rungs = json::array();
    try {
      for (const auto& r : stabilization_diagnostic(field, xi, c.cfg.ladder, w, c.workers)) {
        rungs.push_back({{"n_low", r.n_low}, {"n_high", r.n_high}, {"sup_I", r.sup_horizontal}, {"sup_J", r.sup_vertical}});
      }
    } catch (const InsufficientMargin& e) {
      throw ConfigError("ladder", 0, e.what());
    }
    j["stabilization"] = rungs;
  }
  if (c.cfg.wants("csv")) c.out.write("busemann.csv", [&](std::ostream& os) { est->export_csv(os); });
  if (c.cfg.wants("json")) c.out.write_json("busemann.json", j);
  c.log << "mean I " << est->mean_horizontal() << ", mean J " << est->mean_vertical() << '\n';
  return rec.ok() && clo.ok() && staircase && sw.ok() ? 0 : 1;
}

int cmd_geodesic(Context& c) {
  const DirectionU xi(c.cfg.a);
  const Site sink = xi.lattice_point(c.cfg.n);
  const LatticeWindow win = LatticeWindow::spanning({0, 0}, sink);
  const SiteWeightField field(win, c.dist, c.cfg.seed, true, c.workers);
  const GradientPlane g(backward_plane(field, sink, c.workers));
  const std::vector<std::pair<std::string, TiePolicy>> policies{
      {"leftmost", TiePolicy::leftmost()}, {"rightmost", TiePolicy::rightmost()},
      {"stationary", TiePolicy::stationary(c.cfg.seed)}};
  std::vector<LatticePath> paths;
  json j{{"sink", site_json(sink)}, {"passage", g.passage({0, 0})}, {"paths", json::object()}};
  bool ok = true;
  for (const auto& [name, pol] : policies) {
    paths.push_back(extract_geodesic(g, {0, 0}, pol));
    const double wsum = path_weight(field, paths.back());
    ok = ok && wsum == g.passage({0, 0});
    j["paths"][name] = {{"weight", wsum}, {"final_e1", paths.back().e1_profile().back()}};
  }
  j["geodesic_property"] = ok;
  if (c.cfg.wants("csv")) {
    c.out.write("geodesic.csv", [&](std::ostream& os) {
      os << "policy,index,x,y\n";
      for (std::size_t p = 0; p < paths.size(); ++p) {
        const auto pts = paths[p].sites();
        for (std::size_t i = 0; i < pts.size(); ++i) {
          os << policies[p].first << ',' << i << ',' << pts[i].x << ',' << pts[i].y << '\n';
        }
      }
    });
  }
  if (c.cfg.wants("svg")) {
    const auto tree = build_tree(field, win, TiePolicy::leftmost());
    c.out.write("geodesic.svg", [&](std::ostream& os) { tree.export_svg(os, paths); });
  }
  if (c.cfg.wants("json")) c.out.write_json("geodesic.json", j);
  c.log << "G = " << g.passage({0, 0}) << '\n';
  return ok ? 0 : 1;
}

int cmd_tree(Context& c) {
  const LatticeWindow w = observation_window(c.cfg);
  const SiteWeightField field(w, c.dist, c.cfg.seed, true, c.workers);
  const auto tree = build_tree(field, w, TiePolicy::leftmost());
  std::size_t e1 = 0, e2 = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const auto s = tree.subtree(w.site(k));
    if (s) (*s == Step::E1 ? e1 : e2)++;
  }
  if (c.cfg.wants("csv")) c.out.write("tree.csv", [&](std::ostream& os) { tree.export_csv(os); });
  if (c.cfg.wants("svg")) c.out.write("tree.svg", [&](std::ostream& os) { tree.export_svg(os); });
  if (c.cfg.wants("json")) {
    c.out.write_json("tree.json", {{"sites", w.size()}, {"ties", tree.ties().size()}, {"e1_subtree", e1}, {"e2_subtree", e2}});
  }
  c.log << "tree: " << e1 << " sites in the e1 subtree, " << e2 << " in the e2 subtree\n";
  return 0;
}

json angle_json(const AngleDistribution& d) {
  json edges = json::array(), exact = json::array(), empirical = json::array();
  const auto th = d.thetas();
  const std::size_t bins = d.histogram.counts.size();
  for (std::size_t b = 0; b <= bins; ++b) {
    const double t = d.histogram.lo + (d.histogram.hi - d.histogram.lo) * static_cast<double>(b) / static_cast<double>(bins);
    edges.push_back(t);
    exact.push_back(interface_angle_cdf_exact(d.distribution, t, d.side));
    empirical.push_back(static_cast<double>(std::count_if(th.begin(), th.end(), [t](double x) { return x <= t; })) /
                        static_cast<double>(th.size()));
  }
  return {{"side", to_string(d.side)},
          {"N", d.n},
          {"replicates", d.samples.size()},
          {"ks", d.ks},
          {"ks_pvalue", d.ks_pvalue},
          {"mean_theta", stats::mean(th)},
          {"histogram", d.histogram.counts},
          {"cdf_points", edges},
          {"cdf_exact", exact},
          {"cdf_empirical", empirical}};
}

int cmd_interface(Context& c) {
  if (!c.dist.is_solvable()) throw ConfigError("dist", 0, "interface angle law needs exponential or geometric weights");
  std::vector<AngleDistribution> laws;
  const auto reps = static_cast<std::size_t>(c.cfg.reps);
  if (c.dist.is_atomic()) {
    auto [l, r] = mc_angle_distribution_pair(c.dist, c.cfg.n, reps, c.cfg.seed, c.workers);
    laws.push_back(std::move(l));
    laws.push_back(std::move(r));
  } else {
    laws.push_back(mc_angle_distribution(c.dist, c.cfg.n, reps, InterfaceSide::Unique, c.cfg.seed, c.workers));
  }
  if (c.cfg.wants("csv")) {
    c.out.write("angles.csv", [&](std::ostream& os) {
      for (std::size_t i = 0; i < laws.size(); ++i) {
        std::ostringstream s;
        laws[i].export_csv(s);
        const std::string body = s.str();
        os << (i == 0 ? body : body.substr(body.find('\n') + 1));
      }
    });
  }
  if (c.cfg.wants("json")) {
    json j{{"distribution", c.dist.describe()}, {"laws", json::array()}};
    for (const auto& l : laws) j["laws"].push_back(angle_json(l));
    c.out.write_json("interface.json", j);
  }
  if (c.cfg.wants("svg")) {
    const SiteWeightField field(LatticeWindow({0, 0}, c.cfg.n + 1, c.cfg.n + 1), c.dist,
                                rng::derive_seed(c.cfg.seed, 0), true, c.workers);
    const InterfaceSide side = c.dist.is_atomic() ? InterfaceSide::Left : InterfaceSide::Unique;
    const auto tree = build_tree(field, field.window(), TiePolicy::leftmost());
    c.out.write("interface.svg", [&](std::ostream& os) {
      export_interface_svg(os, tree, trace_interface(field, c.cfg.n, side));
    });
  }
  for (const auto& l : laws) c.log << to_string(l.side) << " KS " << l.ks << '\n';
  return 0;
}

int cmd_stationary(Context& c) {
  if (c.cfg.reps < 100) throw ConfigError("reps", 0, "stationary needs at least 100 replicates");
  const DirectionU xi(c.cfg.a);
  const auto r = stationarity_tests(c.dist, xi, c.cfg.length, static_cast<std::size_t>(c.cfg.reps), c.cfg.seed, c.workers);
  if (c.cfg.wants("json")) {
    c.out.write_json("stationary.json",
                     {{"distribution", c.dist.describe()},
                      {"a", xi.a()},
                      {"L", r.length},
                      {"replicates", r.replicates},
                      {"convention", "G(v) includes the weight at v; G(v) - G(0) equals the passage time from 0 "
                                     "with the terminal weight at v added and the weight at 0 removed"},
                      {"alpha", r.alpha},
                      {"beta", r.beta},
                      {"ks_far_row", r.ks_far_row},
                      {"ks_far_row_pvalue", r.ks_far_row_pvalue},
                      {"ks_row_mean", r.ks_row_mean},
                      {"autocorrelation", r.autocorrelation},
                      {"autocorrelation_bound", r.autocorrelation_bound},
                      {"staircase_samples", r.staircase_samples},
                      {"mean_I", r.mean_horizontal},
                      {"se_I", r.se_horizontal},
                      {"mean_J", r.mean_vertical},
                      {"se_J", r.se_vertical},
                      {"shape_ratio", r.shape_ratio},
                      {"se_shape_ratio", r.se_shape_ratio},
                      {"shape_target", r.shape_target},
                      {"recovery_violations", r.recovery_violations},
                      {"closure_violations", r.closure_violations}});
  }
  if (c.cfg.wants("csv")) {
    const std::uint64_t s = rng::derive_seed(c.cfg.seed, 0);
    const auto prof = sample_boundary(c.dist, xi, c.cfg.length, s);
    const StationaryPlane plane(prof, SiteWeightField(LatticeWindow({1, 1}, c.cfg.length, c.cfg.length), c.dist, s));
    c.out.write("increments.csv", [&](std::ostream& os) { plane.export_increments_csv(os); });
  }
  c.log << "KS " << r.ks_far_row << ", mean I " << r.mean_horizontal << ", mean J " << r.mean_vertical << '\n';
  return r.recovery_violations == 0 && r.closure_violations == 0 ? 0 : 1;
}

JunctionCensus box_census(const SiteWeightField& field, Site sink, const LatticeWindow& box) {
  const GradientPlane g(backward_plane(field, sink, LatticeWindow::spanning(box.origin(), sink)));
  std::vector<LatticePath> family;
  for (std::size_t k = 0; k < box.size(); ++k) family.push_back(extract_geodesic(g, box.site(k), TiePolicy::leftmost()));
  return junction_census(family, box);
}

int cmd_coalesce(Context& c) {
  const DirectionU xi(c.cfg.a);
  const auto reps = static_cast<std::size_t>(c.cfg.reps);
  std::vector<CoalescenceTrial> trials(reps, CoalescenceTrial{});
  parallel_for(reps, c.workers, [&](std::size_t r) {
    trials[r] = coalescence_trial(c.dist, rng::derive_seed(c.cfg.seed, r), c.cfg.n, xi, {10, -10}, TiePolicy::leftmost());
  });
  std::size_t early = 0;
  for (const auto& t : trials) early += t.early() ? 1 : 0;
  const Site sink = xi.lattice_point(c.cfg.n);
  const LatticeWindow box = observation_window(c.cfg);
  if (!dominated(box.upper_right(), sink)) throw ConfigError("window", 0, "census box must lie below the sink");
  const SiteWeightField field(LatticeWindow::spanning({0, 0}, sink), c.dist, c.cfg.seed, true, c.workers);
  const auto census = box_census(field, sink, box);
  if (c.cfg.wants("csv")) {
    c.out.write("coalesce.csv", [&](std::ostream& os) {
      os << "replicate,seed,meet_x,meet_y,meet_level,early\n";
      for (std::size_t r = 0; r < reps; ++r) {
        const auto& t = trials[r];
        os << r << ',' << rng::derive_seed(c.cfg.seed, r) << ',' << t.meet.site.x << ',' << t.meet.site.y << ','
           << t.meet.site.level() << ',' << (t.early() ? 1 : 0) << '\n';
      }
    });
  }
  if (c.cfg.wants("json")) {
    c.out.write_json("coalesce.json", {{"n", c.cfg.n},
                                       {"replicates", reps},
                                       {"early_fraction", static_cast<double>(early) / static_cast<double>(reps)},
                                       {"census",
                                        {{"sources", census.sources},
                                         {"merges", census.merges},
                                         {"exits", census.exits},
                                         {"junctions", census.junctions},
                                         {"leaves", census.leaves},
                                         {"forest_identity", census.forest_identity},
                                         {"binary_identity", census.binary_identity},
                                         {"junction_density", census.junction_density}}}});
  }
  c.log << "early coalescence in " << early << " of " << reps << " pairs\n";
  return census.forest_identity ? 0 : 1;
}

// ---- verify ----------------------------------------------------------------

double brute_passage(const SiteWeightField& f, Site u, Site v) {
  if (u == v) return 0.0;
  double best = kNoPath;
  if (u.x < v.x) best = std::max(best, brute_passage(f, u + kE1, v));
  if (u.y < v.y) best = std::max(best, brute_passage(f, u + kE2, v));
  return f.weight_at(u) + best;
}

struct Check {
  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
  void add(std::size_t c, std::size_t v) {
    checked += c;
    violations += v;
  }
};

int cmd_verify(Context& c) {
  const std::uint64_t base = c.cfg.seed;
  auto seed = [base](std::uint64_t k) { return rng::derive_seed(base, k); };
  std::vector<Check> checks;

  Check oracle{"dp_vs_enumeration"};
  for (std::uint64_t k = 0; k < 100; ++k) {
    const std::uint64_t s = seed(k);
    const auto w = 2 + static_cast<std::int64_t>(s % 5), h = 2 + static_cast<std::int64_t>((s >> 8) % 5);
    const SiteWeightField f(LatticeWindow({0, 0}, w, h), Geometric{0.4}, s);
    const auto fwd = forward_plane(f, {0, 0});
    const auto bwd = backward_plane(f, {w - 1, h - 1});
    for (std::size_t i = 0; i < f.window().size(); ++i) {
      const Site v = f.window().site(i);
      oracle.add(2, (fwd.at(v) != brute_passage(f, {0, 0}, v)) + (bwd.at(v) != brute_passage(f, v, {w - 1, h - 1})));
    }
  }
  checks.push_back(oracle);

  Check recovery{"recovery"}, closure{"closure"}, chains{"gradient_chains"};
  for (std::uint64_t k = 0; k < 10; ++k) {
    const SiteWeightField f(LatticeWindow({0, 0}, 60, 60), c.dist, seed(100 + k));
    const GradientPlane g(backward_plane(f, {59, 59}));
    const auto r = check_recovery(g), cl = check_closure(g);
    recovery.add(r.checked, r.violations);
    closure.add(cl.checked, cl.violations);
    const auto m = check_gradient_monotonicity(SiteWeightField(LatticeWindow({0, 0}, 41, 41), c.dist, seed(200 + k)), 40);
    chains.add(m.comparisons, m.violations);
  }
  checks.push_back(recovery);
  checks.push_back(closure);
  checks.push_back(chains);

  Check direction{"direction_monotonicity"};
  for (std::uint64_t k = 0; k < 5; ++k) {
    const SiteWeightField f(LatticeWindow({0, 0}, 81, 81), c.dist, seed(300 + k));
    const auto r = direction_monotonicity_check(f, 0.3, 0.7, 100, LatticeWindow({0, 0}, 10, 10));
    direction.add(r.checked, r.violations);
  }
  checks.push_back(direction);

  Check sandwich{"sandwich"};
  for (std::uint64_t k = 0; k < 100; ++k) {
    const SiteWeightField f(LatticeWindow({0, 0}, 6, 6), Geometric{0.5}, seed(400 + k));
    const auto r = sandwich_check(f, DirectionU(0.5), 10, {0, 0});
    sandwich.add(r.paths_checked, r.violations);
  }
  checks.push_back(sandwich);

  Check separation{"separation"}, dual{"dual_path"};
  for (std::uint64_t k = 0; k < 10; ++k) {
    const SiteWeightField f(LatticeWindow({0, 0}, 61, 61), Geometric{0.5}, seed(500 + k));
    const auto both = trace_interfaces(f, 60);
    const auto l = separation_audit(build_tree(f, f.window(), TiePolicy::leftmost()), both.left);
    const auto r = separation_audit(build_tree(f, f.window(), TiePolicy::rightmost()), both.right);
    separation.add(l.checked + r.checked, l.violations + r.violations);
    dual.add(2, !both.left.path_property() + !both.right.path_property());
  }
  checks.push_back(separation);
  checks.push_back(dual);

  Check forest{"forest_identity"};
  for (std::uint64_t k = 0; k < 5; ++k) {
    const SiteWeightField f(LatticeWindow({0, 0}, 81, 81), c.dist, seed(600 + k));
    const auto census = box_census(f, {80, 80}, LatticeWindow({0, 0}, 12, 12));
    forest.add(1, !census.forest_identity);
  }
  checks.push_back(forest);

  if (c.dist.is_solvable()) {
    Check stationary{"stationary_recovery_closure"};
    for (std::uint64_t k = 0; k < 5; ++k) {
      const auto prof = sample_boundary(c.dist, DirectionU(0.5), 40, seed(700 + k));
      const StationaryPlane p(prof, SiteWeightField(LatticeWindow({1, 1}, 40, 40), c.dist, seed(700 + k)));
      const auto r = p.check_recovery(), cl = p.check_closure();
      stationary.add(r.checked + cl.checked, r.violations + cl.violations);
    }
    checks.push_back(stationary);
  }

  json j{{"distribution", c.dist.describe()}, {"checks", json::array()}};
  std::size_t total = 0;
  for (const auto& ch : checks) {
    j["checks"].push_back({{"name", ch.name}, {"checked", ch.checked}, {"violations", ch.violations}});
    c.log << (ch.violations ? "FAIL " : "ok   ") << ch.name << ": " << ch.checked << " checked, " << ch.violations
          << " violations\n";
    total += ch.violations;
  }
  j["violations"] = total;
  if (c.cfg.wants("json")) c.out.write_json("verify.json", j);
  return total == 0 ? 0 : 1;
}

}  // namespace

bool ExperimentConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"gen",       "shape",      "busemann", "geodesic", "tree",
                                              "interface", "stationary", "coalesce", "verify"};
  return names;
}

void set_field(ExperimentConfig& cfg, const std::string& key, const std::string& raw, std::size_t line) {
  const std::string value = trim(raw);
  auto i64 = [&] { return parse_number<std::int64_t>(key, value, line); };
  auto f64 = [&] { return parse_number<double>(key, value, line); };
  if (key == "command") {
    cfg.command = value;
  } else if (key == "dist") {
    cfg.dist = value;
  } else if (key == "mean") {
    cfg.mean = f64();
  } else if (key == "p0") {
    cfg.p0 = f64();
  } else if (key == "p") {
    cfg.p = f64();
  } else if (key == "low") {
    cfg.low = f64();
  } else if (key == "a") {
    cfg.a = f64();
  } else if (key == "n") {
    cfg.n = i64();
  } else if (key == "ladder") {
    cfg.ladder.clear();
    for (const auto& part : split(value, ',')) cfg.ladder.push_back(parse_number<std::int64_t>(key, part, line));
  } else if (key == "window") {
    const auto x = value.find_first_of("xX");
    if (x == std::string::npos) throw ConfigError(key, line, where(line) + "'window' expects WxH, got '" + value + "'");
    cfg.window_width = parse_number<std::int64_t>(key, value.substr(0, x), line);
    cfg.window_height = parse_number<std::int64_t>(key, value.substr(x + 1), line);
  } else if (key == "L" || key == "length") {
    cfg.length = i64();
  } else if (key == "reps") {
    cfg.reps = i64();
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value, line);
  } else if (key == "workers") {
    cfg.workers = parse_number<int>(key, value, line);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "format") {
    cfg.formats = split(value, ',');
    for (const auto& f : cfg.formats) {
      if (f != "csv" && f != "json" && f != "svg") {
        throw ConfigError(key, line, where(line) + "unknown format '" + f + "' (csv, json, svg)");
      }
    }
  } else {
    throw ConfigError(key, line, where(line) + "unknown key '" + key + "'");
  }
}

void parse_config(ExperimentConfig& cfg, std::istream& in) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto hash = text.find('#');
    const std::string body = trim(std::string_view(text).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("", line, where(line) + "expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw ConfigError("", line, where(line) + "missing key before '='");
    set_field(cfg, key, body.substr(eq + 1), line);
  }
}

WeightDistribution make_distribution(const ExperimentConfig& cfg) {
  try {
    if (cfg.dist == "exponential") return Exponential{cfg.mean};
    if (cfg.dist == "geometric") return Geometric{cfg.p0};
    if (cfg.dist == "bernoulli") return BernoulliShifted{cfg.p, cfg.low};
  } catch (const std::invalid_argument& e) {
    throw ConfigError("dist", 0, e.what());
  }
  throw ConfigError("dist", 0, "unknown distribution '" + cfg.dist + "' (exponential, geometric, bernoulli)");
}

void validate(const ExperimentConfig& cfg) {
  const auto& cmds = commands();
  if (std::find(cmds.begin(), cmds.end(), cfg.command) == cmds.end()) {
    throw ConfigError("command", 0, "unknown command '" + cfg.command + "'");
  }
  make_distribution(cfg);
  if (cfg.reps < 1) throw ConfigError("reps", 0, "reps must be at least 1");
  if (cfg.n < 1) throw ConfigError("n", 0, "n must be at least 1");
  if (cfg.window_width < 1 || cfg.window_height < 1) throw ConfigError("window", 0, "window dimensions must be positive");
  if (cfg.length < 2) throw ConfigError("L", 0, "L must be at least 2");
  if (!(cfg.a >= 0.0 && cfg.a <= 1.0)) throw ConfigError("a", 0, "a must lie in [0, 1]");
  if (cfg.workers < 0) throw ConfigError("workers", 0, "workers must be non-negative (0 = all cores)");
  for (auto k : cfg.ladder) {
    if (k < 1) throw ConfigError("ladder", 0, "ladder entries must be positive");
  }
  if (cfg.out.empty()) throw ConfigError("out", 0, "output directory is empty");
}

json to_json(const ExperimentConfig& cfg) {
  return {{"command", cfg.command}, {"dist", cfg.dist},
          {"mean", cfg.mean},       {"p0", cfg.p0},
          {"p", cfg.p},             {"low", cfg.low},
          {"a", cfg.a},             {"n", cfg.n},
          {"ladder", cfg.ladder},   {"window", std::to_string(cfg.window_width) + "x" + std::to_string(cfg.window_height)},
          {"L", cfg.length},        {"reps", cfg.reps},
          {"seed", cfg.seed},       {"workers", cfg.workers},
          {"out", cfg.out},         {"format", cfg.formats}};
}

int run(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  const auto started = std::chrono::system_clock::now();
  Outputs out(cfg);
  Context c{cfg, make_distribution(cfg), out, log, resolve_workers(cfg.workers)};
  static const std::map<std::string, int (*)(Context&)> table{
      {"gen", cmd_gen},         {"shape", cmd_shape},           {"busemann", cmd_busemann},
      {"geodesic", cmd_geodesic}, {"tree", cmd_tree},           {"interface", cmd_interface},
      {"stationary", cmd_stationary}, {"coalesce", cmd_coalesce}, {"verify", cmd_verify}};
  const int status = table.at(cfg.command)(c);
  const auto elapsed = std::chrono::duration<double>(std::chrono::system_clock::now() - started).count();
  json manifest{{"version", kVersion},
                {"config", to_json(cfg)},
                {"distribution", c.dist.describe()},
                {"outputs", out.files()},
                {"status", status},
                {"started_unix", std::chrono::duration_cast<std::chrono::seconds>(started.time_since_epoch()).count()},
                {"elapsed_seconds", elapsed}};
  std::ofstream(out.dir() / "manifest.json") << manifest.dump(2) << '\n';
  return status;
}

}  // namespace cornerlab::app
