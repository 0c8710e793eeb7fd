#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>

#include "simplicial/analysis.hpp"
#include "simplicial/attention.hpp"
#include "simplicial/collapse.hpp"
#include "simplicial/curvature.hpp"
#include "simplicial/errors.hpp"
#include "simplicial/hypergraph.hpp"
#include "simplicial/io.hpp"
#include "simplicial/lipschitz.hpp"
#include "simplicial/random.hpp"
#include "simplicial/rope.hpp"
#include "simplicial/routing.hpp"

namespace simplicial::cli {

namespace {

using ojson = nlohmann::ordered_json;

// Effective config without the output path, so artifacts do not depend on
// where they are written.
ojson config_record(const ExperimentConfig& cfg) {
  ojson j = ojson::parse(to_json(cfg));
  j.erase("output");
  return j;
}

ojson header(const std::string& command, const ExperimentConfig& cfg) {
  ojson j;
  j["command"] = command;
  j["schema"] = 1;
  j["config"] = config_record(cfg);
  return j;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// JSON has no NaN or infinity; those become null.
ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

void require_single_head(const ExperimentConfig& cfg, const std::string& what) {
  if (cfg.heads != 1) throw ConfigError("config field 'heads' must be 1 for " + what);
}

std::vector<SimplicialParams> make_layers(const ExperimentConfig& cfg, Rng& rng) {
  std::vector<SimplicialParams> layers;
  for (std::size_t t = 0; t < cfg.layers; ++t) {
    layers.push_back(SimplicialParams::random(cfg.order, cfg.d, cfg.heads, cfg.weight_scale, rng));
  }
  return layers;
}

CheckStatus combine(CheckStatus a, CheckStatus b) {
  if (a == CheckStatus::violated || b == CheckStatus::violated) return CheckStatus::violated;
  if (a == CheckStatus::not_applicable || b == CheckStatus::not_applicable) return CheckStatus::not_applicable;
  return CheckStatus::holds;
}

template <class Real, class Format>
CommandOutput collapse_output(const ExperimentConfig& cfg, const CollapseReport<Real>& rep, Format&& format,
                              ojson precision) {
  const auto& tr = rep.trajectory;
  std::vector<double> log_res;
  for (const auto& r : tr.res_norm) log_res.push_back(log10_of(r));

  std::vector<std::string> log_col, gamma_col, spread_col, status_col;
  ojson layers = ojson::array();
  ojson violated = ojson::array();
  CheckStatus overall = rep.stacked.status;
  for (std::size_t t = 0; t < tr.size(); ++t) {
    log_col.push_back(format_double(log_res[t]));
    if (t == 0) {
      gamma_col.emplace_back("nan");
      spread_col.emplace_back("nan");
      status_col.emplace_back("none");
      continue;
    }
    const auto& c = rep.layers[t - 1];
    gamma_col.push_back(format(c.gamma.gamma));
    spread_col.push_back(format(c.gamma.spread));
    status_col.emplace_back(to_string(c.status));
    overall = combine(overall, c.status);
    if (c.status == CheckStatus::violated) violated.push_back(t);
    ojson l;
    l["t"] = t;
    l["res_norm"] = format(c.lhs);
    l["log10_res_norm"] = number(log_res[t]);
    l["bound_rhs"] = format(c.rhs);
    l["log10_bound_rhs"] = number(log10_of(c.rhs));
    l["gamma"] = format(c.gamma.gamma);
    l["spread"] = format(c.gamma.spread);
    l["precondition"] = c.gamma.precondition;
    l["status"] = std::string(to_string(c.status));
    layers.push_back(std::move(l));
  }

  std::ostringstream csv;
  write_trajectory_csv(csv, tr, format,
                       {{"log10_res_norm", log_col}, {"gamma", gamma_col}, {"spread", spread_col},
                        {"status", status_col}});

  ojson j = header("collapse", cfg);
  j["precision"] = std::move(precision);
  j["layers"] = std::move(layers);
  ojson st;
  st["log10_lhs"] = number(rep.stacked.log10_lhs);
  st["log10_rhs"] = number(rep.stacked.log10_rhs);
  st["gamma_max"] = format(rep.stacked.gamma_max);
  st["status"] = std::string(to_string(rep.stacked.status));
  j["stacked_bound"] = std::move(st);
  j["cubic_slope"] = number(cubic_slope(log_res));
  j["final_res_norm"] = number(static_cast<double>(tr.res_norm.back()));
  j["final_res_norm_text"] = format(tr.res_norm.back());
  j["final_log10_res_norm"] = number(log_res.back());
  j["violated_layers"] = violated;
  j["status"] = std::string(to_string(overall));

  CommandOutput out;
  out.exit_code = overall == CheckStatus::violated ? kExitViolated : kExitOk;
  out.summary = "collapse: " + std::string(to_string(overall)) + ", final log10 res_norm " +
                format_double(log_res.back());
  out.files["collapse.csv"] = csv.str();
  out.files["collapse.json"] = dump(j);
  return out;
}

SimplicialMask load_mask(const ExperimentConfig& cfg) {
  if (cfg.mask == "causal") return causal_mask(cfg.n, cfg.order);
  if (cfg.mask == "file") {
    SimplicialMask m = parse_mask(read_file(cfg.mask_file));
    if (m.tokens() != cfg.n || m.order() != cfg.order) {
      throw ConfigError("mask file '" + cfg.mask_file + "' has n=" + std::to_string(m.tokens()) + ", N=" +
                        std::to_string(m.order()) + " but the config asks for n=" + std::to_string(cfg.n) +
                        ", N=" + std::to_string(cfg.order));
    }
    return m;
  }
  throw ConfigError("config field 'mask' must be causal or file for masked-collapse");
}

// max |a(idx) + b(idx with axes i, j exchanged)|
double antisymmetry_gap(const DenseTensor& a, const DenseTensor& b, std::size_t i, std::size_t j) {
  const std::size_t n = a.shape().front();
  std::vector<std::size_t> idx(a.rank(), 0), swapped(a.rank());
  double gap = 0.0;
  do {
    swapped = idx;
    std::swap(swapped[i], swapped[j]);
    gap = std::max(gap, std::abs(a.at(std::span<const std::size_t>(idx)) +
                                 b.at(std::span<const std::size_t>(swapped))));
  } while (next_index(idx, n));
  return gap;
}

std::size_t brute_force_chains(const PairMask& pairs, std::size_t order) {
  const std::size_t n = pairs.tokens();
  std::vector<std::size_t> idx(order + 1, 0);
  std::size_t count = 0;
  do {
    bool ok = true;
    for (std::size_t m = 0; m < order && ok; ++m) ok = pairs(idx[m], idx[m + 1]);
    count += ok ? 1 : 0;
  } while (next_index(idx, n));
  return count;
}

}  // namespace

CommandOutput cmd_collapse(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.mask != "none") throw ConfigError("config field 'mask' must be none for collapse");
  require_single_head(cfg, "collapse");
  Rng rng(cfg.seed);
  Matrix x0 = rng.uniform_matrix(cfg.n, cfg.d, cfg.feature_scale);
  auto layers = make_layers(cfg, rng);
  if (cfg.precision == "double") {
    auto rep = collapse_report<double>(x0, layers);
    ojson p;
    p["mode"] = "double";
    p["bits"] = 53;
    p["resolved"] = nullptr;
    return collapse_output(cfg, rep, [](double v) { return format_double(v); }, std::move(p));
  }
  auto ext = collapse_report_extended(x0, layers, 128, cfg.max_bits);
  ojson p;
  p["mode"] = "extended";
  p["bits"] = ext.bits;
  p["resolved"] = ext.resolved;
  PrecisionScope scope(ext.bits);
  return collapse_output(cfg, ext.report, [](const ExtendedReal& v) { return format_real(v); }, std::move(p));
}

CommandOutput cmd_masked_collapse(const ExperimentConfig& cfg) {
  validate(cfg);
  require_single_head(cfg, "masked-collapse");
  SimplicialMask mask = load_mask(cfg);
  auto conn = is_quasi_strongly_connected(mask);
  if (!conn.connected) {
    throw DomainError("mask is not quasi-strongly connected: " + describe_unreachable(mask));
  }
  Rng rng(cfg.seed);
  Matrix x0 = rng.uniform_matrix(cfg.n, cfg.d, cfg.feature_scale);
  auto layers = make_layers(cfg, rng);
  auto rep = masked_decay_check(x0, layers, mask);

  const auto& tr = rep.trajectory;
  std::vector<std::string> r_col, eps_col, cert_col;
  for (std::size_t t = 0; t < tr.size(); ++t) {
    r_col.push_back(std::to_string(rep.radius));
    eps_col.push_back(format_double(rep.eps_hat));
    cert_col.push_back(format_double(rep.certified[t]));
  }
  std::ostringstream csv;
  write_trajectory_csv(csv, tr, [](double v) { return format_double(v); },
                       {{"r", r_col}, {"eps_hat", eps_col}, {"certified", cert_col}});

  ojson j = header("masked-collapse", cfg);
  j["mask_edges"] = mask.edge_count();
  j["centers"] = conn.centers;
  j["radius"] = rep.radius;
  j["eps_hat"] = number(rep.eps_hat);
  j["constant"] = number(rep.constant);
  j["gate_ok"] = rep.gate_ok;
  j["gate_value"] = number(rep.gate_value);
  j["gate_violation_layer"] = rep.gate_violation ? ojson(*rep.gate_violation) : ojson(nullptr);
  j["positive"] = rep.positive;
  j["decay_holds"] = rep.decay_holds;
  ojson traj = ojson::array();
  for (std::size_t t = 0; t < tr.size(); ++t) {
    ojson row;
    row["t"] = t;
    row["res_norm"] = number(tr.res_norm[t]);
    row["certified"] = number(rep.certified[t]);
    row["attn_min_on_edges"] = tr.attn_min_on_edges[t] ? number(*tr.attn_min_on_edges[t]) : ojson(nullptr);
    traj.push_back(std::move(row));
  }
  j["trajectory"] = std::move(traj);
  j["status"] = std::string(to_string(rep.status));

  CommandOutput out;
  out.exit_code = rep.status == CheckStatus::violated ? kExitViolated : kExitOk;
  out.summary = "masked-collapse: " + std::string(to_string(rep.status)) + ", radius " +
                std::to_string(rep.radius) + ", eps_hat " + format_double(rep.eps_hat);
  out.files["masked_collapse.csv"] = csv.str();
  out.files["masked_collapse.json"] = dump(j);
  return out;
}

CommandOutput cmd_lipschitz(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.mask != "none") throw ConfigError("config field 'mask' must be none for lipschitz");
  require_single_head(cfg, "lipschitz");
  Rng rng(cfg.seed);
  auto params = SimplicialParams::random(cfg.order, cfg.d, 1, cfg.weight_scale, rng);
  std::ostringstream csv;
  csv << "# schema=1\n" << LipschitzReport::csv_header() << '\n';
  ojson reports = ojson::array();
  ojson violations = ojson::array();
  for (double r : cfg.radii) {
    auto rep = empirical_lipschitz(params, cfg.n, r, cfg.samples, cfg.seed);
    csv << rep.csv_row() << '\n';
    reports.push_back(ojson::parse(rep.to_json()));
    if (!rep.holds()) violations.push_back(r);
  }
  ojson j = header("lipschitz", cfg);
  j["reports"] = std::move(reports);
  j["violations"] = violations;
  const bool ok = violations.empty();
  j["status"] = ok ? "holds" : "violated";

  CommandOutput out;
  out.exit_code = ok ? kExitOk : kExitViolated;
  out.summary = std::string("lipschitz: ") + (ok ? "holds" : "violated") + " over " +
                std::to_string(cfg.radii.size()) + " radii";
  out.files["lipschitz.csv"] = csv.str();
  out.files["lipschitz.json"] = dump(j);
  return out;
}

CommandOutput cmd_rope_check(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.d < cfg.order + 1) {
    throw ArgumentError("rope-check needs d >= N+1 (d = " + std::to_string(cfg.d) + ", N = " +
                        std::to_string(cfg.order) + ")");
  }
  constexpr double kTol = 1e-10;
  RopeConfig rope(cfg.order, cfg.d);
  const std::size_t arity = cfg.order + 1;
  // Exchange the first two sources when there are two, else target and source.
  const std::size_t sa = arity >= 3 ? 1 : 0, sb = sa + 1;
  double rot_err = 0.0, shift_err = 0.0, anti_err = 0.0, zero_err = 0.0;
  for (std::size_t i = 0; i < cfg.instances; ++i) {
    Rng rng = Rng::derived(cfg.seed, i);
    std::vector<Matrix> keys;
    for (std::size_t m = 0; m < arity; ++m) keys.push_back(rng.uniform_matrix(cfg.n, cfg.d, 1.0));
    std::vector<std::int64_t> pos(cfg.n), shifted(cfg.n), zeros(cfg.n, 0);
    const auto delta = static_cast<std::int64_t>(1 + rng.below(32));
    for (std::size_t t = 0; t < cfg.n; ++t) {
      pos[t] = static_cast<std::int64_t>(rng.below(64));
      shifted[t] = pos[t] + delta;
    }
    const double angle = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const DenseTensor base = det_logits(keys, rope);

    Matrix rot = rope.rotation(angle);
    std::vector<Matrix> rotated, at_pos, at_shift, at_zero;
    for (const auto& k : keys) {
      rotated.push_back(rotate_chunks(k, rot, rope));
      at_pos.push_back(apply_rotations(k, pos, rope));
      at_shift.push_back(apply_rotations(k, shifted, rope));
      at_zero.push_back(apply_rotations(k, zeros, rope));
    }
    rot_err = std::max(rot_err, max_abs_diff(base, det_logits(rotated, rope)));
    shift_err = std::max(shift_err, max_abs_diff(det_logits(at_pos, rope), det_logits(at_shift, rope)));
    zero_err = std::max(zero_err, max_abs_diff(base, det_logits(at_zero, rope)));
    auto swapped = keys;
    std::swap(swapped[sa], swapped[sb]);
    anti_err = std::max(anti_err, antisymmetry_gap(base, det_logits(swapped, rope), sa, sb));
  }
  ojson checks;
  ojson failed = ojson::array();
  auto record = [&](const char* name, double err) {
    ojson c;
    c["max_error"] = err;
    c["pass"] = err <= kTol;
    checks[name] = std::move(c);
    if (!(err <= kTol)) failed.push_back(name);
  };
  record("rotation_invariance", rot_err);
  record("shift_invariance", shift_err);
  record("antisymmetry", anti_err);
  record("zero_positions", zero_err);

  ojson j = header("rope-check", cfg);
  j["tolerance"] = kTol;
  j["chunk_width"] = rope.chunk_width();
  j["chunk_count"] = rope.chunk_count();
  j["checks"] = std::move(checks);
  j["failed"] = failed;
  const bool ok = failed.empty();
  j["status"] = ok ? "holds" : "violated";

  CommandOutput out;
  out.exit_code = ok ? kExitOk : kExitViolated;
  out.summary = std::string("rope-check: ") + (ok ? "holds" : "violated");
  if (!ok) {
    for (const auto& f : failed) out.summary += " " + f.get<std::string>();
  }
  out.files["rope_check.json"] = dump(j);
  return out;
}

CommandOutput cmd_route_stats(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.k == 0) throw ConfigError("config field 'k' must be at least 1");
  if (cfg.mask == "file") throw ConfigError("config field 'mask' must be none, causal or router for route-stats");
  Rng rng(cfg.seed);
  Matrix x = rng.uniform_matrix(cfg.n, cfg.d, cfg.feature_scale);
  auto params = SimplicialParams::random(cfg.order, cfg.d, cfg.heads, cfg.weight_scale, rng);
  Matrix wq = rng.uniform_matrix(cfg.d, cfg.d, cfg.weight_scale);
  Matrix wk = rng.uniform_matrix(cfg.d, cfg.d, cfg.weight_scale);
  std::vector<double> w(cfg.n), omega(cfg.d);
  for (auto& v : w) v = rng.uniform();
  for (auto& v : omega) v = rng.uniform(-1.0, 1.0);
  const bool causal = cfg.mask != "none";
  SimplicialMask admissible = causal ? causal_mask(cfg.n, 1) : SimplicialMask::full(cfg.n, 1);
  auto state = build_router_state(x, matmul(x, wq), matmul(x, wk), w, omega, admissible, cfg.k);
  SimplicialMask sparse = path_sparse_mask(state.pair_mask, cfg.order);
  const std::size_t brute = brute_force_chains(state.pair_mask, cfg.order);
  Matrix y = forward(x, params, &sparse, false);
  const bool forward_ok = all_finite(y.values());

  const double n = static_cast<double>(cfg.n);
  ojson j = header("route-stats", cfg);
  j["admissible_pairs"] = admissible.edge_count();
  j["selected_pairs"] = state.pair_mask.count();
  j["pair_density"] = static_cast<double>(state.pair_mask.count()) / (n * n);
  j["selected_simplexes"] = sparse.edge_count();
  j["brute_force_simplexes"] = brute;
  j["counts_match"] = brute == sparse.edge_count();
  j["n_k_pow_N"] = static_cast<std::size_t>(cfg.n * int_pow(cfg.k, cfg.order));
  j["full_simplexes"] = int_pow(cfg.n, cfg.order + 1);
  j["forward_finite"] = forward_ok;
  const bool ok = forward_ok && brute == sparse.edge_count();
  j["status"] = ok ? "holds" : "violated";

  std::ostringstream scores;
  write_scores_csv(scores, state.scores);

  CommandOutput out;
  out.exit_code = ok ? kExitOk : kExitViolated;
  out.summary = "route-stats: " + std::to_string(sparse.edge_count()) + " simplexes selected of " +
                std::to_string(int_pow(cfg.n, cfg.order + 1));
  out.files["route_stats.json"] = dump(j);
  out.files["route_mask.txt"] = format_mask(sparse);
  out.files["route_scores.csv"] = scores.str();
  return out;
}

CommandOutput cmd_curvature(const ExperimentConfig& cfg) {
  validate(cfg);
  const FormanVariant variant = parse_forman_variant(cfg.forman);
  std::ostringstream csv;
  csv << "# schema=1\n";
  csv << "index,kind,nodes,edges,density,avg_graph,min_graph,avg_line,min_line,avg_increased,min_increased,"
         "combinatorial_avg_increased\n";
  std::size_t avg_up = 0, min_up = 0, comb_up = 0;
  for (std::size_t i = 0; i < cfg.batch; ++i) {
    Rng rng = Rng::derived(cfg.seed, i);
    const std::size_t nodes = cfg.min_nodes + rng.below(cfg.max_nodes - cfg.min_nodes + 1);
    std::string kind = cfg.graph;
    if (kind == "mixed") kind = i % 2 == 0 ? "tree" : "sparse";
    SimpleGraph g = kind == "tree"     ? random_tree(nodes, rng)
                    : kind == "sparse" ? random_sparse_graph(nodes, cfg.density, rng)
                    : kind == "path"   ? path_graph(nodes)
                                       : cycle_graph(nodes);
    auto rep = curvature_report(g, variant);
    auto comb = variant == FormanVariant::combinatorial ? rep : curvature_report(g, FormanVariant::combinatorial);
    avg_up += rep.avg_increased;
    min_up += rep.min_increased;
    comb_up += comb.avg_increased;
    csv << i << ',' << kind << ',' << g.nodes() << ',' << g.edge_count() << ',' << format_double(rep.density)
        << ',' << format_double(rep.avg_graph) << ',' << format_double(rep.min_graph) << ','
        << format_double(rep.avg_line) << ',' << format_double(rep.min_line) << ','
        << (rep.avg_increased ? "true" : "false") << ',' << (rep.min_increased ? "true" : "false") << ','
        << (comb.avg_increased ? "true" : "false") << '\n';
  }
  const double b = static_cast<double>(cfg.batch);
  ojson j = header("curvature", cfg);
  j["variant"] = to_string(variant);
  j["batch"] = cfg.batch;
  j["avg_increase_fraction"] = static_cast<double>(avg_up) / b;
  j["min_increase_fraction"] = static_cast<double>(min_up) / b;
  j["combinatorial_avg_increase_fraction"] = static_cast<double>(comb_up) / b;

  CommandOutput out;
  out.summary = "curvature: average curvature increased on " + std::to_string(avg_up) + " of " +
                std::to_string(cfg.batch) + " graphs (" + to_string(variant) + ")";
  out.files["curvature.csv"] = csv.str();
  out.files["curvature.json"] = dump(j);
  return out;
}

CommandOutput cmd_reduce_check(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.order < 2) throw ArgumentError("reduce-check needs N >= 2 (N = " + std::to_string(cfg.order) + ")");
  require_single_head(cfg, "reduce-check");
  std::size_t passed = 0;
  ojson mismatches = ojson::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < cfg.instances; ++i) {
    Rng rng = Rng::derived(cfg.seed, i);
    auto params = SimplicialParams::random(cfg.order, cfg.d, 1, cfg.weight_scale, rng);
    Matrix x = rng.uniform_matrix(cfg.n, cfg.d, cfg.feature_scale);
    auto red = reduce_order(params, x);
    for (std::size_t m = 0; m < red.slices.size(); ++m) {
      worst = std::max(worst, max_abs_diff(red.slices[m], red.direct[m]));
    }
    if (red.exact()) {
      ++passed;
    } else {
      mismatches.push_back(i);
    }
  }
  ojson j = header("reduce-check", cfg);
  j["instances"] = cfg.instances;
  j["passed"] = passed;
  j["max_abs_diff"] = worst;
  j["mismatched_instances"] = mismatches;
  const bool ok = passed == cfg.instances;
  j["status"] = ok ? "holds" : "violated";

  CommandOutput out;
  out.exit_code = ok ? kExitOk : kExitViolated;
  out.summary = "reduce-check: " + std::to_string(passed) + " of " + std::to_string(cfg.instances) + " exact";
  out.files["reduce_check.json"] = dump(j);
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"collapse",     "masked-collapse", "lipschitz", "rope-check",
                                              "route-stats",  "curvature",       "reduce-check"};
  return names;
}

ExperimentConfig default_config(const std::string& command) {
  ExperimentConfig cfg;
  if (command == "masked-collapse") {
    cfg.mask = "causal";
    cfg.layers = 6;
  }
  if (command == "reduce-check") cfg.instances = 20;
  return cfg;
}

CommandOutput run_command(const std::string& command, const ExperimentConfig& cfg) {
  if (command == "collapse") return cmd_collapse(cfg);
  if (command == "masked-collapse") return cmd_masked_collapse(cfg);
  if (command == "lipschitz") return cmd_lipschitz(cfg);
  if (command == "rope-check") return cmd_rope_check(cfg);
  if (command == "route-stats") return cmd_route_stats(cfg);
  if (command == "curvature") return cmd_curvature(cfg);
  if (command == "reduce-check") return cmd_reduce_check(cfg);
  throw ConfigError("unknown command '" + command + "'");
}

namespace {

// Flags parse into a scratch config; only the ones given are copied over
// the file config afterwards.
class FlagSet {
 public:
  explicit FlagSet(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T ExperimentConfig::*field, const std::string& help) {
    CLI::Option* opt = app_->add_option(name, scratch_.*field, help);
    appliers_.emplace_back(opt, [this, field](ExperimentConfig& c) { c.*field = scratch_.*field; });
    return opt;
  }

  void apply(ExperimentConfig& cfg) const {
    for (const auto& [opt, fn] : appliers_)
      if (opt->count() > 0) fn(cfg);
  }

 private:
  CLI::App* app_;
  ExperimentConfig scratch_;
  std::vector<std::pair<CLI::Option*, std::function<void(ExperimentConfig&)>>> appliers_;
};

struct Subcommand {
  std::string name;
  CLI::App* app = nullptr;
  std::unique_ptr<FlagSet> flags;
  std::string config_path;
  CLI::Option* output = nullptr;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"N-simplicial attention verification suites"};
  app.name("simplicial");
  app.require_subcommand(1);
  const std::map<std::string, std::string> about{
      {"collapse", "unmasked rank-collapse bounds in extended precision"},
      {"masked-collapse", "exponential decay certificate under a mask"},
      {"lipschitz", "empirical Lipschitz constant against the closed-form bound"},
      {"rope-check", "rotation, shift and antisymmetry checks for determinant logits"},
      {"route-stats", "path-sparse routing counts and mask"},
      {"curvature", "Forman curvature of random graphs versus their line graphs"},
      {"reduce-check", "order reduction through a ones token"},
  };
  std::vector<Subcommand> subs;
  subs.reserve(command_names().size());
  for (const auto& name : command_names()) {
    Subcommand s;
    s.name = name;
    s.app = app.add_subcommand(name, about.at(name));
    s.flags = std::make_unique<FlagSet>(s.app);
    subs.push_back(std::move(s));
  }
  for (auto& s : subs) {
    auto& f = *s.flags;
    s.app->add_option("--config", s.config_path, "JSON config file; flags override its fields");
    f.add("--seed", &ExperimentConfig::seed, "RNG seed");
    f.add("--n", &ExperimentConfig::n, "token count");
    f.add("--d", &ExperimentConfig::d, "model width");
    f.add("--order", &ExperimentConfig::order, "simplex order N");
    f.add("--heads", &ExperimentConfig::heads, "head count");
    f.add("--layers", &ExperimentConfig::layers, "stack depth");
    f.add("--weight-scale", &ExperimentConfig::weight_scale, "weights uniform in [-s, s]");
    f.add("--feature-scale", &ExperimentConfig::feature_scale, "inputs uniform in [-s, s]");
    f.add("--mask", &ExperimentConfig::mask, "none, causal, file or router");
    f.add("--mask-file", &ExperimentConfig::mask_file, "mask text file when --mask file");
    f.add("--radii", &ExperimentConfig::radii, "input radii, comma separated")->delimiter(',');
    f.add("--samples", &ExperimentConfig::samples, "samples per radius");
    f.add("--k", &ExperimentConfig::k, "pairs kept per token");
    f.add("--instances", &ExperimentConfig::instances, "random instances");
    f.add("--batch", &ExperimentConfig::batch, "graphs per batch");
    f.add("--graph", &ExperimentConfig::graph, "tree, sparse, path, cycle or mixed");
    f.add("--min-nodes", &ExperimentConfig::min_nodes, "smallest graph");
    f.add("--max-nodes", &ExperimentConfig::max_nodes, "largest graph");
    f.add("--density", &ExperimentConfig::density, "edge density for sparse graphs");
    f.add("--forman", &ExperimentConfig::forman, "combinatorial or augmented");
    f.add("--precision", &ExperimentConfig::precision, "extended or double");
    f.add("--max-bits", &ExperimentConfig::max_bits, "precision cap in bits");
    s.output = f.add("--output", &ExperimentConfig::output, "output directory");
  }

  std::vector<std::string> argv_store{"simplicial"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  for (auto& s : subs) {
    if (!s.app->parsed()) continue;
    try {
      ExperimentConfig cfg = default_config(s.name);
      if (!s.config_path.empty()) apply_json(cfg, read_file(s.config_path));
      if (const char* env = std::getenv(kOutputEnv); env && *env) cfg.output = env;
      s.flags->apply(cfg);
      validate(cfg);
      CommandOutput result = run_command(s.name, cfg);
      std::filesystem::path dir(cfg.output);
      std::filesystem::create_directories(dir);
      for (const auto& [file, contents] : result.files) write_file((dir / file).string(), contents);
      out << result.summary << "\n";
      return result.exit_code;
    } catch (const ConfigError& e) {
      err << s.name << ": config error: " << e.what() << "\n";
    } catch (const std::invalid_argument& e) {
      err << s.name << ": invalid input: " << e.what() << "\n";
    } catch (const std::domain_error& e) {
      err << s.name << ": " << e.what() << "\n";
    } catch (const std::exception& e) {
      err << s.name << ": error: " << e.what() << "\n";
    }
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace simplicial::cli
