// lrlc: long-range lattice criticality toolkit, batch command surface.
//
// Subcommands: kernel, green, convbound, model, audit-all.
// Exit codes: 0 success, 1 audit failure under --strict, 2 usage/config
// error, 3 numeric precondition violation.

#include <cstdio>
#include <filesystem>
#include <string>

#include "CLI11.hpp"

#include "lrlc/cache.hpp"
#include "lrlc/models.hpp"
#include "lrlc/numerics.hpp"
#include "lrlc/report.hpp"

namespace fs = std::filesystem;
using namespace lrlc;

namespace {

struct Global {
  std::string config_path;
  std::string out_dir = ".";
  bool strict = false;
  int threads = 1;
  std::uint64_t seed = 0; // 0 = take from config
  bool any_audit_failed = false;
};

LongRangeParams params_from(const RunConfig& cfg) {
  LongRangeParams p;
  p.d = static_cast<int>(cfg.geti("d", 2));
  p.alpha = cfg.getd("alpha", 2.0);
  p.L = cfg.getd("L", 1.0);
  const std::string variant = cfg.gets("variant", "power");
  if (variant == "power")
    p.variant = KernelVariant::DirectPowerLaw;
  else if (variant == "zeta")
    p.variant = KernelVariant::CompoundZeta;
  else
    throw std::invalid_argument("config: variant must be 'power' or 'zeta'");
  p.t_max = static_cast<std::uint64_t>(cfg.geti("t_max", 0));
  p.validate();
  return p;
}

BoxSpec box_from(const RunConfig& cfg, const LongRangeParams& p) {
  BoxSpec box{p.d, static_cast<int>(cfg.geti("M", 8)), cfg.getb("torus", true)};
  (void)box.volume();
  return box;
}

// kernel cache: load when the hash matches, otherwise build and store
SymField kernel_with_cache(const Global& g, const RunConfig& cfg, const LongRangeParams& p,
                           const BoxSpec& box, json* info) {
  const std::uint64_t want = cache_content_hash(p.cache_tag() + ";M=" + std::to_string(box.M),
                                                "kernel");
  const std::string path = (fs::path(g.out_dir) / "kernel.lrlc").string();
  if (fs::exists(path)) {
    auto entry = cache_read(path);
    if (entry && entry->content_hash == want &&
        entry->payload.size() == box.octant_volume()) {
      SymField D(box);
      D.values = entry->payload;
      if (info) (*info)["cache"] = "hit";
      return D;
    }
    std::fprintf(stderr, "warning: cache file %s invalid or stale, rebuilding\n",
                 path.c_str());
    if (info) (*info)["cache"] = "rebuilt";
  } else if (info) {
    (*info)["cache"] = "miss";
  }
  auto [D, tail] = build_kernel(p, box);
  CacheEntry e;
  e.kind = CacheKind::Kernel;
  e.d = static_cast<std::uint32_t>(box.d);
  e.M = static_cast<std::uint32_t>(box.M);
  e.content_hash = want;
  e.payload = D.values;
  cache_write_atomic(path, e);
  if (info) (*info)["tail"] = to_json(tail);
  return D;
}

int cmd_kernel(Global& g) {
  RunConfig cfg = RunConfig::from_file(g.config_path);
  LongRangeParams p = params_from(cfg);
  BoxSpec box = box_from(cfg, p);
  cfg.finish();

  json info;
  SymField D = kernel_with_cache(g, cfg, p, box, &info);
  const KernelAuditReport audit = kernel_audit(D);
  const AssumptionAudit hat = audit_assumption_hatD(D, p);
  auto [lo, hi] = kernel_ratio_range(D, p);
  info["kernel_audit"] = to_json(audit);
  info["hatD_audit"] = to_json(hat);
  info["ratio_range"] = json{{"min", lo}, {"max", hi}};
  write_json_file((fs::path(g.out_dir) / "kernel.json").string(),
                  stamped_report(cfg, info));
  if (!hat.pass) g.any_audit_failed = true;
  return 0;
}

int cmd_green(Global& g) {
  RunConfig cfg = RunConfig::from_file(g.config_path);
  LongRangeParams p = params_from(cfg);
  BoxSpec box = box_from(cfg, p);
  const double pf = cfg.getd("p", 1.0);
  const std::string method = cfg.gets("method", "fourier");
  const double trusted = cfg.getd("trusted_frac", 0.6);
  const double tol = cfg.getd("asy_tolerance", 0.2);
  cfg.finish();

  json info;
  SymField D = kernel_with_cache(g, cfg, p, box, &info);

  GreenSpec spec{pf, GreenMethod::FourierInversion, p};
  if (method == "neumann") spec.method = GreenMethod::NeumannSeries;
  else if (method == "split") spec.method = GreenMethod::SplitSeries;
  else if (method != "fourier")
    throw std::invalid_argument("config: method must be fourier|neumann|split");

  GreenResult r = green_function(D, spec);
  const GreenUpperBoundAudit ub = audit_green_upper_bound(r.S, p, trusted);
  info["upper_bound"] = to_json(ub);
  if (!ub.pass) g.any_audit_failed = true;

  if (pf == 1.0 && p.alpha == 2.0) {
    AsymptoticConstants cst = estimate_v(D, p);
    GreenAsymptoticsAudit asy = audit_green_asymptotics(r.S, cst, p, tol, trusted);
    info["constants"] = to_json(cst);
    info["asymptotics"] = to_json(asy);
    if (!asy.pass || !cst.pass) g.any_audit_failed = true;

    CsvWriter csv;
    csv.meta("config_hash", std::to_string(cfg.hash()));
    csv.meta("version", "0.1.0");
    csv.header({"x_norm", "direction_id", "S1", "ratio_R", "window_mean"});
    for (const auto& row : asy.rows)
      csv.row({row.xnorm, static_cast<double>(row.direction), row.S1, row.ratio,
               row.window_mean});
    csv.save((fs::path(g.out_dir) / "asymptotics.csv").string());
  }
  write_json_file((fs::path(g.out_dir) / "green.json").string(), stamped_report(cfg, info));

  // green field cache keyed by (kernel hash, p, method)
  CacheEntry e;
  e.kind = CacheKind::Green;
  e.d = static_cast<std::uint32_t>(box.d);
  e.M = static_cast<std::uint32_t>(box.M);
  e.content_hash = cache_content_hash(
      p.cache_tag() + ";M=" + std::to_string(box.M) + ";p=" + format_double(pf), method);
  e.payload = r.S.values;
  cache_write_atomic((fs::path(g.out_dir) / "green.lrlc").string(), e);
  return 0;
}

int cmd_convbound(Global& g) {
  RunConfig cfg = RunConfig::from_file(g.config_path);
  const int d = static_cast<int>(cfg.geti("d", 4));
  const double L = cfg.getd("L", 2.0);
  const int M = static_cast<int>(cfg.geti("M", 240));
  const std::string tuples = cfg.gets("tuples", "");
  cfg.finish();

  json summary = json::array();
  int idx = 0;
  std::istringstream ss(tuples);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    if (tok.empty()) continue;
    double a1, a2, b1, b2;
    if (std::sscanf(tok.c_str(), "%lf,%lf,%lf,%lf", &a1, &a2, &b1, &b2) != 4)
      throw std::invalid_argument("config: tuples entries must be 'a1,a2,b1,b2'");
    ExponentTuple t{a1, a2, b1, b2, d, L};
    BoxSpec box{d, M, false};
    ConvBoundReport rep = verify_bound(t, default_x_samples(t, box), box);
    if (!rep.pass) g.any_audit_failed = true;
    json jt = to_json(rep);
    jt["tuple"] = {a1, a2, b1, b2};
    summary.push_back(jt);

    CsvWriter csv;
    csv.meta("config_hash", std::to_string(cfg.hash()));
    csv.meta("tuple", tok);
    csv.meta("regime", regime_name(rep.regime));
    csv.header({"x_norm", "lhs", "rhs_envelope", "ratio"});
    for (const auto& row : rep.table) csv.row({row.xnorm, row.lhs, row.rhs, row.ratio});
    csv.save((fs::path(g.out_dir) / ("convbound_" + std::to_string(idx) + ".csv")).string());
    ++idx;
  }
  write_json_file((fs::path(g.out_dir) / "convbound.json").string(),
                  stamped_report(cfg, json{{"tuples", summary}}));
  return 0;
}

int cmd_model(Global& g) {
  RunConfig cfg = RunConfig::from_file(g.config_path);
  LongRangeParams p = params_from(cfg);
  BoxSpec box = box_from(cfg, p);
  const std::string model = cfg.gets("model", "saw");
  const double pf = cfg.getd("p", 0.3);
  json info;

  SymField D = kernel_with_cache(g, cfg, p, box, &info);
  SymField G(box);

  if (model == "saw") {
    const int N = static_cast<int>(cfg.geti("saw_N", 4));
    const double prune = cfg.getd("prune", 1e-15);
    cfg.finish();
    SawSeries series = saw_enumerate(D.to_full(), N, box, prune);
    SawTwoPoint tp = saw_two_point(series, pf);
    info["model"] = json{{"kind", "saw"},
                         {"N", N},
                         {"pruned", series.pruned},
                         {"last_term_share", tp.last_term_share},
                         {"truncation_warning", tp.truncation_warning}};
    G = fold_to_octant(tp.G);
    CsvWriter csv;
    csv.meta("config_hash", std::to_string(cfg.hash()));
    std::vector<std::string> cols;
    for (int j = 0; j < box.d; ++j) cols.push_back("x" + std::to_string(j));
    cols.push_back("value");
    csv.header(cols);
    const auto sites = enumerate_box(box);
    for (std::size_t i = 0; i < sites.size(); ++i) {
      std::vector<std::string> vals;
      for (int c : sites[i]) vals.push_back(std::to_string(c));
      vals.push_back(format_double(tp.G.values[i]));
      csv.row_mixed(vals);
    }
    csv.save((fs::path(g.out_dir) / "two_point.csv").string());
  } else if (model == "perc") {
    PercConfig pc{BoxSpec{box.d, box.M, true}, pf,
                  cfg.geti("samples", 10000),
                  g.seed ? g.seed : static_cast<std::uint64_t>(cfg.geti("seed", 1))};
    cfg.finish();
    PercEstimate est = percolation_two_point(D, pc);
    info["model"] = json{{"kind", "perc"},
                         {"samples", pc.samples},
                         {"seed", pc.seed},
                         {"mean_open_bonds", est.mean_open_bonds}};
    G = fold_to_octant(est.G);
    CsvWriter csv;
    csv.meta("config_hash", std::to_string(cfg.hash()));
    csv.meta("seed", std::to_string(pc.seed));
    std::vector<std::string> cols;
    for (int j = 0; j < box.d; ++j) cols.push_back("x" + std::to_string(j));
    cols.push_back("value");
    cols.push_back("stderr");
    csv.header(cols);
    const auto sites = enumerate_box(box);
    for (std::size_t i = 0; i < sites.size(); ++i) {
      std::vector<std::string> vals;
      for (int c : sites[i]) vals.push_back(std::to_string(c));
      vals.push_back(format_double(est.G.values[i]));
      vals.push_back(format_double(est.stderr_.values[i]));
      csv.row_mixed(vals);
    }
    csv.save((fs::path(g.out_dir) / "two_point.csv").string());
  } else if (model == "ising") {
    IsingConfig ic;
    const int half = static_cast<int>(cfg.geti("ising_half", 1));
    ic.beta = cfg.getd("beta", 1.0);
    ic.p = pf;
    cfg.finish();
    BoxSpec vol{box.d, half, false};
    for (const auto& s : enumerate_box(vol)) ic.volume.push_back(s);
    IsingResult res = ising_two_point_exact(D, ic);
    info["model"] = json{{"kind", "ising"}, {"sites", ic.volume.size()}};
    CsvWriter csv;
    csv.meta("config_hash", std::to_string(cfg.hash()));
    std::vector<std::string> cols;
    for (int j = 0; j < box.d; ++j) cols.push_back("x" + std::to_string(j));
    cols.push_back("value");
    csv.header(cols);
    for (std::size_t i = 0; i < ic.volume.size(); ++i) {
      std::vector<std::string> vals;
      for (int c : ic.volume[i]) vals.push_back(std::to_string(c));
      vals.push_back(format_double(res.corr[i]));
      csv.row_mixed(vals);
    }
    csv.save((fs::path(g.out_dir) / "two_point.csv").string());
    write_json_file((fs::path(g.out_dir) / "model.json").string(),
                    stamped_report(cfg, info));
    return 0; // the lace pipeline needs a box field; the Ising volume is a list
  } else {
    throw std::invalid_argument("config: model must be saw|perc|ising");
  }

  // lace pipeline: extract, effective step, identity check
  LaceExtract ex = extract_pi(G, D, pf);
  EffectiveStep eff = effective_step(ex.Pi, D, pf, p);
  GreenIdentityReport rep = verify_green_identity(G, ex, eff, p);
  info["lace"] = json{{"pi_hat0", ex.pi_hat0},
                      {"denom_margin", ex.denom_margin},
                      {"decay_slope", ex.decay_slope},
                      {"effective_positive", eff.positive},
                      {"effective_sum_defect", eff.sum_defect},
                      {"effective_hatD", to_json(eff.hatD_audit)},
                      {"identity", to_json(rep)}};
  if (!eff.positive) g.any_audit_failed = true;
  write_json_file((fs::path(g.out_dir) / "model.json").string(), stamped_report(cfg, info));
  return 0;
}

int cmd_audit_all(Global& g) {
  RunConfig cfg = RunConfig::from_file(g.config_path);
  LongRangeParams p = params_from(cfg);
  BoxSpec box = box_from(cfg, p);
  const int n_max = static_cast<int>(cfg.geti("n_max", 16));
  cfg.finish();

  json info;
  SymField D = kernel_with_cache(g, cfg, p, box, &info);
  info["kernel_audit"] = to_json(kernel_audit(D));
  const AssumptionAudit hat = audit_assumption_hatD(D, p);
  info["hatD_audit"] = to_json(hat);
  if (!hat.pass) g.any_audit_failed = true;

  ConvolutionPlan plan{box, suggest_padding(D, n_max), ConvMethod::Spectral};
  const int n_ok = std::min(n_max, max_steps_within(D, plan));
  DnAudit dn = audit_assumption_Dn(D, p, n_ok, plan);
  info["Dn_audit"] = to_json(dn);
  if (!dn.pass) g.any_audit_failed = true;

  if (p.alpha != 2.0) {
    DerivativeAudit da = audit_derivative_bound(D, p, std::min(n_ok, 16), plan);
    info["derivative_audit"] = to_json(da);
    if (!da.pass) g.any_audit_failed = true;
  }
  write_json_file((fs::path(g.out_dir) / "audit_all.json").string(),
                  stamped_report(cfg, info));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"long-range lattice criticality toolkit"};
  app.require_subcommand(1);
  app.fallthrough(true);

  Global g;
  app.add_option("--config", g.config_path, "run configuration file")->required();
  app.add_option("--out", g.out_dir, "output directory");
  app.add_flag("--strict", g.strict, "exit 1 when any audit reports FAIL");
  app.add_option("--threads", g.threads, "worker threads (reserved; current build is serial)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "override the config seed");

  auto* kernel = app.add_subcommand("kernel", "build a kernel and run its audits");
  auto* green = app.add_subcommand("green", "Green function, bound and asymptotics audits");
  auto* convbound = app.add_subcommand("convbound", "convolution-bound verifier");
  auto* model = app.add_subcommand("model", "SAW / percolation / Ising plus lace pipeline");
  auto* auditall = app.add_subcommand("audit-all", "kernel, transform and n-step audits");

  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(g.out_dir);
    int rc = 0;
    if (kernel->parsed()) rc = cmd_kernel(g);
    if (green->parsed()) rc = cmd_green(g);
    if (convbound->parsed()) rc = cmd_convbound(g);
    if (model->parsed()) rc = cmd_model(g);
    if (auditall->parsed()) rc = cmd_audit_all(g);
    if (rc == 0 && g.strict && g.any_audit_failed) {
      std::fprintf(stderr, "audit failure under --strict\n");
      return 1;
    }
    return rc;
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    std::fprintf(stderr, "error: %s\n", what.c_str());
    // config-shaped problems are usage errors; the rest are numeric
    return what.rfind("config", 0) == 0 ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
