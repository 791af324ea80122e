// sswalk: command-line front end for the split-step walk library.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sswalk/sswalk.hpp"

namespace {

using namespace sswalk;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitResource = 4;

int exit_code_for(ErrorKind k) {
  switch (k) {
  case ErrorKind::ResourceLimit: return kExitResource;
  case ErrorKind::EigensolverFailure:
  case ErrorKind::CaseUnavailable:
  case ErrorKind::ZeroVector:
  case ErrorKind::ResidualTooLarge:
  case ErrorKind::AnchorClash: return kExitNumerical;
  default: return kExitConfig;
  }
}

struct Overrides {
  std::string config_path;
  std::string out;
  std::optional<std::int64_t> torus, steps, radius, horizon;
  std::optional<int> levels;
  std::string sign, sites, lambda, anchors, initial, op, matrix_out;
  bool dump_config = false;
};

RunConfig load_config(const Overrides &o, const std::string &command) {
  std::ifstream in(o.config_path, std::ios::binary);
  if (!in) throw WalkError(ErrorKind::ConfigError, "cannot read config file '" + o.config_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_config_text(ss.str());
  if (o.torus) cfg.torus = *o.torus;
  if (o.steps) (command == "measure" ? cfg.horizon : cfg.steps) = *o.steps;
  if (o.horizon) cfg.horizon = *o.horizon;
  if (o.radius) cfg.radius = *o.radius;
  if (o.levels) cfg.levels = *o.levels;
  if (!o.sign.empty()) cfg.sign = parse_sign(o.sign);
  if (!o.sites.empty()) std::tie(cfg.sites_lo, cfg.sites_hi) = parse_site_range(o.sites);
  if (!o.lambda.empty()) {
    cfg.lambda.clear();
    std::stringstream ls(o.lambda);
    std::string item;
    while (std::getline(ls, item, ',')) {
      try {
        std::size_t used = 0;
        cfg.lambda.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::logic_error &) {
        throw WalkError(ErrorKind::ConfigError, "bad --lambda value '" + item + "'");
      }
    }
  }
  if (!o.anchors.empty()) cfg.anchors = parse_anchors(o.anchors);
  if (!o.initial.empty()) cfg.initial = o.initial;
  if (!o.op.empty()) {
    if (o.op != "U" && o.op != "T") throw WalkError(ErrorKind::ConfigError, "--operator must be U or T");
    cfg.op = o.op;
  }
  if (!o.out.empty()) cfg.out = o.out;
  return cfg;
}

/// Primary artifact to cfg.out (or stdout); secondary JSON to cfg.out + suffix (or stderr).
void emit(const RunConfig &cfg, const std::string &primary, const std::optional<json> &secondary = std::nullopt,
          const std::string &suffix = "") {
  if (cfg.out.empty()) {
    std::cout << primary << std::flush;
    if (secondary) std::cerr << secondary->dump(2) << '\n';
    return;
  }
  write_file_atomic(cfg.out, primary);
  if (secondary) write_file_atomic(cfg.out + suffix, secondary->dump(2) + "\n");
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

bool within_radius(const LatticeWindow &w, std::size_t s, std::int64_t radius) {
  if (radius <= 0) return true;
  for (int j = 0; j < w.dim(); ++j)
    if (std::abs(w.coordinate(s, j)) > radius) return false;
  return true;
}

std::string coordinate_header(int n) {
  if (n == 1) return "x";
  std::string h;
  for (int j = 1; j <= n; ++j) h += (j > 1 ? ",x" : "x") + std::to_string(j);
  return h;
}

/// Rows x..., j, k, re, im[, profile] for every site carrying amplitude.
std::string state_csv(const WaveFunction &psi, std::int64_t radius, const std::vector<double> *profile) {
  const LatticeWindow &w = psi.window();
  const int n = w.dim();
  CsvBuilder csv(coordinate_header(n) + ",j,k,re,im" + (profile ? ",profile" : ""));
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (!within_radius(w, s, radius)) continue;
    const double pv = profile ? (*profile)[s] : 0.0;
    if (psi.site_norm_sq(s) == 0.0 && pv == 0.0) continue;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < 2; ++k) {
        for (int a = 0; a < n; ++a) csv.field(static_cast<long long>(w.coordinate(s, a)));
        csv.field(static_cast<long long>(j + 1)).field(static_cast<long long>(k + 1));
        const cplx v = psi.site_view(s)[static_cast<std::size_t>(2 * j + k)];
        csv.field(v.real()).field(v.imag());
        if (profile) csv.field(j == 0 && k == 0 ? pv : 0.0);
        csv.end_row();
      }
  }
  return csv.text();
}

json summary_json(const WalkParameters &params) {
  const SpectralSummary s = summarize(params);
  json j;
  j["n"] = params.n();
  j["mu_j"] = json::array();
  for (const cplx &m : s.mu_j) j["mu_j"].push_back(complex_json(m));
  j["mu"] = s.mu;
  j["V0"] = s.V0;
  j["band"] = {s.band.lo, s.band.hi};
  j["arc_endpoints"] = {std::acos(std::clamp(s.band.hi, -1.0, 1.0)), std::acos(std::clamp(s.band.lo, -1.0, 1.0))};
  j["arcs"] = json::array();
  for (const Arc &a : s.arcs) j["arcs"].push_back({a.from, a.to});
  for (Sign sg : {Sign::Plus, Sign::Minus}) {
    const std::string key = sg == Sign::Plus ? "plus" : "minus";
    j["M_" + key] = to_string(classify_multiplicity(params, sg));
    json cases = json::array();
    for (int a = 0; a < params.n(); ++a) cases.push_back(to_string(classify_axis(params, a, sg)));
    j["birth_cases_" + key] = cases;
  }
  return j;
}

int cmd_info(const RunConfig &cfg, const WalkParameters &params) {
  emit(cfg, summary_json(params).dump(2) + "\n");
  return kExitOk;
}

int cmd_spectrum(const RunConfig &cfg, const WalkParameters &params, const std::string &matrix_out) {
  const DenseOptions dense{static_cast<Eigen::Index>(cfg.max_dimension)};
  const SpectralSummary s = summarize(params);
  const double margin = 10.0 / static_cast<double>(cfg.torus);
  const DenseOperator op = cfg.op == "U" ? build_dense_U(params, cfg.torus, dense) : build_dense_T(params, cfg.torus, dense);
  if (!matrix_out.empty()) {
    CsvBuilder m("row,col,re,im");
    for (Eigen::Index c = 0; c < op.dimension(); ++c)
      for (Eigen::Index r = 0; r < op.dimension(); ++r) {
        const cplx v = op.entries(r, c);
        if (v == cplx{}) continue;
        m.field(static_cast<long long>(r)).field(static_cast<long long>(c)).field(v.real()).field(v.imag());
        m.end_row();
      }
    write_file_atomic(matrix_out, m.text());
  }
  CsvBuilder csv("index,re,im,cos_arg,classification");
  json cov;
  if (cfg.op == "U") {
    const std::vector<cplx> ev = torus_spectrum_unitary(op);
    for (std::size_t i = 0; i < ev.size(); ++i) {
      csv.field(static_cast<long long>(i)).field(ev[i].real()).field(ev[i].imag());
      csv.field(std::cos(std::arg(ev[i]))).field(to_string(classify_eigenvalue(ev[i], s.band, cfg.exclusion, margin)));
      csv.end_row();
    }
    const CoverageMetrics m = band_coverage(ev, s.band, cfg.exclusion, margin);
    cov = {{"hausdorff", m.hausdorff}, {"max_gap", m.max_gap},     {"outliers", m.outliers},
           {"plus_one", m.plus_one},   {"minus_one", m.minus_one}, {"inconclusive", m.inconclusive},
           {"unitarity_deviation", unitarity_deviation(op)}};
  } else {
    const std::vector<double> ev = torus_spectrum_hermitian(op);
    for (std::size_t i = 0; i < ev.size(); ++i) {
      csv.field(static_cast<long long>(i)).field(ev[i]).field(0.0).field(ev[i]);
      csv.field(s.band.contains(ev[i], margin) ? "band" : "outlier");
      csv.end_row();
    }
    const CoverageMetrics m = band_coverage_values(ev, s.band, margin);
    cov = {{"hausdorff", m.hausdorff}, {"max_gap", m.max_gap}, {"outliers", m.outliers},
           {"inconclusive", m.inconclusive}, {"hermiticity_deviation", hermiticity_deviation(op)}};
  }
  cov["operator"] = cfg.op;
  cov["torus"] = cfg.torus;
  cov["dimension"] = op.dimension();
  cov["band"] = {s.band.lo, s.band.hi};
  cov["margin"] = margin;
  emit(cfg, csv.text(), cov, ".coverage.json");
  return kExitOk;
}

json birth_vector_json(const BirthVector &bv) {
  return {{"residual", bv.residual}, {"shift_residual", bv.shift_residual}, {"coin_residual", bv.coin_residual}};
}

int cmd_birth(const RunConfig &cfg, const WalkParameters &params) {
  const BirthVector bv = birth_vector(params, cfg.sign);
  const std::string csv = state_csv(bv.state, cfg.radius, &bv.profile);
  json report = birth_vector_json(bv);
  report["sign"] = std::string(1, sign_char(cfg.sign));
  report["multiplicity"] = to_string(classify_multiplicity(params, cfg.sign));
  report["profile_closed_form"] = bv.profile_closed_form;
  if (params.n() >= 2 && !cfg.anchors.empty()) {
    const std::vector<BirthVector> family = finite_support_family(params, cfg.sign, cfg.anchors);
    json anchors = json::array(), residuals = json::array();
    for (std::size_t i = 0; i < family.size(); ++i) {
      anchors.push_back({cfg.anchors[i].first, cfg.anchors[i].second});
      residuals.push_back(birth_vector_json(family[i]));
    }
    report["family"] = {{"anchors", anchors},
                        {"residuals", residuals},
                        {"gram_smallest_eigenvalue", smallest_gram_eigenvalue(family)}};
  }
  emit(cfg, csv, report, ".report.json");
  return kExitOk;
}

int cmd_evolve(const RunConfig &cfg, const WalkParameters &params) {
  const WaveFunction psi0 = parse_initial_state(cfg.initial, params.n());
  EvolveOptions opts;
  opts.site_budget = static_cast<std::size_t>(cfg.site_budget);
  WaveFunction last;
  evolve_fold(
      params, psi0, cfg.steps, [&](std::int64_t t, const WaveFunction &psi) {
        if (t == cfg.steps) last = psi;
      },
      opts);
  const json report = {{"steps", cfg.steps},
                       {"initial_norm", psi0.norm()},
                       {"final_norm", last.norm()},
                       {"norm_drift", std::abs(last.norm() - psi0.norm())},
                       {"support_radius", last.support_radius()}};
  emit(cfg, state_csv(last, cfg.radius, nullptr), report, ".report.json");
  return kExitOk;
}

int cmd_measure(const RunConfig &cfg, const WalkParameters &params) {
  if (params.n() != 1)
    throw WalkError(ErrorKind::DimensionError, "measure is available for n = 1 only");
  const WaveFunction psi0 = parse_initial_state(cfg.initial, 1);
  EvolveOptions opts;
  opts.site_budget = static_cast<std::size_t>(cfg.site_budget);
  const MeasureReport r = measure_report(params, psi0, cfg.horizon, SiteBox::range(cfg.sites_lo, cfg.sites_hi), opts);
  CsvBuilder csv("x,nu_analytic,nu_empirical,abs_err");
  for (std::size_t i = 0; i < r.sites.size(); ++i) {
    const double a = r.nu_analytic.values[i], e = r.nu_empirical.values[i];
    csv.field(static_cast<long long>(r.sites.site(i)[0])).field(a).field(e).field(std::abs(a - e));
    csv.end_row();
  }
  const json report = {{"horizon", r.horizon},
                       {"overlap_plus", r.overlap_plus},
                       {"overlap_minus", r.overlap_minus},
                       {"total_mass_analytic", r.total_mass_analytic},
                       {"sup_error", r.sup_error},
                       {"sites", {cfg.sites_lo, cfg.sites_hi}}};
  emit(cfg, csv.text(), report, ".report.json");
  return kExitOk;
}

int cmd_probe(const RunConfig &cfg, const WalkParameters &params) {
  const SpectralSummary s = summarize(params);
  CsvBuilder csv("lambda,level,nodes,value");
  json report = json::array();
  DivergenceOptions opts;
  opts.levels = cfg.levels;
  for (double lambda : cfg.lambda) {
    ProbeReport r;
    std::string kind;
    if (!s.band.contains(lambda)) {
      r = resolvent_integral(params, lambda);
      r.verdict = ProbeVerdict::OutsideBandNonzero;
      kind = "resolvent";
      csv.field(lambda).field(0LL).field(0LL).field(r.integral_value);
      csv.end_row();
    } else {
      r = divergence_probe(params, lambda, opts);
      kind = "divergence";
      for (std::size_t l = 0; l < r.refinement_values.size(); ++l) {
        csv.field(lambda).field(static_cast<long long>(l + 1)).field(static_cast<long long>(r.refinement_nodes[l]));
        csv.field(r.refinement_values[l]);
        csv.end_row();
      }
    }
    json item = {{"lambda", lambda}, {"kind", kind}, {"value", r.integral_value}, {"verdict", to_string(r.verdict)}};
    if (r.closed_form) item["closed_form"] = *r.closed_form;
    report.push_back(item);
  }
  emit(cfg, csv.text(), report, ".report.json");
  return kExitOk;
}

int cmd_sweep(const RunConfig &cfg) {
  if (cfg.sweep.p.empty()) throw WalkError(ErrorKind::ConfigError, "\"sweep.p\" is empty");
  CsvBuilder csv("p,mu,V0,band_lo,band_hi,band_width,M_plus,M_minus");
  for (double p : cfg.sweep.p) {
    RawParameters raw = cfg.params;
    for (std::size_t j = 0; j < raw.p.size(); ++j) {
      if (cfg.sweep.axis != 0 && static_cast<int>(j) + 1 != cfg.sweep.axis) continue;
      const double mod = std::abs(raw.q[j]);
      const cplx phase = mod > 0.0 ? raw.q[j] / mod : cplx{1.0};
      raw.p[j] = p;
      raw.q[j] = std::sqrt(std::max(0.0, 1.0 - p * p)) * phase;
    }
    const WalkParameters params = validate_params(raw);
    const SpectralSummary s = summarize(params);
    csv.field(p).field(s.mu).field(s.V0).field(s.band.lo).field(s.band.hi).field(s.band.width());
    csv.field(to_string(classify_multiplicity(params, Sign::Plus)));
    csv.field(to_string(classify_multiplicity(params, Sign::Minus)));
    csv.end_row();
  }
  emit(cfg, csv.text());
  return kExitOk;
}

int run(const std::string &command, const Overrides &o) {
  const RunConfig cfg = load_config(o, command);
  if (o.dump_config) {
    emit(cfg, dump_config(cfg).dump(2) + "\n");
    return kExitOk;
  }
  if (command == "sweep") return cmd_sweep(cfg);
  const WalkParameters params = validate_params(cfg.params);
  if (command == "info") return cmd_info(cfg, params);
  if (command == "spectrum") return cmd_spectrum(cfg, params, o.matrix_out);
  if (command == "birth") return cmd_birth(cfg, params);
  if (command == "evolve") return cmd_evolve(cfg, params);
  if (command == "measure") return cmd_measure(cfg, params);
  if (command == "probe") return cmd_probe(cfg, params);
  throw WalkError(ErrorKind::ConfigError, "unknown command '" + command + "'");
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Split-step quantum walk with a point defect: spectra, bound states, limit measures"};
  app.require_subcommand(1);
  Overrides o;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"info", "band, arcs and birth multiplicities as JSON"},
      {"spectrum", "torus eigenvalues of U or T as CSV, coverage metrics as JSON"},
      {"birth", "+-1 birth eigenvector as CSV; family report for n >= 2"},
      {"evolve", "U^T applied to the initial state, final state as CSV"},
      {"measure", "analytic vs time-averaged limit measure (n = 1)"},
      {"probe", "resolvent / divergence integrals at the given lambda values"},
      {"sweep", "band summary over a grid of p values"}};
  for (const auto &[name, help] : commands) {
    CLI::App *sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config_path, "JSON config file")->required();
    sub->add_option("--out", o.out, "output path (default: stdout, reports on stderr)");
    sub->add_option("--torus", o.torus, "torus period N");
    sub->add_option("--steps", o.steps, "step count (averaging horizon for measure)");
    sub->add_option("--horizon", o.horizon, "averaging horizon");
    sub->add_option("--sign", o.sign, "birth sign, + or -");
    sub->add_option("--radius", o.radius, "trim output to sites with |x_j| <= R");
    sub->add_option("--sites", o.sites, "site range A..B");
    sub->add_option("--lambda", o.lambda, "probe values, comma separated");
    sub->add_option("--anchors", o.anchors, "anchor list a,b;a,b;...");
    sub->add_option("--initial", o.initial, "initial state site:(c1,...,c2n)[;...]");
    sub->add_option("--levels", o.levels, "divergence refinement levels");
    sub->add_option("--operator", o.op, "U or T");
    sub->add_option("--matrix", o.matrix_out, "also write the dense matrix as CSV (row,col,re,im)");
    sub->add_flag("--dump-config", o.dump_config, "print the effective config and exit");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, o);
  } catch (const WalkError &e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::bad_alloc &) {
    std::cerr << "error [ResourceLimit]: out of memory\n";
    return kExitResource;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
