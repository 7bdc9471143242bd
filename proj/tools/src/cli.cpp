#include "parawork/tools/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "parawork/avoiders.hpp"
#include "parawork/error.hpp"
#include "parawork/ffield.hpp"
#include "parawork/formats.hpp"
#include "parawork/gapfinder.hpp"
#include "parawork/mollifier.hpp"
#include "parawork/pgeom.hpp"
#include "parawork/progressions.hpp"
#include "parawork/spectral.hpp"
#include "parawork/tools/json_out.hpp"
#include "parawork/tools/suite.hpp"

namespace parawork::tools {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string p;
  while (std::getline(ss, p, sep)) parts.push_back(p);
  return parts;
}

double to_double(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used != 0 && used == s.size() && std::isfinite(v), ErrorKind::BadConfig,
          std::string("bad ") + what + ": '" + s + "'");
  return v;
}

int to_depth(const std::string& s) {
  const double v = to_double(s, "depth");
  require(v == std::floor(v) && v >= 0 && v <= kMaxDepth, ErrorKind::BadConfig,
          "depth must be an integer in 0.." + std::to_string(kMaxDepth));
  return static_cast<int>(v);
}

// "full", "empty", "random:N" (uses the seed) or a .bits path.
PointSet2 load_point_set(const FieldCtx& f, const std::string& spec, std::uint64_t seed) {
  if (spec == "full") return PointSet2::full(f);
  if (spec == "empty") return PointSet2(f);
  if (spec.rfind("random:", 0) == 0) {
    const double n = to_double(spec.substr(7), "set size");
    const std::size_t cells = std::size_t{f.q()} * f.q();
    require(n >= 0 && n == std::floor(n) && n <= static_cast<double>(cells), ErrorKind::BadConfig,
            "random set size must be an integer in 0..q^2");
    std::vector<std::uint32_t> idx(cells);
    for (std::uint32_t i = 0; i < cells; ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(static_cast<std::size_t>(n));
    return PointSet2::from_indices(f, idx);
  }
  return load_bits(f, spec);
}

// "full:m", "empty:m", "random:m:density" (uses the seed) or a GRIDSET path.
GridSet load_grid_set(const std::string& spec, std::uint64_t seed) {
  const auto parts = split(spec, ':');
  if (parts.size() == 2 && parts[0] == "full") return GridSet::full(to_depth(parts[1]));
  if (parts.size() == 2 && parts[0] == "empty") return GridSet(to_depth(parts[1]));
  if (parts.size() == 3 && parts[0] == "random") {
    const double d = to_double(parts[2], "density");
    require(d >= 0.0 && d <= 1.0, ErrorKind::BadConfig, "density must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    return GridSet::random(to_depth(parts[1]), d, rng);
  }
  return load_gridset(spec);
}

// "uniform:m" or a GRIDMEASURE path; otherwise the normalised Frostman
// measure of --set at exponent --s.
GridMeasure load_measure(const RunConfig& c) {
  if (!c.measure.empty()) {
    const auto parts = split(c.measure, ':');
    if (parts.size() == 2 && parts[0] == "uniform") {
      const int m = to_depth(parts[1]);
      return GridMeasure(m, std::vector<double>(cells_at(m), 1.0 / static_cast<double>(cells_at(m))));
    }
    return load_gridmeasure(c.measure);
  }
  require(!c.set.empty(), ErrorKind::BadConfig, "need --measure or --set");
  const GridMeasure mu = frostman(load_grid_set(c.set, c.seed), c.s);
  const double total = mu.total();
  require(total > 0.0, ErrorKind::ZeroMass, "Frostman measure of an empty set");
  std::vector<double> w(mu.weights().begin(), mu.weights().end());
  for (auto& x : w) x /= total;
  return GridMeasure(mu.depth(), std::move(w));
}

json triple_json(const std::optional<Triple>& t) {
  if (!t) return nullptr;
  return {{"x", t->x}, {"y", t->y}, {"z", t->z}};
}

json rect_json(const ParabolicRect& r) { return {{"j", r.j}, {"ix", r.ix}, {"is", r.is}}; }

void emit(const RunConfig& c, const json& j, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (!c.out.empty() && c.subcommand != "avoid" && c.subcommand != "frostman") {
    std::ofstream f(c.out);
    require(static_cast<bool>(f), ErrorKind::BadConfig, "cannot write " + c.out);
    f << text;
  } else {
    out << text;
  }
}

// ---- commands --------------------------------------------------------------

int cmd_count(const RunConfig& c, std::ostream& out) {
  const FieldCtx f = parse_field(c.field);
  const PointSet2 a = load_point_set(f, c.set, c.seed);
  const CountReport r = count_pairs(a);
  emit(c,
       {{"field", f.describe()},
        {"q", f.q()},
        {"size", a.size()},
        {"alpha", {{"num", a.alpha_num()}, {"den", a.alpha_den()}}},
        {"total", r.total},
        {"trivial", r.trivial},
        {"nontrivial", r.nontrivial},
        {"bound", num(r.bound)},
        {"witness", triple_json(r.witness)}},
       out);
  return 0;
}

int cmd_error_bound(const RunConfig& c, std::ostream& out) {
  const FieldCtx f = parse_field(c.field);
  const std::size_t n = std::size_t{f.q()} * f.q();
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  json rows = json::array();
  for (std::uint64_t t = 0; t < c.trials; ++t) {
    std::vector<cplx> fv(n), gv(n);
    for (auto& x : fv) x = {nd(rng), nd(rng)};
    for (auto& x : gv) x = {nd(rng), nd(rng)};
    const CountingError e = counting_error(f, fv, gv);
    rows.push_back({{"lhs_direct", num(e.lhs_direct)},
                    {"lhs_spectral", num(e.lhs_spectral)},
                    {"rhs_bound", num(e.rhs_bound)},
                    {"ratio", num(e.lhs_direct / e.rhs_bound)}});
  }
  emit(c, {{"field", f.describe()}, {"q", f.q()}, {"seed", c.seed}, {"trials", rows}}, out);
  return 0;
}

int cmd_gauss_scan(const RunConfig& c, std::ostream& out) {
  const FieldCtx f = parse_field(c.field);
  const std::uint32_t q = f.q();
  if (c.format == OutputFormat::Csv) {
    std::ostringstream os;
    os << "a_index,b_index,re,im,modulus,expected\n";
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) {
        const cplx v = parabola_raw_sum(f, a, b);
        // Print exact zeros as 0 rather than signed rounding noise.
        auto clean = [q](double x) { return std::abs(x) < 1e-9 * q ? 0.0 : x; };
        os << a << ',' << b << ',' << fmt12(clean(v.real())) << ',' << fmt12(clean(v.imag())) << ','
           << fmt12(clean(std::abs(v))) << ',' << fmt12(parabola_expected_modulus(f, a, b)) << '\n';
      }
    if (!c.out.empty()) {
      std::ofstream file(c.out);
      require(static_cast<bool>(file), ErrorKind::BadConfig, "cannot write " + c.out);
      file << os.str();
    } else {
      out << os.str();
    }
    return 0;
  }
  json rows = json::array();
  for (std::uint32_t a = 0; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b) {
      const cplx v = parabola_raw_sum(f, a, b);
      rows.push_back({{"a", a}, {"b", b}, {"modulus", num(std::abs(v))}, {"expected", num(parabola_expected_modulus(f, a, b))}});
    }
  emit(c, {{"field", f.describe()}, {"q", q}, {"sums", rows}}, out);
  return 0;
}

int cmd_threshold(const RunConfig& c, std::ostream& out) {
  const FieldCtx f = parse_field(c.field);
  const PointSet2 a = load_point_set(f, c.set, c.seed);
  const ThresholdVerdict v = check_threshold(a);
  emit(c,
       {{"field", f.describe()},
        {"q", f.q()},
        {"size", v.size},
        {"threshold_size", threshold_size(f.q())},
        {"above_threshold", v.above_threshold},
        {"witness", triple_json(v.witness)},
        {"summary", v.summary}},
       out);
  return 0;
}

int cmd_avoid(const RunConfig& c, std::ostream& out) {
  const FieldCtx f = parse_field(c.field);
  json j = {{"field", f.describe()}, {"q", f.q()}, {"mode", c.mode}};
  if (c.mode == "1d") {
    const auto a1 = max_avoider_1d(f);
    j["size"] = a1.size();
    j["witness"] = a1;
    j["sqrt_q_plus_1"] = num(std::sqrt(static_cast<double>(f.q())) + 1.0);
  } else {
    const AvoiderResult r =
        c.mode == "exact" ? max_avoider_exact(f) : max_avoider_heuristic(f, c.seed, c.iterations);
    j["size"] = r.size;
    j["threshold"] = num(2.0 * std::pow(static_cast<double>(f.q()), 1.5));
    if (c.mode == "heuristic") {
      j["seed"] = c.seed;
      j["iterations"] = c.iterations;
    }
    if (!c.out.empty()) {
      save_bits(r.witness, c.out);
      j["witness_file"] = c.out;
    }
  }
  emit(c, j, out);
  return 0;
}

int cmd_content(const RunConfig& c, std::ostream& out) {
  const GridSet k = load_grid_set(c.set, c.seed);
  const ContentResult r = content_dp(k, c.s);
  emit(c, {{"depth", k.depth()}, {"cells", k.count()}, {"s", num(c.s)}, {"value", num(r.value)}, {"count", r.count}},
       out);
  return 0;
}

int cmd_frostman(const RunConfig& c, std::ostream& out) {
  const GridSet k = load_grid_set(c.set, c.seed);
  const GridMeasure mu = frostman(k, c.s);
  json j = {{"depth", k.depth()},
            {"s", num(c.s)},
            {"total", num(mu.total())},
            {"content", num(dyadic_content(k, c.s))},
            {"max_dyadic_ratio", num(max_dyadic_ratio(mu, c.s))}};
  if (mu.total() > 0.0) {
    j["parabolic_constant"] = num(empirical_frostman(mu, c.s, BallKind::Parabolic, c.seed).constant);
    j["euclidean_constant"] = num(empirical_frostman(mu, c.s, BallKind::Euclidean, c.seed).constant);
  }
  if (!c.out.empty()) {
    save_gridmeasure(mu, c.out, c.encoding == "double" ? WeightEncoding::Double : WeightEncoding::Rational);
    j["measure_file"] = c.out;
  }
  emit(c, j, out);
  return 0;
}

int cmd_energy(const RunConfig& c, std::ostream& out) {
  const GridMeasure mu = load_measure(c);
  const EnergyReport r = riesz_energy(mu, c.sigma, c.fourier ? EnergyMode::DirectAndFourier : EnergyMode::Direct);
  json j = {{"depth", mu.depth()}, {"sigma", num(r.sigma)}, {"direct", num(r.direct)}};
  j["fourier_side"] = r.fourier_side ? num(*r.fourier_side) : json(nullptr);
  j["fourier_radius"] = r.fourier_radius ? num(*r.fourier_radius) : json(nullptr);
  emit(c, j, out);
  return 0;
}

std::optional<double> parse_B(const RunConfig& c) {
  if (c.B == "auto") return std::nullopt;
  return to_double(c.B, "B");
}

int cmd_gap_pipeline(const RunConfig& c, std::ostream& out) {
  const GridSet k = load_grid_set(c.set, c.seed);
  const GapParams p = GapParams::make(c.A, parse_B(c), c.T, c.C, c.C_sigma);
  const Mollifier phi;
  const GapResult r = build_gap_measure(k, c.s, p, phi, c.seed);
  const ParabolaMeasure pi(p.A, c.nodes);
  const double delta = c.delta > 0.0 ? c.delta : p.delta;
  const Lemma1Report d = lemma1_diagnostics(r.mu, pi, p, delta);
  const CertifyReport cert = certify(p, phi);

  json children = json::array();
  for (const auto& ch : r.report.children)
    children.push_back({{"rect", rect_json(ch.rect)},
                        {"content", num(ch.content)},
                        {"frostman_mass", num(ch.frostman_mass)},
                        {"weight", num(ch.weight)},
                        {"mass", num(ch.mass)}});
  json dense = rect_json(r.report.dense_rect);
  dense["content"] = num(r.report.dense_content);
  json j = {
      {"params",
       {{"A", num(p.A)},
        {"B", num(p.B)},
        {"T", p.T},
        {"sigma", num(p.sigma)},
        {"C", num(p.C_frost)},
        {"C_sigma", num(p.C_sigma)},
        {"delta", num(p.delta)},
        {"s", num(c.s)}}},
      {"dense_rect", dense},
      {"child_contents", children},
      {"cell_mass_defect", num(r.report.cell_mass_defect)},
      {"total_mass", num(r.report.total_mass)},
      {"frostman_constant", num(r.report.frostman_constant)},
      {"dyadic_ratio", num(r.report.dyadic_ratio)},
      {"spectral_gap_value", r.report.spectral_gap_value ? num(*r.report.spectral_gap_value) : json(nullptr)},
      {"functional_value", num(d.total)},
      {"functional_delta", num(delta)},
      {"diagnostics", {{"I1", num(d.I1)}, {"I2", num(d.I2)}, {"I3", num(d.I3)}, {"kappa", num(d.kappa)}}},
      {"certify",
       {{"log10_B0", num(cert.log10_B0)},
        {"B_meets_B0", cert.B_meets_B0},
        {"T_for_B0", num(cert.T_for_B0)},
        {"tail_total", num(cert.tail.total)},
        {"tail_target", num(cert.tail.target)},
        {"tail_certified", cert.tail.certified}}}};
  emit(c, j, out);
  return 0;
}

int cmd_functional(const RunConfig& c, std::ostream& out) {
  const GridMeasure mu = load_measure(c);
  const ParabolaMeasure pi(c.A, c.nodes);
  const double delta = c.delta > 0.0 ? c.delta : 0.1;
  const double F = convolution_functional(mu, pi, delta);
  emit(c,
       {{"depth", mu.depth()},
        {"A", num(c.A)},
        {"nodes", pi.size()},
        {"delta", num(delta)},
        {"parabola_mass", num(pi.total())},
        {"value", num(F)}},
       out);
  return 0;
}

int cmd_suite(const RunConfig& c, std::ostream& out, bool color) {
  SuiteOptions opt;
  opt.quick = c.quick;
  opt.only = c.only;
  if (c.seed != 0) opt.seed = c.seed;
  const auto results = run_suite(opt);
  if (c.format == OutputFormat::Json)
    emit(c, suite_json(results), out);
  else
    print_table(out, results, color);
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; }) ? 0 : 1;
}

}  // namespace

void RunConfig::validate() const {
  const auto& names = subcommands();
  require(std::find(names.begin(), names.end(), subcommand) != names.end(), ErrorKind::UnknownCommand,
          "unknown command '" + subcommand + "'");
  const bool needs_field = subcommand == "count" || subcommand == "error-bound" || subcommand == "gauss-scan" ||
                           subcommand == "threshold" || subcommand == "avoid";
  if (needs_field) {
    require(!field.empty(), ErrorKind::BadConfig, "--field is required");
    (void)parse_field(field);
  }
  if (subcommand == "count" || subcommand == "threshold" || subcommand == "content" || subcommand == "frostman" ||
      subcommand == "gap-pipeline")
    require(!set.empty(), ErrorKind::BadConfig, "--set is required");
  if (subcommand == "content" || subcommand == "frostman" || subcommand == "gap-pipeline" ||
      ((subcommand == "energy" || subcommand == "functional") && measure.empty()))
    require(s > 0.0 && s <= 3.0, ErrorKind::BadExponent, "s must lie in (0, 3]");
  if (subcommand == "energy") require(sigma > 0.0 && sigma < 2.0, ErrorKind::BadExponent, "sigma must lie in (0, 2)");
  if (subcommand == "avoid")
    require(mode == "exact" || mode == "heuristic" || mode == "1d", ErrorKind::BadConfig,
            "--mode must be exact, heuristic or 1d");
  if (subcommand == "frostman")
    require(encoding == "rational" || encoding == "double", ErrorKind::BadConfig,
            "--encoding must be rational or double");
  if (subcommand == "gap-pipeline") {
    const auto b = B == "auto" ? std::optional<double>{} : std::optional<double>{to_double(B, "B")};
    (void)GapParams::make(A, b, T, C, C_sigma);
    require(nodes != 1, ErrorKind::BadParams, "--nodes must be 0 or at least 2");
  }
  if (subcommand == "functional") {
    require(A >= 1.0, ErrorKind::BadParams, "A must be at least 1");
    require(nodes != 1, ErrorKind::BadParams, "--nodes must be 0 or at least 2");
  }
  require(delta >= 0.0, ErrorKind::BadDelta, "delta must be positive");
  if (subcommand == "error-bound") require(trials >= 1 && trials <= 100000, ErrorKind::BadConfig, "--trials must lie in 1..100000");
  if (subcommand == "suite")
    for (int id : only)
      require(id >= 1 && id <= kCriterionCount, ErrorKind::BadConfig, "--only ids must lie in 1..10");
  if (subcommand == "gauss-scan")
    require(format != OutputFormat::Table, ErrorKind::BadConfig, "gauss-scan writes csv or json");
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err, bool color) {
  RunConfig c;
  CLI::App app{"Parabolic progressions: finite-field counts, avoiders and spectral-gap measures", "parawork"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  const std::map<std::string, OutputFormat> formats = {
      {"json", OutputFormat::Json}, {"csv", OutputFormat::Csv}, {"table", OutputFormat::Table}};
  auto field_opt = [&](CLI::App* sub) {
    sub->add_option("--field", c.field, "Field: p, p^n or p^n/c0,c1,...,1 (modulus, constant term first)");
  };
  auto seed_opt = [&](CLI::App* sub) { sub->add_option("--seed", c.seed, "Random seed"); };
  auto out_opt = [&](CLI::App* sub, const char* what) { sub->add_option("--out", c.out, what); };
  const char* point_set_help = "full, empty, random:N or a .bits file (q lines of q 0/1 characters, x major)";
  const char* grid_set_help = "full:m, empty:m, random:m:density or a GRIDSET file";
  const char* measure_help = "uniform:m or a GRIDMEASURE file; defaults to the Frostman measure of --set";

  auto* count = app.add_subcommand("count", "Count pairs (x, y), (x + z, y + z^2) inside a set");
  field_opt(count);
  count->add_option("--set", c.set, point_set_help);
  seed_opt(count);
  out_opt(count, "Write the JSON report here");

  auto* eb = app.add_subcommand("error-bound", "Counting defect against q^{5/2} ||f|| ||g|| for random f, g");
  field_opt(eb);
  seed_opt(eb);
  eb->add_option("--trials", c.trials, "Number of random pairs");
  out_opt(eb, "Write the JSON report here");

  auto* gs = app.add_subcommand("gauss-scan", "All parabola sums S(a, b) with their expected moduli");
  field_opt(gs);
  gs->add_option("--format", c.format, "csv or json")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  out_opt(gs, "Write the output here");

  auto* th = app.add_subcommand("threshold", "Check |A| >= 2 q^{3/2} and find a pair");
  field_opt(th);
  th->add_option("--set", c.set, point_set_help);
  seed_opt(th);
  out_opt(th, "Write the JSON report here");

  auto* av = app.add_subcommand("avoid", "Largest avoiding set: exact, heuristic or one-dimensional");
  field_opt(av);
  av->add_option("--mode", c.mode, "exact, heuristic or 1d");
  seed_opt(av);
  av->add_option("--iterations", c.iterations, "Heuristic iterations");
  out_opt(av, "Write the witness as a .bits file");

  auto* co = app.add_subcommand("content", "Dyadic parabolic Hausdorff content");
  co->add_option("--set", c.set, grid_set_help);
  co->add_option("--s", c.s, "Exponent in (0, 3]");
  seed_opt(co);
  out_opt(co, "Write the JSON report here");

  auto* fr = app.add_subcommand("frostman", "Capped Frostman measure of a grid set");
  fr->add_option("--set", c.set, grid_set_help);
  fr->add_option("--s", c.s, "Exponent in (0, 3]");
  fr->add_option("--encoding", c.encoding, "rational or double weights in the measure file");
  seed_opt(fr);
  out_opt(fr, "Write the measure as a GRIDMEASURE file");

  auto* en = app.add_subcommand("energy", "Riesz energy of a grid measure");
  en->add_option("--measure", c.measure, measure_help);
  en->add_option("--set", c.set, grid_set_help);
  en->add_option("--s", c.s, "Frostman exponent when --set is used");
  en->add_option("--sigma", c.sigma, "Energy exponent in (0, 2)");
  en->add_flag("--fourier", c.fourier, "Also evaluate the Fourier-side integral");
  seed_opt(en);
  out_opt(en, "Write the JSON report here");

  auto* gp = app.add_subcommand("gap-pipeline", "Spectral-gap measure construction with diagnostics");
  gp->add_option("--set", c.set, grid_set_help);
  gp->add_option("--s", c.s, "Exponent in (0, 3]");
  gp->add_option("--T", c.T, "Child generation T >= 1");
  gp->add_option("--A", c.A, "A >= 1");
  gp->add_option("--B", c.B, "B, or auto for the largest value allowed by (A, T)");
  gp->add_option("--C", c.C, "Frostman constant C >= 1");
  gp->add_option("--C-sigma", c.C_sigma, "Energy constant C_sigma >= 1");
  gp->add_option("--delta", c.delta, "Gaussian width for the functional; default 2^{-3T} / 8");
  gp->add_option("--nodes", c.nodes, "Parabola nodes per branch");
  seed_opt(gp);
  out_opt(gp, "Write the JSON report here");

  auto* fu = app.add_subcommand("functional", "Triple integral of psi_delta(x - y - w) against mu, mu and the parabola");
  fu->add_option("--measure", c.measure, measure_help);
  fu->add_option("--set", c.set, grid_set_help);
  fu->add_option("--s", c.s, "Frostman exponent when --set is used");
  fu->add_option("--A", c.A, "Parabola truncation A >= 1");
  fu->add_option("--delta", c.delta, "Gaussian width, default 0.1");
  fu->add_option("--nodes", c.nodes, "Parabola nodes per branch");
  seed_opt(fu);
  out_opt(fu, "Write the JSON report here");

  auto* su = app.add_subcommand("suite", "Run the acceptance battery and print a pass/fail table");
  su->add_flag("--quick", c.quick, "Smaller samples, same checks");
  su->add_option("--only", c.only, "Criterion ids to run");
  su->add_option("--format", c.format, "table or json")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  seed_opt(su);
  out_opt(su, "Write the JSON report here");

  // gauss-scan defaults to csv, every other command to json or table.
  c.format = OutputFormat::Json;
  gs->preparse_callback([&](std::size_t) { c.format = OutputFormat::Csv; });
  su->preparse_callback([&](std::size_t) { c.format = OutputFormat::Table; });

  if (argc >= 2) {
    const std::string first = argv[1];
    const auto& names = subcommands();
    if (!first.empty() && first[0] != '-' && std::find(names.begin(), names.end(), first) == names.end()) {
      err << "error: " << to_string(ErrorKind::UnknownCommand) << ": unknown command '" << first << "'\n";
      return 2;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << to_string(ErrorKind::BadConfig) << ": " << e.what() << '\n';
    return 2;
  }
  for (auto* sub : app.get_subcommands()) c.subcommand = sub->get_name();

  try {
    c.validate();
    if (c.subcommand == "count") return cmd_count(c, out);
    if (c.subcommand == "error-bound") return cmd_error_bound(c, out);
    if (c.subcommand == "gauss-scan") return cmd_gauss_scan(c, out);
    if (c.subcommand == "threshold") return cmd_threshold(c, out);
    if (c.subcommand == "avoid") return cmd_avoid(c, out);
    if (c.subcommand == "content") return cmd_content(c, out);
    if (c.subcommand == "frostman") return cmd_frostman(c, out);
    if (c.subcommand == "energy") return cmd_energy(c, out);
    if (c.subcommand == "gap-pipeline") return cmd_gap_pipeline(c, out);
    if (c.subcommand == "functional") return cmd_functional(c, out);
    return cmd_suite(c, out, color);
  } catch (const ChildDensityError& e) {
    err << "error: " << e.what() << "\nfailing children:";
    for (const auto& r : e.failing()) err << " (" << r.j << "," << r.ix << "," << r.is << ")";
    err << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.is_precondition() ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace parawork::tools
