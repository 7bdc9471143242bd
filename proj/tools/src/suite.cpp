#include "parawork/tools/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "parawork/avoiders.hpp"
#include "parawork/error.hpp"
#include "parawork/ffield.hpp"
#include "parawork/gapfinder.hpp"
#include "parawork/mollifier.hpp"
#include "parawork/pgeom.hpp"
#include "parawork/progressions.hpp"
#include "parawork/spectral.hpp"
#include "parawork/tools/oracles.hpp"

namespace parawork::tools {

namespace {

// Tolerances and budgets, fixed here so that every run checks the same thing.
constexpr double kGaussRelTol = 1e-8;
constexpr double kSpectralAgreeTol = 1e-7;
constexpr double kCellMassTol = 1e-6;
constexpr double kTotalMassTol = 1e-9;
constexpr double kMonteCarloTol = 0.02;
constexpr double kNodeDoublingTol = 1e-3;
constexpr double kSplitTol = 1e-6;
constexpr double kFrostmanSlack = 1e-12;
constexpr double kMonotoneSlack = 1e-9;
// |e(x.xi) - e(y.xi)| <= 2 pi |xi| |x - y| and a generation-T cell has
// diameter at most 2^{-T} sqrt(5) / 2.
constexpr double kRatioBound = std::numbers::pi * 2.2360679774997896964;

struct Spec {
  const char* name;
  double budget;
};

constexpr Spec kSpecs[kCriterionCount] = {
    {"gauss_sum_trichotomy", 30.0},   {"counting_defect_bound", 120.0}, {"pair_count_lower_bound", 120.0},
    {"threshold_witnesses", 180.0},   {"threshold_1d", 60.0},           {"content_dp_vs_exhaustive", 60.0},
    {"frostman_invariants", 120.0},   {"pipeline_identities", 120.0},   {"functional_oracle", 120.0},
    {"spectral_gap_properties", 600.0},
};

std::string g(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failures;
  void check(bool ok, const std::string& what) {
    if (ok) return;
    failures += (pass ? "" : "; ") + what;
    pass = false;
  }
  std::string text() const {
    const std::string d = detail.str();
    return failures.empty() ? d : d + " | FAILED: " + failures;
  }
};

std::vector<cplx> random_complex(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = {nd(rng), nd(rng)};
  return v;
}

PointSet2 random_set(const FieldCtx& ctx, std::uint64_t size, std::mt19937_64& rng) {
  std::vector<std::uint32_t> cells(std::size_t{ctx.q()} * ctx.q());
  for (std::uint32_t i = 0; i < cells.size(); ++i) cells[i] = i;
  std::shuffle(cells.begin(), cells.end(), rng);
  cells.resize(size);
  return PointSet2::from_indices(ctx, cells);
}

// ---- criteria ----------------------------------------------------------------

void c1(const SuiteOptions&, Outcome& out) {
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const char* spec : {"3", "5", "7", "3^2", "13", "5^2", "3^3", "7^2"}) {
    const FieldCtx f = parse_field(spec);
    const std::uint32_t q = f.q();
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) {
        const double got = std::abs(parabola_raw_sum(f, a, b));
        const double want = oracle::gauss_modulus_case(a, b, q);
        const double err = std::abs(got - want) / static_cast<double>(q);
        worst = std::max(worst, err);
        ++pairs;
        if (err > kGaussRelTol) out.check(false, std::string("q=") + spec + " (a,b)=(" + std::to_string(a) + "," +
                                                   std::to_string(b) + ") |S|=" + g(got) + " want " + g(want));
      }
  }
  out.detail << pairs << " pairs, max err/q " << g(worst);
}

void c2(const SuiteOptions& opt, Outcome& out) {
  const int trials = opt.quick ? 20 : 200;
  std::mt19937_64 rng(opt.seed + 2);
  double worst_ratio = 0.0, worst_agree = 0.0;
  for (const char* spec : {"5", "3^2", "13", "5^2"}) {
    const FieldCtx f = parse_field(spec);
    const std::size_t n = std::size_t{f.q()} * f.q();
    for (int t = 0; t < trials; ++t) {
      const auto fv = random_complex(n, rng), gv = random_complex(n, rng);
      const cplx direct = progression_sum_direct(f, fv, gv);
      const cplx spectral = progression_sum_spectral(f, fv, gv);
      cplx sf = 0.0, sg = 0.0;
      for (auto v : fv) sf += v;
      for (auto v : gv) sg += v;
      const cplx main = sf * sg / static_cast<double>(f.q());
      const double defect_direct = std::abs(direct - main);
      const double defect_spectral = std::abs(progression_sum_spectral(f, fv, gv, true));
      const double bound = std::pow(static_cast<double>(f.q()), 2.5) * l2_norm(f, fv) * l2_norm(f, gv);
      const double agree = std::abs(defect_direct - defect_spectral) / std::max(1.0, defect_direct);
      const double total_agree = std::abs(direct - spectral) / std::max(1.0, std::abs(direct));
      worst_ratio = std::max(worst_ratio, defect_direct / bound);
      worst_agree = std::max({worst_agree, agree, total_agree});
      out.check(defect_direct <= bound, std::string("bound at q=") + spec);
      out.check(agree <= kSpectralAgreeTol && total_agree <= kSpectralAgreeTol,
                std::string("direct/spectral agreement at q=") + spec);
    }
  }
  out.detail << trials << " pairs per q, max defect/bound " << g(worst_ratio) << ", max disagreement "
             << g(worst_agree);
}

void c3(const SuiteOptions& opt, Outcome& out) {
  const int trials = opt.quick ? 50 : 1000;
  std::mt19937_64 rng(opt.seed + 3);
  double min_slack = std::numeric_limits<double>::infinity();
  for (const char* spec : {"3", "5", "7", "3^2", "13", "5^2", "3^3"}) {
    const FieldCtx f = parse_field(spec);
    const std::uint32_t q = f.q();
    std::uniform_int_distribution<std::uint64_t> size_of(0, std::uint64_t{q} * q);
    for (int t = 0; t < trials; ++t) {
      const auto a = random_set(f, size_of(rng), rng);
      const CountReport r = count_pairs(a);
      const long double alpha = static_cast<long double>(a.size()) / (static_cast<long double>(q) * q);
      const long double bound = (alpha - 1.0L / std::sqrt(static_cast<long double>(q))) * alpha *
                                static_cast<long double>(q) * q * q;
      const long double slack = static_cast<long double>(r.total) - bound;
      min_slack = std::min(min_slack, static_cast<double>(slack));
      out.check(slack >= 0.0L, std::string("count below bound at q=") + spec);
      if (t < 3) out.check(r.total == oracle::brute_pair_count(a, false), std::string("count vs brute force at q=") + spec);
    }
  }
  out.detail << trials << " sets per q, min(count - bound) " << g(min_slack);
}

void c4(const SuiteOptions& opt, Outcome& out) {
  const int trials = opt.quick ? 10 : 100;
  std::mt19937_64 rng(opt.seed + 4);
  for (const char* spec : {"3^2", "13", "5^2"}) {
    const FieldCtx f = parse_field(spec);
    const std::uint64_t size = threshold_size(f.q());
    for (int t = 0; t < trials; ++t) {
      const auto a = random_set(f, size, rng);
      const ThresholdVerdict v = check_threshold(a);
      out.check(v.above_threshold && v.witness && oracle::is_witness(a, *v.witness),
                std::string("witness at q=") + spec);
    }
  }
  std::uint64_t exact[2] = {};
  for (int i = 0; i < 2; ++i) {
    const FieldCtx f = parse_field(i == 0 ? "3" : "5");
    const AvoiderResult r = max_avoider_exact(f);
    exact[i] = r.size;
    const double q = f.q();
    out.check(static_cast<double>(r.size) < 2.0 * std::pow(q, 1.5), "exact avoider below 2 q^{3/2}");
    out.check(avoids(r.witness) && r.witness.size() == r.size, "exact witness avoids");
  }
  const std::uint64_t enumerated = oracle::max_avoider_by_subsets(parse_field("3"));
  out.check(exact[0] == enumerated, "q=3 exact vs subset enumeration");
  out.detail << trials << " sets per q all with witnesses; exact q=3: " << exact[0] << " (enumeration " << enumerated
             << "), q=5: " << exact[1];
}

void c5(const SuiteOptions&, Outcome& out) {
  std::ostringstream sizes;
  for (const char* spec : {"3", "5", "7", "3^2", "13", "5^2"}) {
    const FieldCtx f = parse_field(spec);
    const std::uint64_t m = min_guaranteed_1d(f);
    const double q = f.q();
    out.check(static_cast<double>(m) < std::sqrt(q) + 1.0, std::string("1D maximum at q=") + spec);
    if (f.q() <= 20)
      out.check(m == oracle::max_avoider_1d_by_subsets(f), std::string("1D maximum vs enumeration at q=") + spec);
    sizes << (sizes.tellp() > 0 ? " " : "") << "q=" << f.q() << ":" << m;
  }
  out.detail << "max 1D avoider " << sizes.str();
}

void c6(const SuiteOptions& opt, Outcome& out) {
  const int trials = opt.quick ? 10 : 100;
  std::mt19937_64 rng(opt.seed + 6);
  std::uniform_real_distribution<double> dens(0.0, 1.0);
  int compared = 0;
  for (int t = 0; t < trials; ++t) {
    const GridSet k = GridSet::random(2, dens(rng), rng);
    for (double s : {2.0, 2.5, 2.9}) {
      const ContentResult dp = content_dp(k, s);
      const oracle::CoverOptimum ex = oracle::min_cover_depth2(k, s);
      ++compared;
      out.check(dp.value == ex.value, "DP " + g(dp.value) + " vs exhaustive " + g(ex.value) + " at s=" + g(s));
    }
  }
  out.detail << compared << " (set, s) pairs equal";
}

std::vector<GridSet> frostman_fixtures(std::uint64_t seed, int count) {
  std::vector<GridSet> sets;
  const int m = 5;
  sets.push_back(GridSet::full(m));
  GridSet single(m);
  single.set(cells_at(m) / 2 + 3);
  sets.push_back(single);
  GridSet column(m);
  for (std::uint64_t is = 0; is < rows_at(m); ++is) column.set(is);
  sets.push_back(column);
  GridSet stripes(m);
  for (std::uint64_t c = 0; c < cells_at(m); ++c)
    if ((c % rows_at(m)) % 2 == 0) stripes.set(c);
  sets.push_back(stripes);
  std::mt19937_64 rng(seed);
  for (int i = static_cast<int>(sets.size()); i < count; ++i)
    sets.push_back(GridSet::random(m, 0.05 + 0.9 * (i - 4) / std::max(1, count - 5), rng));
  if (sets.size() > static_cast<std::size_t>(count)) sets.erase(sets.begin() + count, sets.end());
  return sets;
}

void c7(const SuiteOptions& opt, Outcome& out) {
  const auto sets = frostman_fixtures(opt.seed + 7, opt.quick ? 5 : 20);
  double worst = 0.0, min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (double s : {2.8, 2.9}) {
      const GridMeasure mu = frostman(sets[i], s);
      const auto levels = mu.pyramid();
      for (int j = 0; j <= mu.depth(); ++j) {
        const double cap = std::pow(2.0, -j * s);
        for (double v : levels[static_cast<std::size_t>(j)]) {
          worst = std::max(worst, v / cap);
          if (v > cap * (1.0 + kFrostmanSlack)) {
            out.check(false, "mu(Q) > ell^s for fixture " + std::to_string(i));
            break;
          }
        }
      }
      const double content = dyadic_content(sets[i], s);
      min_margin = std::min(min_margin, mu.total() - content);
      out.check(mu.total() >= content * (1.0 - kFrostmanSlack), "mass below content for fixture " + std::to_string(i));
    }
  out.detail << sets.size() << " fixtures, max mu(Q)/ell^s " << g(worst) << ", min(mass - content) " << g(min_margin);
}

void c8(const SuiteOptions&, Outcome& out) {
  const Mollifier phi;
  const GapParams p = GapParams::make(1.0, 1.1, 1);
  const GapResult r = build_gap_measure(GridSet::full(6), 2.9, p, phi);
  out.check(r.report.cell_mass_defect <= kCellMassTol, "cell-mass identity, defect " + g(r.report.cell_mass_defect));
  out.check(std::abs(r.report.total_mass - 1.0) <= kTotalMassTol, "total mass " + g(r.report.total_mass));
  // (A, B, T) with 2^{-T} B^6 > A^{-3} must be refused.
  const std::tuple<double, double, int> bad[] = {
      {10.0, 1.0, 1}, {2.0, 2.0, 3}, {1.0, 1.2, 1}, {10.0, GapParams::auto_B(10.0, 12) * (1.0 + 1e-9), 12}};
  int rejected = 0;
  for (const auto& [A, B, T] : bad) {
    try {
      (void)GapParams::make(A, B, T);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BadParams) ++rejected;
    }
  }
  out.check(rejected == 4, "GapParams accepted a violating triple");
  bool accepted = true;
  try {
    (void)GapParams::make(10.0, std::nullopt, 12);
    (void)GapParams::make(1.0, 1.1, 1);
  } catch (const Error&) {
    accepted = false;
  }
  out.check(accepted, "GapParams refused a valid triple");
  out.detail << "defect " << g(r.report.cell_mass_defect) << ", |total - 1| " << g(std::abs(r.report.total_mass - 1.0))
             << ", rejected " << rejected << "/4";
}

void c9(const SuiteOptions& opt, Outcome& out) {
  const GridMeasure mu(6, std::vector<double>(cells_at(6), 1.0 / static_cast<double>(cells_at(6))));
  const double A = 2.0, delta = 0.1;
  const ParabolaMeasure pi(A);
  const double F = convolution_functional(mu, pi, delta);
  const auto mc = oracle::functional_uniform_mc(A, delta, opt.quick ? 4'000'000 : 10'000'000, opt.seed + 9);
  const double rel = std::abs(F - mc.mean) / mc.mean;
  out.check(F > 0.0, "functional not positive");
  out.check(rel <= kMonteCarloTol, "Monte-Carlo mismatch " + g(rel));
  const double F2 = convolution_functional(mu, ParabolaMeasure(A, 8192), delta);
  const double drift = std::abs(F2 - F) / F;
  out.check(drift <= kNodeDoublingTol, "node doubling moved the value by " + g(drift));
  const GapParams p = GapParams::make(A, std::nullopt, 6);
  const Lemma1Report d = lemma1_diagnostics(mu, pi, p, delta);
  const double split = std::abs(d.I1 + d.I2 + d.I3 - d.total) / std::abs(d.total);
  out.check(split <= kSplitTol, "I1 + I2 + I3 vs total " + g(split));
  out.check(std::abs(d.total - F) <= 1e-12 * F, "diagnostic total differs from the functional");
  out.check(d.I1 > 0.0, "I1 not positive");
  out.detail << "F " << g(F) << ", MC " << g(mc.mean) << " +- " << g(mc.stderr_) << " (rel " << g(rel)
             << "), N-doubling " << g(drift) << ", split " << g(split) << ", kappa " << g(d.kappa);
}

void c10(const SuiteOptions& opt, Outcome& out) {
  const Mollifier phi;
  const GridSet k = GridSet::full(6);
  const double A = 1.0, B = 1.1;
  const std::vector<int> Ts = opt.quick ? std::vector<int>{1, 2} : std::vector<int>{1, 2, 4};
  const auto xi = polar_samples(0.4, 4.0, 12, 16);
  const double tail = mollifier_tail(phi, A).total;
  std::vector<double> gaps, ratios;
  std::ostringstream extra;
  for (int T : Ts) {
    const GapParams p = GapParams::make(A, B, T);
    const GapResult r = build_gap_measure(k, 2.9, p, phi);
    const double gap = r.report.spectral_gap_value.value();
    gaps.push_back(gap);
    const FourierComparison fc = fourier_comparison(r.mu, phi, T, xi);
    ratios.push_back(fc.max_ratio);
    const MeasureFourier mf(r.mu);
    const double diff = spectral_gap_integral(
        [&](double a, double b) { return mf(a, b) - phi.hat(a, b); }, A, B);
    const double C = gap / (std::ldexp(std::pow(B, 6), -T) + tail);
    extra << " T=" << T << ": gap " << g(gap) << " diff " << g(diff) << " C " << g(C) << " ratio " << g(fc.max_ratio)
          << ";";
  }
  bool monotone = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) monotone = monotone && gaps[i] <= gaps[i - 1] + kMonotoneSlack;
  const double max_ratio = *std::max_element(ratios.begin(), ratios.end());
  const bool bounded = max_ratio <= kRatioBound;
  // Sup defect max_ratio 2^{-T}; one more generation should halve it up to 2x.
  const double halving = (ratios[1] / 4.0) / (ratios[0] / 2.0);
  const bool halves = halving >= 0.25 && halving <= 1.0;
  out.check(monotone, "monotone gap under doubling T");
  out.check(bounded, "ratio bound");
  out.check(halves, "defect halving");
  out.detail << "monotone=" << (monotone ? "PASS" : "FAIL") << " ratio_bound=" << (bounded ? "PASS" : "FAIL") << " ("
             << g(max_ratio) << " <= " << g(kRatioBound) << ") halving=" << (halves ? "PASS" : "FAIL") << " ("
             << g(halving) << ");" << extra.str();
}

using Runner = void (*)(const SuiteOptions&, Outcome&);
constexpr Runner kRunners[kCriterionCount] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};

}  // namespace

CriterionResult run_criterion(int id, const SuiteOptions& opt) {
  require(id >= 1 && id <= kCriterionCount, ErrorKind::BadConfig, "criterion id must lie in 1..10");
  CriterionResult res;
  res.id = id;
  res.name = kSpecs[id - 1].name;
  res.budget_seconds = kSpecs[id - 1].budget;
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    kRunners[id - 1](opt, out);
  } catch (const std::exception& e) {
    out.check(false, std::string("exception: ") + e.what());
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.check(res.seconds <= res.budget_seconds, "runtime " + g(res.seconds) + " s over budget");
  res.pass = out.pass;
  res.detail = out.text();
  return res;
}

std::vector<CriterionResult> run_suite(const SuiteOptions& opt) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id)
    if (opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), id) != opt.only.end())
      out.push_back(run_criterion(id, opt));
  return out;
}

void print_table(std::ostream& os, const std::vector<CriterionResult>& results, bool color) {
  for (const auto& r : results) {
    const char* tag = r.pass ? "PASS" : "FAIL";
    if (color) os << (r.pass ? "\x1b[32m" : "\x1b[31m") << tag << "\x1b[0m";
    else os << tag;
    char head[96];
    std::snprintf(head, sizeof head, "  %2d  %-26s %8.2fs  ", r.id, r.name.c_str(), r.seconds);
    os << head << r.detail << '\n';
  }
  const auto passed = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  os << passed << "/" << results.size() << " criteria passed\n";
}

json suite_json(const std::vector<CriterionResult>& results) {
  json arr = json::array();
  for (const auto& r : results)
    arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  return {{"criteria", arr}};
}

}  // namespace parawork::tools
