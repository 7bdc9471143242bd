#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "parawork/error.hpp"
#include "parawork/mollifier.hpp"
#include "parawork/pgeom.hpp"

namespace parawork {

inline constexpr double kGapSigma = 10.0 / 6.0;

/// Constants of the spectral-gap construction. Built only through make(),
/// which enforces 2^{-T} B^6 <= A^{-3}.
struct GapParams {
  double A = 1.0;
  double B = 1.0;
  int T = 1;
  double sigma = kGapSigma;
  double C_frost = 1.0;  ///< energy constant C entering B_0
  double C_sigma = 1.0;
  double delta = 1.0 / 64.0;  ///< 2^{-3T} / 8

  /// Largest B allowed for (A, T): (2^T A^{-3})^{1/6}.
  static double auto_B(double A, int T);
  /// Throws BadParams unless A >= 1, T >= 1, B > 0, C_frost >= 1,
  /// C_sigma >= 1 and 2^{-T} B^6 <= A^{-3}. An empty B selects auto_B.
  static GapParams make(double A, std::optional<double> B, int T, double C_frost = 1.0, double C_sigma = 1.0);
};

/// Distance between the chosen constants and the ones the argument needs.
struct CertifyReport {
  double log10_B0 = 0.0;  ///< B_0 = (A C C_sigma)^{5 / (sigma - 3/2)}
  bool B_meets_B0 = false;
  double T_for_B0 = 0.0;  ///< smallest real T with 2^{-T} B_0^6 <= A^{-3}
  TailReport tail;        ///< mollifier tail at A
};

CertifyReport certify(const GapParams& p, const Mollifier& phi);

/// Length measure on {(z, z^2) : A^{-2} <= |z| <= 1}: n uniform nodes per
/// branch with trapezoid arclength weights sqrt(1 + 4 z^2) dz.
class ParabolaMeasure {
 public:
  /// Throws BadParams unless A >= 1. n = 0, or A = 1, gives no nodes.
  explicit ParabolaMeasure(double A, std::size_t n = 4096);

  double A() const noexcept { return A_; }
  std::size_t size() const noexcept { return z_.size(); }
  std::span<const double> nodes() const noexcept { return z_; }
  std::span<const double> weights() const noexcept { return w_; }
  double total() const;
  /// Same weights with every node z replaced by -z.
  ParabolaMeasure mirrored() const;

  /// L(z) = z sqrt(1 + 4 z^2) / 2 + asinh(2 z) / 4, the arclength from 0.
  static double arclength_from_origin(double z);
  /// Exact mass 2 (L(1) - L(A^{-2})).
  static double exact_total(double A);

 private:
  ParabolaMeasure() = default;
  double A_ = 1.0;
  std::vector<double> z_, w_;
};

/// psi(x) = exp(-pi |x|^2) and psi_d(x) = d^{-2} psi(x / d).
struct GaussianKernel {
  double delta = 1.0;

  static double psi(double x, double s);
  /// psi(x) >= 1/2 exactly when |x| <= sqrt(ln 2 / pi).
  static double c_psi();
  double operator()(double x, double s) const;
  /// psi_d^(xi) = exp(-pi d^2 |xi|^2).
  double hat(double xi1, double xi2) const;
};

struct AnnulusQuadrature {
  int angles = 512;           ///< over [0, 2 pi); half of them are evaluated
  int radial_per_unit = 8;    ///< Gauss-Legendre nodes per unit of radius
};

/// Integral of |f(xi)|^2 over A^{1/5} <= |xi| <= B^2 on a polar grid, for f
/// with |f(-xi)| = |f(xi)|. Throws BadAnnulus unless A >= 1 and
/// B^2 > A^{1/5}.
double spectral_gap_integral(const std::function<std::complex<double>(double, double)>& f, double A, double B,
                             AnnulusQuadrature quad = {});
double spectral_gap_integral(const GridMeasure& mu, double A, double B, AnnulusQuadrature quad = {});

/// Raised when some generation-T child of the dense rectangle has content
/// below half of ell^s.
class ChildDensityError : public Error {
 public:
  ChildDensityError(std::vector<ParabolicRect> failing, const std::string& what)
      : Error(ErrorKind::ChildDensityFailure, what), failing_(std::move(failing)) {}
  const std::vector<ParabolicRect>& failing() const noexcept { return failing_; }

 private:
  std::vector<ParabolicRect> failing_;
};

struct ChildReport {
  ParabolicRect rect;
  double content = 0.0;       ///< H^s_inf(K inside the child) on the grid
  double frostman_mass = 0.0; ///< ||mu_Q^0||
  double weight = 0.0;        ///< w(Q), the phi-integral of its rescaled image
  double mass = 0.0;          ///< ||mu_Q|| = w(Q) ell(Q_dense)^s
};

struct GapReport {
  GapParams params;
  double s = 0.0;
  ParabolicRect dense_rect;
  double dense_content = 0.0;
  std::vector<ChildReport> children;
  double total_mass = 0.0;        ///< of the blown-up measure
  double cell_mass_defect = 0.0;  ///< max over depth-T cells of |mu(Q) - phi(Q)|
  double frostman_constant = 0.0; ///< empirical parabolic constant at exponent s
  double dyadic_ratio = 0.0;      ///< max mu(Q) / ell(Q)^s over dyadic Q
  std::optional<double> spectral_gap_value;  ///< empty when B^2 <= A^{1/5}
};

struct GapResult {
  GridMeasure mu;
  GapReport report;
};

/// Dense rectangle, child check, Frostman measures per child, reweighting by
/// phi and blow-up. The result lives on a grid of depth m - generation(Q).
/// Throws EmptyContent, NoDenseRect, BadParams (T too deep for the grid) and
/// ChildDensityError.
GapResult build_gap_measure(const GridSet& k, double s, const GapParams& params, const Mollifier& phi,
                            std::uint64_t seed = 0, AnnulusQuadrature quad = {});

struct FourierComparison {
  double max_ratio = 0.0;  ///< max |mu^ - phi^| / (|xi| 2^{-T})
  std::pair<double, double> worst_xi{0.0, 0.0};
  std::vector<double> ratios;  ///< per sample, NaN where xi = 0
};

FourierComparison fourier_comparison(const GridMeasure& mu, const Mollifier& phi, int T,
                                     std::span<const std::pair<double, double>> xi_samples);

/// Polar sample grid: radii geometric in [r_min, r_max], angles uniform in [0, pi).
std::vector<std::pair<double, double>> polar_samples(double r_min, double r_max, int radii, int angles);

/// Integral of psi_delta(x - y - w) dpi(w) dmu(y) dmu(x), summed over cell
/// offsets and parabola nodes. Each cell pair uses the exact average of the
/// separable Gaussian over the two cells. Throws BadDelta unless delta > 0.
double convolution_functional(const GridMeasure& mu, const ParabolaMeasure& pi, double delta);

struct Lemma1Report {
  double I1 = 0.0, I2 = 0.0, I3 = 0.0, total = 0.0;
  double kappa = 0.0;  ///< empirical A * I1
};

/// I1 = F(1/A), I2 = F(1/B) - F(1/A), I3 = F(delta) - F(1/B), total = F(delta)
/// for F = convolution_functional(mu, pi, .). Throws BadDelta unless
/// 0 < delta < 1/B.
Lemma1Report lemma1_diagnostics(const GridMeasure& mu, const ParabolaMeasure& pi, const GapParams& params,
                                double delta);

}  // namespace parawork
