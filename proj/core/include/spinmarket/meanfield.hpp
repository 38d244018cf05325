#pragma once

#include <array>
#include <string>
#include <vector>

#include "spinmarket/error.hpp"

namespace spinmarket {

/// Magnetization of a (2M+1)-state spin in reduced field u:
///   (M + 1/2) coth((M + 1/2) u) - (1/2) coth(u / 2)
/// Below |u| = 1e-4 the odd Taylor series is used instead.
double brillouin(double u, int M);

/// Two communities with intra-group couplings J1, J2, cross couplings K12, K21
/// and the global price coupling a.
struct MeanFieldParams {
  double J1 = 1.0;
  double J2 = 0.5;
  double K12 = 1.0;
  double K21 = -0.5;
  double a = 5.0;
  double T = 1.0;
  int M1 = 1;
  int M2 = 1;
  double s1_0 = 1.0;
  double s2_0 = -1.0;
  /// Divide a by T like the couplings. Off: a enters the exponent unscaled.
  bool a_over_T = false;
  double price_scale = 1.0;  // a_p
  double clearing_price = 3.0;  // A

  void validate() const;
  friend bool operator==(const MeanFieldParams&, const MeanFieldParams&) = default;
};

struct MeanFieldRow {
  long t = 0;
  double s1 = 0;
  double s2 = 0;
  double P = 0;
};

struct MeanFieldTrajectory {
  std::vector<MeanFieldRow> rows;
};

/// Effective reduced fields (u1, u2) felt by the two groups.
std::array<double, 2> mf_fields(double s1, double s2, const MeanFieldParams& p);

std::array<double, 2> mf_step(double s1, double s2, const MeanFieldParams& p);

/// P = A + a_p (s1 + s2) / 2
double mf_price(double s1, double s2, double a_p, double A) noexcept;

/// steps + 1 rows starting from (s1_0, s2_0).
MeanFieldTrajectory mf_run(const MeanFieldParams& p, long steps);

enum class Regime { ordered, oscillating, clearing };

const char* regime_name(Regime r) noexcept;

struct RegimeReport {
  Regime regime = Regime::clearing;
  double period = 0;     // oscillating only, else 0
  double amplitude = 0;  // largest peak-to-peak range over the tail
  double s1 = 0;         // final state
  double s2 = 0;
};

/// The tail fits none of the three patterns.
class TransientError : public Error {
 public:
  using Error::Error;
};

/// Classifies the last `tail` rows:
///   clearing     max |s| < tol
///   ordered      both groups settled (steps and tail range < tol) away from 0
///   oscillating  amplitude > tol, last-quarter range >= 0.9 x the quarter before,
///                and at least two crossings of the mean
RegimeReport classify_regime(const MeanFieldTrajectory& traj, long tail, double tol);

struct RegimeOptions {
  long steps = 2000;
  long tail = 500;
  double tol = 1e-3;
  int grid = 41;  // temperatures checked before bisecting
};

RegimeReport regime_at(MeanFieldParams p, double T, const RegimeOptions& opts = {});

struct RegimeScanRow {
  double T = 0;
  std::string regime;  // ordered, oscillating, clearing or transient
  double period = 0;
  double amplitude = 0;
};

std::vector<RegimeScanRow> regime_scan(const MeanFieldParams& p, const std::vector<double>& T_grid,
                                       const RegimeOptions& opts = {}, unsigned threads = 1);

struct RegimeBoundaries {
  double T_c1 = 0;  // ordered -> oscillating
  double T_c2 = 0;  // oscillating -> clearing
};

/// Checks that regimes along an even grid over [T_lo, T_hi] run ordered, then
/// oscillating (or unclassified), then clearing, and bisects both boundaries
/// down to width tol. Throws Error listing the observed sequence otherwise.
RegimeBoundaries regime_boundaries(const MeanFieldParams& p, double T_lo, double T_hi, double tol,
                                   const RegimeOptions& opts = {});

/// d(s1', s2')/d(s1, s2) at the origin.
std::array<std::array<double, 2>, 2> origin_jacobian(const MeanFieldParams& p);

/// The origin attracts nearby trajectories iff this is < 1.
double origin_spectral_radius(const MeanFieldParams& p);

}  // namespace spinmarket
