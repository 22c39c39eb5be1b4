#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/matkernel.hpp"

namespace qwalk {

// The two 2x2 transition matrices of a nearest-neighbor walk on the integers,
// with algebraic flags computed at validation. `left` moves the walker one
// site down, `right` one site up.
struct CoinPair {
  Matrix2 left;
  Matrix2 right;
  bool trace_preserving = false;  // left^*left + right^*right = I
  bool unital = false;            // left left^* + right right^* = I
  bool unitary_sum = false;       // left + right unitary
  bool left_normal = false;
  bool right_normal = false;
  bool is_pq = false;  // each matrix diagonal or antidiagonal
};

// Checks the flags and rejects pairs that do not define an open walk
// (left^*left + right^*right must be the identity).
CoinPair validate_coin_pair(const Matrix2& left, const Matrix2& right);

// True iff m is diagonal or antidiagonal within `tol` off-pattern mass.
bool is_pq_matrix(const Matrix2& m, double tol = kExactTol);

// Block-diagonal open-walk state: one positive 2x2 block per site on the
// window [lo, lo + blocks.size() - 1]. Total trace 1, or below 1 when mass
// has been removed by taboo evolution.
struct LatticeDensity {
  int lo = 0;
  std::vector<Matrix2> blocks;

  static LatticeDensity point(int site, const Matrix2& density);

  int hi() const { return lo + static_cast<int>(blocks.size()) - 1; }
  bool contains(int site) const { return site >= lo && site <= hi(); }
  const Matrix2& block(int site) const;
  double total_trace() const;
};

// Unitary-walk state: one 2-component amplitude per site.
struct SpinorField {
  int lo = 0;
  std::vector<Vector2> amplitudes;

  static SpinorField point(int site, const Vector2& spinor);

  int hi() const { return lo + static_cast<int>(amplitudes.size()) - 1; }
  bool contains(int site) const { return site >= lo && site <= hi(); }
  const Vector2& amplitude(int site) const;
  double total_norm2() const;
};

// One step of the open walk: block'(i) = R block(i-1) R^* + L block(i+1) L^*.
// The window grows by one site on each side.
LatticeDensity oqw_step(const LatticeDensity& state, const CoinPair& coin);

// One step of the unitary walk: psi'(i) = R psi(i-1) + L psi(i+1).
// Requires the unitary_sum flag.
SpinorField uqw_step(const SpinorField& state, const CoinPair& coin);

// Site distribution after n unmonitored steps: tr of each block (open walk)
// or squared norm of each amplitude (unitary walk).
std::map<int, double> site_distribution(const LatticeDensity& state,
                                        const CoinPair& coin, int steps);
std::map<int, double> site_distribution(const SpinorField& state,
                                        const CoinPair& coin, int steps);

// A sampled quantum trajectory of the open walk. Reproducible bit for bit
// from the seed (std::mt19937_64; uniforms from the top 53 bits).
struct TrajectorySample {
  std::uint64_t seed = 0;
  std::vector<int> positions;       // X_0 .. X_T
  std::vector<Matrix2> densities;   // normalized, rho_0 .. rho_T
  std::optional<int> first_return_step;
};

TrajectorySample sample_trajectory(const CoinPair& coin, const Matrix2& rho0,
                                   int start, int horizon,
                                   std::uint64_t seed);

// --- preset registry -------------------------------------------------------

// Known names: "hadamard", "bitflip" (parameter p), "nonnormal" (alias
// "sec7"), "diag-trichotomy". The "barrier" preset is a graph walk and lives
// in kac.hpp.
CoinPair preset_coin(const std::string& name, double p = 0.5);

std::vector<std::string> preset_coin_names();

Matrix2 hadamard_left();
Matrix2 hadamard_right();
Matrix2 bitflip_left(double p);
Matrix2 bitflip_right(double p);
Matrix2 nonnormal_left();
Matrix2 nonnormal_right();
Matrix2 diag_trichotomy_left();
Matrix2 diag_trichotomy_right();

}  // namespace qwalk
