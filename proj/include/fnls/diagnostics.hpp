#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fnls/fft.hpp"
#include "fnls/grid.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

/// H = ||(-Delta)^{s/2} u||_2^2 + ||V^{1/2} u||_2^2 + 1/2 ||g^{1/4} u||_4^4.
struct Hamiltonian {
  double kinetic = 0.0;
  double potential = 0.0;
  double interaction = 0.0;
  double total = 0.0;
};

/// lhs <= C rhs witness. ratio = lhs / rhs; a witness with lhs = rhs = 0 is
/// degenerate and has ratio NaN.
struct BoundWitness {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::string label;
  bool degenerate = false;
};

BoundWitness make_witness(double lhs, double rhs, std::string label);

struct WeightedNorms {
  double potential_l2 = 0.0;    // ||V^{1/2} u||_2
  double interaction_l4 = 0.0;  // ||g^{1/4} u||_4
};

double mass(const ComplexField& u);

/// Throws DomainError if V or g has a negative entry, StructuralError on size
/// mismatch.
Hamiltonian hamiltonian(const ComplexField& u, std::span<const double> V, std::span<const double> g,
                        const FractionalOrder& order);

WeightedNorms weighted_norms(const ComplexField& u, std::span<const double> V,
                             std::span<const double> g);

/// lhs = ||u_t||_{H^s}; rhs = (1 + ||V||_inf)^{1/2} ||u0||_{H^s} + ||g||_inf^{1/2} ||u0||_4^2.
BoundWitness hs_growth_witness(const ComplexField& u_t, const ComplexField& u0,
                               std::span<const double> V, std::span<const double> g,
                               const FractionalOrder& order);

/// ||u||_inf / ||u||_{H^s}, the embedding witness for d < 2s.
BoundWitness embedding_witness(const ComplexField& u, const FractionalOrder& order);

/// Sobolev witness ||u||_q <= C ||(-Delta)^{s/2} u||_2 with q = 2d/(d - 2s).
/// Throws DomainError unless d > 2s.
BoundWitness check_sobolev(const ComplexField& u, double s, int d = 1);

/// Exponent tuple of the Gagliardo-Nirenberg-Sobolev inequality
///   ||f||_{W^{r,q}} <~ ||f||_{W^{s1,p1}}^theta ||f||_{W^{s2,p2}}^{1-theta}.
struct GNSParams {
  double r = 0.0;
  double s1 = 0.0;
  double s2 = 1.0;
  double p1 = 2.0;
  double p2 = 2.0;
  double q = 6.0;
  double theta = 0.0;
  int d = 1;

  /// Validates the admissibility conditions and rejects the two exceptional
  /// families. Use kInfinity for infinite exponents. Throws DomainError.
  static GNSParams make(double r, double s1, double s2, double p1, double p2, double q,
                        double theta, int d);

  /// The L6 tuple r = 0, q = 6, s1 = 0, p1 = 2, s2 = s, p2 = 2,
  /// theta = 1 - d/(3s). Needs d < 3s.
  static GNSParams l6(double s, int d = 1);

  double mu() const noexcept { return theta * s1 + (1.0 - theta) * s2; }
};

/// lhs = ||u||_{L^q}; rhs = ||u||_{H^{s1}}^theta ||u||_{H^{s2}}^{1-theta}
/// (H^0 = L^2). Only r = 0 and p1 = p2 = 2 are supported; other tuples
/// throw DomainError.
BoundWitness check_gns(const ComplexField& u, const GNSParams& params);

/// Sobolev-scale norm ||u||_{H^sigma}, with H^0 the plain L2 norm.
double sobolev_scale_norm(const ComplexField& u, double sigma);

/// Random field with standard complex normal Fourier coefficients on the
/// modes 1 <= |jt| <= max_mode (plus jt = 0 when include_zero_mode), decaying
/// like 1/(1 + |jt|).
ComplexField random_band_limited_field(const Grid& grid, std::size_t max_mode, std::mt19937_64& rng,
                                       bool include_zero_mode);

struct EnsembleStats {
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  std::size_t samples = 0;
  std::size_t degenerate = 0;
};

EnsembleStats gns_ensemble(const Grid& grid, const GNSParams& params, std::size_t count,
                           std::uint64_t seed, std::size_t max_mode = 16);

EnsembleStats sobolev_ensemble(const Grid& grid, double s, std::size_t count, std::uint64_t seed,
                               std::size_t max_mode = 16);

/// Everything the solver records per diagnostic step.
struct FieldDiagnostics {
  double mass = 0.0;
  Hamiltonian energy;
  double hs_norm = 0.0;
  double l4_norm = 0.0;
  double linf_norm = 0.0;
};

/// Evaluates FieldDiagnostics with one transform and precomputed symbols.
/// Holds scratch space, so one instance per thread.
class DiagnosticsEvaluator {
 public:
  DiagnosticsEvaluator(const Grid& grid, const FractionalOrder& order, std::span<const double> V,
                       std::span<const double> g);

  FieldDiagnostics evaluate(std::span<const cplx> u);

 private:
  Grid grid_;
  Fft fft_;
  std::vector<double> kinetic_symbol_;
  std::vector<double> hs_symbol_;
  std::vector<double> V_;
  std::vector<double> g_;
  std::vector<cplx> spectrum_;
};

}  // namespace fnls
