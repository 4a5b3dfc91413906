#pragma once

// Conservation laws: the inviscid mass/momentum pair, the nonlinear
// self-adjointness multipliers h, g, the symmetry-generated conserved
// vectors, and finite-difference divergence checks on sampled fields.

#include <string>
#include <vector>

#include "trafficsym/catalog.hpp"
#include "trafficsym/model.hpp"

namespace trafficsym {

struct MultiplierConstants {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
};

enum class ConservedKind { Mass, Momentum, S1, S2, S3, S4 };

std::string conserved_kind_name(ConservedKind k);

struct ConservedPair {
  double T = 0.0;  ///< density
  double C = 0.0;  ///< flux
  ConservedKind which = ConservedKind::Mass;
};

struct BasicConserved {
  ConservedPair mass, momentum;
};

/// Mass (rho, rho u) and momentum (rho u, rho u^2 + A rho). Requires D = 0.
BasicConserved basic_conserved(const ModelParams& p, const StatePoint& s);

struct SelfAdjointMultipliers {
  double h = 0.0, g = 0.0;
  double l1 = 0.0, l2 = 0.0, l3 = 0.0, l4 = 0.0;
};

/// h = c1 u - c1 A / rho + c3, g = c1 (rho + u) + c2 and the l-multipliers.
SelfAdjointMultipliers self_adjoint_substitution(const MultiplierConstants& c,
                                                 const ModelParams& p, const StatePoint& s);

struct AdjointResidual {
  double d1 = 0.0, d2 = 0.0;
};

/// Adjoint expressions S1, S2 with h, g substituted, minus l1 R1 + l2 R2 and
/// l3 R1 + l4 R2. Every x/t derivative of rho, u, h and g is a second-order
/// central difference with step h_step; R1, R2 use the sampler's partials.
AdjointResidual adjoint_identity_residual(const MultiplierConstants& c, const ModelParams& p,
                                          const SolutionSampler& s, double x, double t,
                                          double h_step);

struct ConvergenceStudy {
  std::vector<double> steps;
  std::vector<double> values;  ///< max |residual| per step
  std::vector<double> ratios;  ///< values[k] / values[k+1]
  double order = 0.0;          ///< log2 of the last ratio; NaN when exact
  bool exact = false;          ///< every value is at round-off level
};

/// adjoint_identity_residual at steps h0, h0/2, ... (levels entries); values
/// are max(|d1|, |d2|).
ConvergenceStudy adjoint_identity_study(const MultiplierConstants& c, const ModelParams& p,
                                        const SolutionSampler& s, double x, double t,
                                        double h0, int levels = 4);

struct ConservedVector {
  double Ux = 0.0, Ut = 0.0;
};

/// Field state with first partials, u_xx and the mixed u_tx.
struct FieldJet {
  StatePoint v;
  Partials d;
  double u_tx = 0.0;
};

/// Analytic partials when available with u_tx from a fourth-order t-difference
/// of the analytic u_x; otherwise fourth-order FD throughout.
FieldJet field_jet(const SolutionSampler& s, double x, double t);

/// Table rows for S1..S4 transcribed as printed, including their sign
/// conventions. which must be S1..S4.
ConservedVector symmetry_conserved_vector(ConservedKind which, const MultiplierConstants& c,
                                          const ModelParams& p, const SolutionSampler& s,
                                          double x, double t);

/// Independent route: the generic Noether-type formula evaluated with the
/// generator's infinitesimals and L = h R1 + g R2.
ConservedVector derived_conserved_vector(ConservedKind which, const MultiplierConstants& c,
                                         const ModelParams& p, const SolutionSampler& s,
                                         double x, double t);

enum class VectorRoute { Printed, Derived };

/// Second-order central difference of D_x Ux + D_t Ut with step h_step.
double divergence_residual(ConservedKind which, const MultiplierConstants& c,
                           const ModelParams& p, const SolutionSampler& s, double x, double t,
                           double h_step, VectorRoute route = VectorRoute::Printed);

/// divergence_residual over a point set at steps h0, h0/2, ...; values are
/// the max over the points.
ConvergenceStudy divergence_study(ConservedKind which, const MultiplierConstants& c,
                                  const ModelParams& p, const SolutionSampler& s,
                                  const std::vector<std::pair<double, double>>& pts, double h0,
                                  int levels = 4, VectorRoute route = VectorRoute::Printed);

/// M^2 N' - N^2 M' + A M^2 M' at fixed x, with N(t) = rho u from the KINK entry.
double kink_ode_oracle(const KinkParams& k, double A, double x_fixed, double t);

}  // namespace trafficsym
