#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "torus_hypo/diophantine.hpp"
#include "torus_hypo/fourier_field.hpp"
#include "torus_hypo/gevrey.hpp"
#include "torus_hypo/real_constant.hpp"
#include "torus_hypo/system.hpp"
#include "torus_hypo/trig_poly.hpp"

namespace torus_hypo::singular {

using diophantine::LiouvilleWitness;
using diophantine::RealConstant;

enum class Construction { Prop51, Prop52, Product, RationalJ, ExpLiouvilleJ };
std::string to_string(Construction c);

/// Peak of (t, r) -> int_{t-r}^t b, or of the mirror form min int_t^{t+r} b.
struct LaplaceProfile {
  double B0 = 0;
  double t0 = 0;
  double r0 = 0;
  /// psi''(r_0) with psi(r) = Im H(t_0, r) - B_0.
  double psi_curvature = 0;
  bool mirror = false;
};

LaplaceProfile locate_laplace_profile(const TrigPoly& b, double a0, bool mirror);

/// u^(t, xi) = e^{-i xi a_0 t} e^{xi (B(t) - B(t_0))}.
class Prop51Kernel {
 public:
  Prop51Kernel(Rational a0, const TrigPoly& b);
  Complex value(double t, double xi) const;
  double t0() const { return t0_; }
  const Rational& a0() const { return a0_; }
  nlohmann::json describe() const;

 private:
  Rational a0_;
  TrigPoly b_;
  TrigPoly B_;
  double t0_ = 0;
  double B_t0_ = 0;
};

struct Prop52Options {
  /// Cutoff half-width; default min(0.5, r_0/2, (2 pi - r_0)/2).
  std::optional<double> delta;
};

/// Singular coefficients built from a Gevrey cutoff placed at t_0 - r_0.
class Prop52Kernel {
 public:
  Prop52Kernel(double a0, const TrigPoly& b, double s, const Prop52Options& options = {});

  Complex u_hat(double t, double xi) const;
  Complex f_hat(double t, double xi) const;
  /// ln sup_t |f^(t, xi)|.
  double log_f_sup(double xi) const;

  const LaplaceProfile& profile() const { return profile_; }
  double t0() const { return profile_.t0; }
  double delta() const { return delta_; }
  double s() const { return s_; }
  double a0() const { return mirror_ ? -a0w_ : a0w_; }
  /// sqrt(pi/A) erf(delta sqrt(A)/2) with A = sup |psi''|/2 on the window.
  double proof_constant() const;
  nlohmann::json describe() const;

 private:
  Complex u_work(double t, double xi) const;
  Complex g_work(double y, double xi) const;

  bool mirror_ = false;
  double s_ = 2;
  double a0w_ = 0;
  double b0w_ = 0;
  TrigPoly bw_;
  TrigPoly Bt_;
  LaplaceProfile work_;
  LaplaceProfile profile_;
  double center_ = 0;
  double delta_ = 0.5;
  gevrey::GevreyCutoff cutoff_;
};

struct TubeFactor {
  std::size_t tube = 0;
  Construction kind = Construction::Prop51;
  std::shared_ptr<const Prop51Kernel> p51;
  std::shared_ptr<const Prop52Kernel> p52;
  Complex value(double t, double xi) const;
  double t0() const;
};

struct LowerBoundRow {
  std::int64_t xi = 0;
  /// |u^(t_0, xi)|.
  double value = 0;
  /// Certified lower bound assembled from the per-tube bounds.
  double bound = 0;
};

struct SingularSolution {
  Construction construction = Construction::Prop51;
  std::optional<Construction> base;
  std::size_t dims = 1;
  BigInt q = 1;
  std::vector<std::int64_t> ladder;
  std::vector<TubeFactor> factors;
  /// Real tubes carrying pure phases.
  std::vector<std::size_t> J;
  /// e^{-i xi a_j0 t_j} for RationalJ.
  std::vector<Rational> rates;
  /// e^{i p_k^{(j)} t_j} for ExpLiouvilleJ, one vector per ladder entry.
  std::vector<std::vector<BigInt>> phases;
  /// Number of Prop 5.2 factors.
  std::size_t m = 0;
  std::vector<double> t0;
  std::vector<LowerBoundRow> lower_bounds;
  nlohmann::json certificates = nlohmann::json::object();

  std::optional<std::size_t> index_of(std::int64_t xi) const;
  Complex value(std::span<const double> t, std::size_t ladder_index) const;
  /// Dense blocks for the first `count` ladder entries on the given grid.
  FourierField materialize(std::size_t count, int grid) const;
  /// Closed-form L_j u on the same blocks: f^ replaces the factor on tube j, zero for unit-modulus factors.
  FourierField materialize_rhs(std::size_t j, std::size_t count, int grid) const;
};

struct BuildOptions {
  double xi_max = 4096;
  /// Power-law and decay fits start here.
  double fit_min = 64;
  Prop52Options prop52;
  /// Explicit ladder inside q N; empty means q k up to xi_max.
  std::vector<std::int64_t> ladder;
};

SingularSolution build_prop51(const Rational& a0, const TrigPoly& b, std::int64_t k_max, const BuildOptions& options = {});
/// Ladder q k up to xi_max unless options.ladder is set.
SingularSolution build_prop52(const RealConstant& a0, const TrigPoly& b, double s, const BuildOptions& options = {},
                              std::int64_t q = 1);
/// u^(t, q k) = prod_j u^_j(t_j, q k); per_tube[i] becomes the factor on tubes[i].
SingularSolution build_product(std::size_t dims, const std::vector<std::size_t>& tubes,
                               const std::vector<SingularSolution>& per_tube, const BuildOptions& options = {});
SingularSolution build_rational_J(const system::SystemSpec& spec, const std::vector<std::size_t>& J,
                                  const SingularSolution& v, const BigInt& q, const BuildOptions& options = {});
SingularSolution build_expliouville_J(const system::SystemSpec& spec, const std::vector<std::size_t>& J,
                                      const LiouvilleWitness& witness, const SingularSolution& v, const BigInt& q,
                                      double s, const BuildOptions& options = {});

/// Dispatches on the failure witness of decide(); refuses hypoelliptic systems.
SingularSolution build_for_spec(const system::SystemSpec& spec, const system::Order& order,
                                const BuildOptions& options = {});

/// Number of leading ladder entries (at most `count`) whose phase frequencies fit a dense block.
std::size_t dense_prefix(const SingularSolution& u, std::size_t count);

/// Max norm of L_j u - materialize_rhs(j) on the first `count` ladder entries; plain L_j u on ExpLiouvilleJ phase tubes.
double operator_residual(const system::SystemSpec& spec, std::size_t j, const SingularSolution& u,
                         std::size_t count, int grid);

nlohmann::json to_json(const LaplaceProfile& p);
nlohmann::json to_json(const SingularSolution& u);

}  // namespace torus_hypo::singular
