#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torus_hypo/fourier_field.hpp"
#include "torus_hypo/gevrey.hpp"
#include "torus_hypo/system.hpp"

namespace torus_hypo::solver {

/// Per-tube right-hand sides; nullopt where f_j is not supplied.
using RhsList = std::vector<std::optional<FourierField>>;

struct SolverOptions {
  int min_nodes = 1024;
  /// Decimal digits for rational approximants of the averages in the division solver.
  int precision = 60;
};

/// Solves L_j u = f through the integral formulas; b_j must not change sign.
FourierField solve_single_tube(std::size_t j, const system::SystemSpec& spec, const FourierField& f,
                               const SolverOptions& options = {});

struct DivisionResult {
  FourierField u;
  /// The (0,0) mode was fixed to mean zero rather than determined by the data.
  bool mean_fixed = false;
  std::vector<std::size_t> J;
};

/// u^ = -i (xi a_M0 + eta_M)^{-1} f^_M with M maximizing |xi a_j0 + eta_j| over J.
DivisionResult solve_by_division(const system::SystemSpec& spec, const RhsList& f_list,
                                 const SolverOptions& options = {});

/// L_j u applied spectrally on each block.
FourierField apply_operator(const system::SystemSpec& spec, std::size_t j, const FourierField& u);

/// max norm of L_j u - f_j per tube (0 where f_j is absent and L_j u = 0 is not asked).
std::vector<double> residual(const system::SystemSpec& spec, const FourierField& u, const RhsList& f_list);

/// estimate_decay on sup_t |u^(t, xi)|.
gevrey::GevreyWitness decay_report(const FourierField& u, double s, const gevrey::DecayOptions& options = {});
std::vector<gevrey::SpectrumSample> sup_spectrum(const FourierField& u);

struct PrefactorCheck {
  double value = 0;
  double bound = 0;
};

/// |1 - e^{-i 2 pi xi c0}|^{-1} against (1 - e^{2 pi b0})^{-1} for b0 < 0, xi >= 1.
PrefactorCheck prefactor_bound(Complex c0, double xi);

nlohmann::json residual_json(const std::vector<double>& r);

}  // namespace torus_hypo::solver
