#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptdyn/anderson.hpp"
#include "ptdyn/integrators.hpp"
#include "ptdyn/model.hpp"
#include "ptdyn/types.hpp"

namespace ptdyn {

/// Flat key=value configuration with dotted section keys. '#' starts a
/// comment, blank lines are skipped, unknown keys are rejected.
struct ExperimentConfig {
  // model.*
  int cells = 4;
  int points_per_cell = 64;
  double beta = 1.453;
  ModelParams model;

  // init.*: exactly one of ne / mu
  std::optional<double> ne;
  std::optional<double> mu;
  int rank = 64;

  // run.*
  Scheme scheme = Scheme::PTIM;
  double h = 0.01;
  std::vector<double> h_list;  // sweep-h
  double t_final = 1.0;
  int sample_every = 1;
  double coarse_h = 0.02;  // dipole comparison step

  // solver.*
  SolverConfig solver;

  // reference.*
  std::optional<Scheme> reference_scheme;
  std::optional<double> reference_h;

  // sweep.*
  std::vector<double> ne_list;
  int rank_offset = 20;  // N = N_e + rank_offset in the N_e sweep

  // output.*
  NormKind norm = NormKind::Frobenius;

  Grid1D make_grid() const;
  LatticeHamiltonian make_model() const;
  OccupationTarget occupation_target() const;
  LowRankInit make_init(const LatticeHamiltonian& m) const;

  /// Canonical key=value rendering of everything that determines a
  /// trajectory; used for content-hash cache keys.
  std::string canonical_string(Scheme scheme, double step, double t_final,
                               int sample_every) const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace ptdyn
