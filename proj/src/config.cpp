#include "ptdyn/config.hpp"

#include <fstream>
#include <sstream>

#include "ptdyn/io.hpp"

namespace ptdyn {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("config: expected integer for " + key + ": '" + value + "'");
  return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: expected boolean for " + key + ": '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw ConfigError("config: empty list for " + key);
  return out;
}

Scheme parse_scheme(const std::string& key, const std::string& value) {
  if (value == "pt") return Scheme::PTIM;
  if (value == "sd") return Scheme::SDIM;
  if (value == "dense") return Scheme::RK4Dense;
  throw ConfigError("config: " + key + " must be pt, sd, or dense (got '" + value + "')");
}

}  // namespace

Grid1D ExperimentConfig::make_grid() const { return build_grid(cells, points_per_cell); }

LatticeHamiltonian ExperimentConfig::make_model() const {
  return LatticeHamiltonian(make_grid(), model);
}

OccupationTarget ExperimentConfig::occupation_target() const {
  if (ne && mu) throw ConfigError("config: set either init.ne or init.mu, not both");
  if (ne) return OccupationTarget::electron_count(*ne);
  if (mu) return OccupationTarget::chemical_potential(*mu);
  throw ConfigError("config: one of init.ne or init.mu is required");
}

LowRankInit ExperimentConfig::make_init(const LatticeHamiltonian& m) const {
  return fermi_dirac_init(m, beta, occupation_target(), rank);
}

std::string ExperimentConfig::canonical_string(Scheme run_scheme, double step,
                                               double tf, int every) const {
  std::ostringstream oss;
  oss << "kind=" << (model.kind == ModelKind::NonlinearYukawa ? "yukawa" : "linear")
      << ";L=" << cells << ";m=" << points_per_cell
      << ";beta=" << format_full(beta)
      << ";omega=" << format_full(model.drive_frequency)
      << ";A=" << format_full(model.drive_amplitude)
      << ";kappa=" << format_full(model.kappa) << ";eps0=" << format_full(model.eps0)
      << ";pot=" << (model.effective_potential() == StaticPotential::Harmonic ? "x2" : "cos")
      << ";lap=" << (model.laplacian == LaplacianScheme::Spectral ? "spectral" : "fd2");
  if (ne) oss << ";ne=" << format_full(*ne);
  if (mu) oss << ";mu=" << format_full(*mu);
  oss << ";rank=" << rank << ";scheme=" << scheme_name(run_scheme)
      << ";h=" << format_full(step) << ";T=" << format_full(tf)
      << ";every=" << every << ";tol=" << format_full(solver.tol)
      << ";mix=" << solver.mixing_depth << ";damp=" << format_full(solver.damping)
      << ";maxit=" << solver.max_iterations
      << ";reg=" << format_full(solver.regularization)
      << ";reortho=" << (solver.orthonormalize ? 1 : 0);
  return oss.str();
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (seen.count(key))
      throw ConfigError("config: duplicate key " + key);
    seen[key] = value;

    if (key == "model.kind") {
      if (value == "linear") cfg.model.kind = ModelKind::LinearDrivenLattice;
      else if (value == "yukawa") cfg.model.kind = ModelKind::NonlinearYukawa;
      else throw ConfigError("config: model.kind must be linear or yukawa");
    } else if (key == "model.cells") {
      cfg.cells = parse_int(key, value);
    } else if (key == "model.points_per_cell") {
      cfg.points_per_cell = parse_int(key, value);
    } else if (key == "model.beta") {
      cfg.beta = parse_double(key, value);
    } else if (key == "model.omega") {
      cfg.model.drive_frequency = parse_double(key, value);
    } else if (key == "model.amplitude") {
      cfg.model.drive_amplitude = parse_double(key, value);
    } else if (key == "model.kappa") {
      cfg.model.kappa = parse_double(key, value);
    } else if (key == "model.eps0") {
      cfg.model.eps0 = parse_double(key, value);
    } else if (key == "model.potential") {
      if (value == "cos") cfg.model.potential = StaticPotential::Cosine;
      else if (value == "x2") cfg.model.potential = StaticPotential::Harmonic;
      else throw ConfigError("config: model.potential must be cos or x2");
    } else if (key == "model.laplacian") {
      if (value == "spectral") cfg.model.laplacian = LaplacianScheme::Spectral;
      else if (value == "fd2") cfg.model.laplacian = LaplacianScheme::FiniteDifference2;
      else throw ConfigError("config: model.laplacian must be spectral or fd2");
    } else if (key == "init.ne") {
      cfg.ne = parse_double(key, value);
    } else if (key == "init.mu") {
      cfg.mu = parse_double(key, value);
    } else if (key == "init.rank") {
      cfg.rank = parse_int(key, value);
    } else if (key == "run.scheme") {
      cfg.scheme = parse_scheme(key, value);
    } else if (key == "run.h") {
      cfg.h = parse_double(key, value);
    } else if (key == "run.h_list") {
      cfg.h_list = parse_list(key, value);
    } else if (key == "run.t_final") {
      cfg.t_final = parse_double(key, value);
    } else if (key == "run.sample_every") {
      cfg.sample_every = parse_int(key, value);
    } else if (key == "run.coarse_h") {
      cfg.coarse_h = parse_double(key, value);
    } else if (key == "solver.mixing_depth") {
      cfg.solver.mixing_depth = parse_int(key, value);
    } else if (key == "solver.damping") {
      cfg.solver.damping = parse_double(key, value);
    } else if (key == "solver.tol") {
      cfg.solver.tol = parse_double(key, value);
    } else if (key == "solver.max_iterations") {
      cfg.solver.max_iterations = parse_int(key, value);
    } else if (key == "solver.regularization") {
      cfg.solver.regularization = parse_double(key, value);
    } else if (key == "solver.orthonormalize") {
      cfg.solver.orthonormalize = parse_bool(key, value);
    } else if (key == "reference.scheme") {
      cfg.reference_scheme = parse_scheme(key, value);
    } else if (key == "reference.h") {
      cfg.reference_h = parse_double(key, value);
    } else if (key == "sweep.ne_list") {
      cfg.ne_list = parse_list(key, value);
    } else if (key == "sweep.rank_offset") {
      cfg.rank_offset = parse_int(key, value);
    } else if (key == "output.norm") {
      if (value == "fro") cfg.norm = NormKind::Frobenius;
      else if (value == "spectral") cfg.norm = NormKind::Spectral;
      else throw ConfigError("config: output.norm must be fro or spectral");
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }

  if (cfg.cells < 1 || cfg.points_per_cell < 4)
    throw ConfigError("config: invalid grid (model.cells >= 1, model.points_per_cell >= 4)");
  if (cfg.beta <= 0.0) throw ConfigError("config: model.beta must be > 0");
  if (cfg.h <= 0.0) throw ConfigError("config: run.h must be > 0");
  if (cfg.t_final < 0.0) throw ConfigError("config: run.t_final must be >= 0");
  if (cfg.sample_every < 1) throw ConfigError("config: run.sample_every must be >= 1");
  for (std::size_t i = 1; i < cfg.h_list.size(); ++i)
    if (cfg.h_list[i] >= cfg.h_list[i - 1])
      throw ConfigError("config: run.h_list must be strictly decreasing");
  return cfg;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace ptdyn
