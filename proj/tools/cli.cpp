#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "povm_domain/errors.hpp"
#include "povm_domain/io.hpp"

namespace povm_domain::cli {

namespace {

using io::Json;

struct RunConfig {
  std::vector<std::string> inputs;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
  double k = 1.0;
  std::size_t budget = 10000;
  std::size_t samples = 200;
  std::string grid = "64x128";
  bool tangency = false;
  std::string output;
};

double resolve_tol(const RunConfig& cfg) {
  if (cfg.tol) return *cfg.tol;
  if (const char* env = std::getenv("POVM_DOMAIN_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
      throw InputError("POVM_DOMAIN_TOL must be a positive number");
    }
    return v;
  }
  return kDefaultTol;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream file(cfg.output);
  if (!file) throw InputError("cannot write " + cfg.output);
  file << text << '\n';
}

Json point_json(const ProbabilityPoint& p) { return Json(p.values); }

int validate_povm(const RunConfig& cfg, std::ostream& out) {
  const double tol = resolve_tol(cfg);
  const auto povm = io::povm_from_json(io::read_json_file(cfg.inputs.at(0)));
  const auto report = validate(povm, tol);
  Json effects = Json::array();
  for (const auto& e : report.effects) {
    effects.push_back({{"hermiticity_residual", e.hermiticity_residual},
                       {"min_eigenvalue", e.min_eigenvalue},
                       {"operator_norm", e.operator_norm}});
  }
  Json j{{"ok", report.ok},
         {"d", povm.dim()},
         {"outcomes", povm.size()},
         {"completeness_residual", report.completeness_residual},
         {"effects", std::move(effects)},
         {"violations", report.violations}};
  emit(cfg, io::dump(j), out);
  return report.ok ? kSuccess : kValidationFailed;
}

int map_state(const RunConfig& cfg, std::ostream& out) {
  const double tol = resolve_tol(cfg);
  const auto rho = io::state_from_json(io::read_json_file(cfg.inputs.at(0)), tol);
  const auto povm = io::povm_from_json(io::read_json_file(cfg.inputs.at(1)));
  emit(cfg, io::dump(point_json(probabilities(rho, povm))), out);
  return kSuccess;
}

int domain_dim(const RunConfig& cfg, std::ostream& out) {
  const double tol = resolve_tol(cfg);
  const auto povm = io::povm_from_json(io::read_json_file(cfg.inputs.at(0)));
  if (cfg.samples < 2) throw InputError("--samples must be at least 2");
  const auto map = build_affine_map(povm);
  const auto points = extreme_point_sample(povm, cfg.samples, cfg.seed);
  Json j{{"d", povm.dim()},
         {"outcomes", povm.size()},
         {"parameter_count", parameter_count(povm.dim())},
         {"effective_dimension", numerical_rank(map.matrix, tol)},
         {"sampled_dimension", subspace_dimension(points, tol)},
         {"singular_values", singular_values(map.matrix)},
         {"samples", cfg.samples},
         {"seed", cfg.seed}};
  emit(cfg, io::dump(j), out);
  return kSuccess;
}

int sample_counts(const RunConfig& cfg, std::ostream& out) {
  const double tol = resolve_tol(cfg);
  const auto rho = io::state_from_json(io::read_json_file(cfg.inputs.at(0)), tol);
  const auto povm = io::povm_from_json(io::read_json_file(cfg.inputs.at(1)));
  emit(cfg, io::dump(io::counts_to_json(simulate_counts(rho, povm, cfg.shots, cfg.seed))), out);
  return kSuccess;
}

int estimate(const RunConfig& cfg, std::ostream& out) {
  const double tol = resolve_tol(cfg);
  const auto rec = io::counts_from_json(io::read_json_file(cfg.inputs.at(0)));
  const auto povm = io::povm_from_json(io::read_json_file(cfg.inputs.at(1)));
  if (rec.size() != povm.size()) throw DimensionMismatch("counts and POVM sizes differ");
  const auto box = error_box(rec, cfg.k);
  const auto inversion = linear_inversion(box.center, povm, tol);
  const auto verdict = classify(rec, povm, cfg.k, cfg.budget, cfg.seed, tol);

  const char* names[] = {"feasible", "marginal", "insufficient"};
  Json j{{"verdict", names[static_cast<int>(verdict.kind)]},
         {"frequencies", point_json(box.center)},
         {"halfwidths", box.halfwidths},
         {"k", cfg.k},
         {"inversion",
          {{"matrix", io::matrix_to_json(inversion.matrix)},
           {"min_eigenvalue", inversion.min_eigenvalue},
           {"consistency_residual", inversion.consistency_residual},
           {"effective_dimension", inversion.effective_dimension}}},
         {"required_scale", verdict.required_scale},
         {"evaluations", verdict.evaluations},
         {"estimate", verdict.estimate ? io::state_to_json(*verdict.estimate) : Json(nullptr)},
         {"boundary_point",
          verdict.boundary_point ? point_json(*verdict.boundary_point) : Json(nullptr)}};
  emit(cfg, io::dump(j, 2), out);
  return kSuccess;
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& grid) {
  const auto pos = grid.find('x');
  std::size_t polar = 0;
  std::size_t azimuth = 0;
  try {
    if (pos == std::string::npos) throw std::invalid_argument(grid);
    std::size_t used = 0;
    polar = std::stoul(grid.substr(0, pos), &used);
    if (used != pos) throw std::invalid_argument(grid);
    const std::string rest = grid.substr(pos + 1);
    azimuth = std::stoul(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(grid);
  } catch (const std::logic_error&) {
    throw InputError("--grid must look like 64x128");
  }
  if (polar < 2 || azimuth < 1) throw InputError("--grid needs at least 2 polar and 1 azimuthal step");
  return {polar, azimuth};
}

std::string figure_row(double theta, double phi, const Povm& povm) {
  const BlochVector n{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                      std::cos(theta)};
  const auto p = probabilities(bloch_state(n), povm);
  const auto c = tetrahedron_coordinates(p);
  std::string row = io::format_double(theta) + "," + io::format_double(phi);
  for (double v : p.values) row += "," + io::format_double(v);
  row += "," + io::format_double(c.x) + "," + io::format_double(c.y) + "," + io::format_double(c.z);
  return row;
}

int figure(const RunConfig& cfg, std::ostream& out) {
  const double tol = resolve_tol(cfg);
  const auto povm = io::povm_from_json(io::read_json_file(cfg.inputs.at(0)));
  if (povm.dim() != 2 || povm.size() != 4) throw InputError("figure needs a qubit POVM with 4 effects");
  const auto [polar, azimuth] = parse_grid(cfg.grid);

  std::ostringstream csv;
  csv << "theta,phi,p1,p2,p3,p4,x,y,z\n";
  for (std::size_t i = 0; i < polar; ++i) {
    const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(polar - 1);
    for (std::size_t j = 0; j < azimuth; ++j) {
      const double phi = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(azimuth);
      csv << figure_row(theta, phi, povm) << '\n';
    }
  }
  if (cfg.tangency) {
    // The pure state minimizing p_μ touches the coordinate plane p_μ = 0.
    for (const auto& effect : povm.effects()) {
      const auto eig = hermitian_eigen(effect, tol);
      const DensityMatrix rho(ComplexMatrix::outer(eig.eigenvector(0)).hermitian_part(), tol);
      const auto n = bloch_vector(rho);
      const double theta = std::acos(std::clamp(n.z / n.norm(), -1.0, 1.0));
      double phi = std::atan2(n.y, n.x);
      if (phi < 0) phi += 2 * std::numbers::pi;
      csv << figure_row(theta, phi, povm) << '\n';
    }
  }
  std::string text = csv.str();
  text.pop_back();
  emit(cfg, text, out);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Probability-domain tools for generalized quantum measurements", "povm-domain"};
  app.require_subcommand(1);

  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "Numerical tolerance (default 1e-10 or $POVM_DOMAIN_TOL)")
        ->check(CLI::PositiveNumber);
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", cfg.output, "Write result to this file instead of stdout");
  };

  auto* validate_cmd = app.add_subcommand("validate-povm", "Check positivity and completeness");
  validate_cmd->add_option("povm", cfg.inputs, "POVM JSON file")->required()->expected(1);
  add_tol(validate_cmd);
  add_output(validate_cmd);

  auto* map_cmd = app.add_subcommand("map-state", "Outcome probabilities of a state");
  map_cmd->add_option("files", cfg.inputs, "STATE.json POVM.json")->required()->expected(2);
  add_tol(map_cmd);
  add_output(map_cmd);

  auto* dim_cmd = app.add_subcommand("domain-dim", "Rank of the affine map and sampled dimension");
  dim_cmd->add_option("povm", cfg.inputs, "POVM JSON file")->required()->expected(1);
  dim_cmd->add_option("--samples", cfg.samples, "Number of pure-state samples")->capture_default_str();
  dim_cmd->add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  add_tol(dim_cmd);
  add_output(dim_cmd);

  auto* counts_cmd = app.add_subcommand("sample-counts", "Simulate measurement counts");
  counts_cmd->add_option("files", cfg.inputs, "STATE.json POVM.json")->required()->expected(2);
  counts_cmd->add_option("--shots", cfg.shots, "Number of measured systems")
      ->required()
      ->check(CLI::PositiveNumber);
  counts_cmd->add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  add_tol(counts_cmd);
  add_output(counts_cmd);

  auto* estimate_cmd = app.add_subcommand("estimate", "Invert counts and classify feasibility");
  estimate_cmd->add_option("files", cfg.inputs, "COUNTS.json POVM.json")->required()->expected(2);
  estimate_cmd->add_option("--k", cfg.k, "Error box scale")->capture_default_str()->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--budget", cfg.budget, "Search evaluations")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  estimate_cmd->add_option("--seed", cfg.seed, "Search seed")->capture_default_str();
  add_tol(estimate_cmd);
  add_output(estimate_cmd);

  auto* figure_cmd = app.add_subcommand("figure", "CSV of pure-state images on a Bloch grid");
  figure_cmd->add_option("povm", cfg.inputs, "POVM JSON file")->required()->expected(1);
  figure_cmd->add_option("--grid", cfg.grid, "Polar x azimuthal grid")->capture_default_str();
  figure_cmd->add_flag("--tangency", cfg.tangency, "Append the coordinate-plane tangency rows");
  add_tol(figure_cmd);
  add_output(figure_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInputError;
  }

  try {
    if (validate_cmd->parsed()) return validate_povm(cfg, out);
    if (map_cmd->parsed()) return map_state(cfg, out);
    if (dim_cmd->parsed()) return domain_dim(cfg, out);
    if (counts_cmd->parsed()) return sample_counts(cfg, out);
    if (estimate_cmd->parsed()) return estimate(cfg, out);
    if (figure_cmd->parsed()) return figure(cfg, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
  return kInputError;
}

}  // namespace povm_domain::cli
