#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "phasefit/em_fit.hpp"
#include "phasefit/errors.hpp"
#include "phasefit/model_io.hpp"
#include "phasefit/sampling.hpp"

namespace {

using namespace phasefit;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitInvalidModel = 3;
constexpr int kExitNumeric = 4;

Vector default_transform_params(TransformFamily family) {
  switch (family) {
    case TransformFamily::lognormal:
      return Vector::Constant(1, 2.0);
    case TransformFamily::loglogistic:
      return Vector::Ones(2);
    case TransformFamily::gev: {
      Vector p(3);
      p << 0.0, 1.0, 0.0;
      return p;
    }
    default:
      return Vector::Ones(1);
  }
}

struct FitArgs {
  std::string data_path;
  std::string structure;
  int dimension = 0;
  std::string gfun;
  std::vector<double> gfun_params;
  int steps = 1000;
  std::optional<double> rk_step;
  int print_every = 100;
  int beta_depth = 10;
  std::uint64_t seed = 1;
  std::string init_path;
  std::string out_path;
};

int run_fit(const FitArgs& args) {
  const bool by_structure = !args.structure.empty();
  if (by_structure == !args.init_path.empty()) {
    std::cerr << "fit: give exactly one of --structure/--dimension or --init\n";
    return kExitParse;
  }
  if (by_structure && args.dimension < 1) {
    std::cerr << "fit: --structure requires --dimension >= 1\n";
    return kExitParse;
  }
  if (!args.gfun.empty() && !by_structure) {
    std::cerr << "fit: --gfun cannot be combined with --init\n";
    return kExitParse;
  }

  const Sample sample = read_dataset_csv(args.data_path);

  std::variant<PhaseType, InhomPhaseType> init = [&] {
    if (by_structure) {
      PhaseType base = PhaseType::random(structure_from_string(args.structure),
                                         args.dimension, args.seed);
      if (args.gfun.empty()) {
        return std::variant<PhaseType, InhomPhaseType>(std::move(base));
      }
      const TransformFamily family = family_from_string(args.gfun);
      Vector params = default_transform_params(family);
      if (!args.gfun_params.empty()) {
        params = Eigen::Map<const Vector>(
            args.gfun_params.data(),
            static_cast<Eigen::Index>(args.gfun_params.size()));
      }
      return std::variant<PhaseType, InhomPhaseType>(
          InhomPhaseType(std::move(base), Transform(family, params)));
    }
    return load_model(args.init_path).model;
  }();

  EmOptions options;
  options.steps = args.steps;
  options.rk_step = args.rk_step;
  options.print_every = args.print_every;
  options.beta_depth = args.beta_depth;
  options.on_trace = [](int step, double ll) {
    std::printf("iter=%d loglik=%.12g\n", step, ll);
  };

  const FitReport report =
      std::holds_alternative<PhaseType>(init)
          ? fit(std::get<PhaseType>(init), sample, options)
          : fit(std::get<InhomPhaseType>(init), sample, options);

  const ModelDocument doc{
      1, report.model,
      FitMeta{report.loglik_trace.back(), report.iterations_run, args.seed}};
  if (!args.out_path.empty()) save_model(doc, args.out_path);

  if (std::holds_alternative<InhomPhaseType>(report.model)) {
    const InhomPhaseType& m = std::get<InhomPhaseType>(report.model);
    if (m.transform().family() == TransformFamily::pareto) {
      std::printf("tail_index=%.12g\n", tail_index(m));
    }
  }
  return kExitOk;
}

struct EvalArgs {
  std::string model_path;
  std::string fn;
  std::vector<double> at;
};

int run_eval(const EvalArgs& args) {
  const ModelDocument doc = load_model(args.model_path);
  const bool is_iph = std::holds_alternative<InhomPhaseType>(doc.model);

  auto evaluate = [&](double x) {
    if (args.fn == "dens")
      return is_iph ? dens(std::get<InhomPhaseType>(doc.model), x)
                    : dens(std::get<PhaseType>(doc.model), x);
    if (args.fn == "cdf")
      return is_iph ? cdf(std::get<InhomPhaseType>(doc.model), x)
                    : cdf(std::get<PhaseType>(doc.model), x);
    if (args.fn == "quantile")
      return is_iph ? quantile(std::get<InhomPhaseType>(doc.model), x)
                    : quantile(std::get<PhaseType>(doc.model), x);
    if (args.fn == "hazard")
      return is_iph ? hazard(std::get<InhomPhaseType>(doc.model), x)
                    : hazard(std::get<PhaseType>(doc.model), x);
    if (args.fn == "moment")
      return is_iph ? moment(std::get<InhomPhaseType>(doc.model), x)
                    : moment(std::get<PhaseType>(doc.model), x);
    throw validation_error("eval: unknown function '" + args.fn + "'");
  };

  for (double x : args.at) {
    std::printf("%.15g %.15g\n", x, evaluate(x));
  }
  return kExitOk;
}

struct SimArgs {
  std::string model_path;
  std::size_t n = 1;
  std::uint64_t seed = 1;
  std::string out_path;
};

int run_sim(const SimArgs& args) {
  const ModelDocument doc = load_model(args.model_path);
  Rng rng(args.seed);
  const std::vector<double> draws =
      std::holds_alternative<InhomPhaseType>(doc.model)
          ? simulate(std::get<InhomPhaseType>(doc.model), args.n, rng)
          : simulate(std::get<PhaseType>(doc.model), args.n, rng);
  if (args.out_path.empty()) {
    for (double v : draws) std::printf("%.17g\n", v);
  } else {
    write_variates_csv(args.out_path, draws);
  }
  return kExitOk;
}

struct DiscretizeArgs {
  std::string density = "truncnorm";
  double mu = 0.0;
  double sigma = 1.0;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  double grid_start = 0.0;
  double grid_step = 0.0;
  double grid_end = 0.0;
  std::string out_path;
};

int run_discretize(const DiscretizeArgs& args) {
  DiscretizeSpec spec;
  if (args.density == "truncnorm") {
    spec.density = NamedDensity::truncnorm;
  } else if (args.density == "uniform") {
    spec.density = NamedDensity::uniform;
  } else {
    throw validation_error("discretize: unknown density '" + args.density + "'");
  }
  spec.mu = args.mu;
  spec.sigma = args.sigma;
  spec.lower = args.lower;
  spec.upper = args.upper;
  spec.grid_start = args.grid_start;
  spec.grid_step = args.grid_step;
  spec.grid_end = args.grid_end;

  const auto rows = discretize(spec);
  if (args.out_path.empty()) {
    std::printf("value,weight\n");
    for (const auto& [value, weight] : rows) {
      std::printf("%.17g,%.17g\n", value, weight);
    }
  } else {
    write_weighted_csv(args.out_path, rows);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-type and inhomogeneous phase-type distributions: "
               "fitting, evaluation, simulation"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "Fit a model to a CSV dataset via the EM algorithm");
  fit_cmd->add_option("data", fit_args.data_path, "dataset CSV path")->required();
  fit_cmd->add_option("--structure", fit_args.structure,
                      "general|hyperexponential|gerlang|coxian|gcoxian");
  fit_cmd->add_option("--dimension", fit_args.dimension, "number of phases");
  fit_cmd->add_option("--gfun", fit_args.gfun,
                      "pareto|weibull|lognormal|loglogistic|gompertz|gev");
  fit_cmd->add_option("--gfun-params", fit_args.gfun_params,
                      "initial transform parameters");
  fit_cmd->add_option("--steps", fit_args.steps, "EM iterations");
  double rk_step_value = 0.0;
  CLI::Option* rk_opt =
      fit_cmd->add_option("--rk-step", rk_step_value, "fixed RK4 step length");
  fit_cmd->add_option("--print-every", fit_args.print_every,
                      "log-likelihood print interval");
  fit_cmd->add_option("--beta-depth", fit_args.beta_depth,
                      "inner optimizer iterations per EM step");
  fit_cmd->add_option("--seed", fit_args.seed, "seed for the random initial model");
  fit_cmd->add_option("--init", fit_args.init_path, "initial model JSON");
  fit_cmd->add_option("--out", fit_args.out_path, "output model JSON");

  EvalArgs eval_args;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "Evaluate a functional of a stored model");
  eval_cmd->add_option("model", eval_args.model_path, "model JSON path")->required();
  eval_cmd->add_option("--fn", eval_args.fn, "dens|cdf|quantile|hazard|moment")
      ->required();
  eval_cmd->add_option("--at", eval_args.at, "evaluation points")->required();

  SimArgs sim_args;
  CLI::App* sim_cmd = app.add_subcommand("sim", "Draw random variates");
  sim_cmd->add_option("model", sim_args.model_path, "model JSON path")->required();
  sim_cmd->add_option("--n", sim_args.n, "number of draws")->required();
  sim_cmd->add_option("--seed", sim_args.seed, "random seed");
  sim_cmd->add_option("--out", sim_args.out_path, "output CSV path");

  DiscretizeArgs disc_args;
  CLI::App* disc_cmd = app.add_subcommand(
      "discretize", "Discretize a named density into a weighted dataset");
  disc_cmd->add_option("--density", disc_args.density, "truncnorm|uniform");
  disc_cmd->add_option("--mu", disc_args.mu, "mean (truncnorm)");
  disc_cmd->add_option("--sigma", disc_args.sigma, "standard deviation (truncnorm)");
  disc_cmd->add_option("--lower", disc_args.lower, "lower truncation bound");
  disc_cmd->add_option("--upper", disc_args.upper, "upper truncation bound");
  disc_cmd->add_option("--grid-start", disc_args.grid_start, "first grid point")
      ->required();
  disc_cmd->add_option("--grid-step", disc_args.grid_step, "grid spacing")
      ->required();
  disc_cmd->add_option("--grid-end", disc_args.grid_end, "last grid point")
      ->required();
  disc_cmd->add_option("--out", disc_args.out_path, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitParse;
  }

  try {
    if (fit_cmd->parsed()) {
      if (*rk_opt) fit_args.rk_step = rk_step_value;
      return run_fit(fit_args);
    }
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (sim_cmd->parsed()) return run_sim(sim_args);
    if (disc_cmd->parsed()) return run_discretize(disc_args);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidModel;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidModel;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::overflow_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
