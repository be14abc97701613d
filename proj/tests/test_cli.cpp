#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "phasefit/model_io.hpp"
#include "phasefit/sampling.hpp"
#include "support/oracles.hpp"

using namespace phasefit;

namespace {

namespace fs = std::filesystem;

const std::string kCli = PHASEFIT_CLI_PATH;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "phasefit_cli_tests";
  fs::create_directories(dir);
  return dir;
}

RunResult run(const std::string& args) {
  const fs::path out_file = work_dir() / "stdout.txt";
  const std::string command =
      kCli + " " + args + " > " + out_file.string() + " 2>&1";
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  result.out = ss.str();
  return result;
}

std::string file_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

double last_field(const std::string& line) {
  const auto pos = line.find_last_of(' ');
  return std::stod(line.substr(pos + 1));
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

// An exponential(2) model document written through the library.
fs::path exponential_model() {
  Vector alpha(1);
  alpha << 1.0;
  Matrix s(1, 1);
  s << -2.0;
  const fs::path path = work_dir() / "exp2.json";
  save_model(ModelDocument{1, PhaseType(alpha, s), std::nullopt}, path.string());
  return path;
}

}  // namespace

TEST_CASE("eval prints twelve significant digits of the density") {
  const auto model = exponential_model();
  const RunResult r = run("eval " + model.string() + " --fn dens --at 1");
  CHECK(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 1);
  CHECK(last_field(lines[0]) == doctest::Approx(0.270670566473).epsilon(1e-12));
}

TEST_CASE("quantile and cdf are mutually inverse through the CLI") {
  const auto model = exponential_model();
  const RunResult q = run("eval " + model.string() + " --fn quantile --at 0.5");
  REQUIRE(q.exit_code == 0);
  const double median = last_field(lines_of(q.out)[0]);
  char median_text[40];
  std::snprintf(median_text, sizeof(median_text), "%.17g", median);
  const RunResult c = run("eval " + model.string() + " --fn cdf --at " +
                          std::string(median_text));
  REQUIRE(c.exit_code == 0);
  CHECK(last_field(lines_of(c.out)[0]) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("moment evaluation matches the library") {
  const auto model = exponential_model();
  const RunResult r = run("eval " + model.string() + " --fn moment --at 1 2");
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(last_field(lines[0]) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(last_field(lines[1]) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sim is deterministic in the seed") {
  const auto model = exponential_model();
  const fs::path a = work_dir() / "draws_a.csv";
  const fs::path b = work_dir() / "draws_b.csv";
  REQUIRE(run("sim " + model.string() + " --n 5 --seed 7 --out " + a.string())
              .exit_code == 0);
  REQUIRE(run("sim " + model.string() + " --n 5 --seed 7 --out " + b.string())
              .exit_code == 0);
  const std::string text = file_text(a);
  CHECK(text == file_text(b));
  CHECK(lines_of(text).size() == 6);  // header + five draws
  CHECK(lines_of(text)[0] == "value");
}

TEST_CASE("simulated mean stays within four standard errors of the moment") {
  const auto model = exponential_model();
  const fs::path out = work_dir() / "draws_mean.csv";
  REQUIRE(run("sim " + model.string() + " --n 100000 --seed 3 --out " +
              out.string())
              .exit_code == 0);
  const auto lines = lines_of(file_text(out));
  std::vector<double> draws;
  for (std::size_t i = 1; i < lines.size(); ++i) draws.push_back(std::stod(lines[i]));
  const double se = oracles::stddev(draws) / std::sqrt(1e5);
  CHECK(std::abs(oracles::mean(draws) - 0.5) <= 4.0 * se);
}

TEST_CASE("fit writes a model and prints a parseable trace") {
  const fs::path data = work_dir() / "fit_data.csv";
  {
    Vector alpha(1);
    alpha << 1.0;
    Matrix s(1, 1);
    s << -1.5;
    Rng rng(5);
    const auto draws = simulate(PhaseType(alpha, s), 400, rng);
    std::ostringstream csv;
    csv << "value\n";
    for (double v : draws) csv << v << "\n";
    write_text(data, csv.str());
  }
  const fs::path model = work_dir() / "fitted.json";
  const RunResult r =
      run("fit " + data.string() +
          " --structure general --dimension 1 --steps 60 --print-every 20 "
          "--seed 2 --out " + model.string());
  REQUIRE(r.exit_code == 0);

  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].rfind("iter=20 loglik=", 0) == 0);
  CHECK(lines[2].rfind("iter=60 loglik=", 0) == 0);

  const ModelDocument doc = load_model(model.string());
  const PhaseType& fitted = std::get<PhaseType>(doc.model);
  CHECK(fitted.S()(0, 0) == doctest::Approx(-1.5).epsilon(0.15));
  REQUIRE(doc.fit_meta.has_value());
  CHECK(doc.fit_meta->steps == 60);

  SUBCASE("warm start from the fitted model keeps improving the likelihood") {
    const fs::path model2 = work_dir() / "fitted2.json";
    const RunResult r2 = run("fit " + data.string() + " --init " +
                             model.string() + " --steps 40 --out " + model2.string());
    REQUIRE(r2.exit_code == 0);
    const ModelDocument doc2 = load_model(model2.string());
    CHECK(doc2.fit_meta->loglik >= doc.fit_meta->loglik - 1e-9);
  }

  SUBCASE("a fixed Runge-Kutta step length is accepted") {
    const fs::path model3 = work_dir() / "fitted3.json";
    const RunResult r3 =
        run("fit " + data.string() + " --init " + model.string() +
            " --steps 5 --rk-step 0.02 --out " + model3.string());
    REQUIRE(r3.exit_code == 0);
    CHECK(fs::exists(model3));
  }
}

TEST_CASE("censored pareto fits report the tail index") {
  const fs::path data = work_dir() / "pareto_data.csv";
  {
    Vector one(1);
    one << 1.0;
    Matrix s(1, 1);
    s << -1.0;
    Vector params(1);
    params << 1.0;
    const InhomPhaseType truth(PhaseType(one, s),
                               Transform(TransformFamily::pareto, params));
    Rng rng(21);
    const auto draws = simulate(truth, 300, rng);
    std::ostringstream csv;
    csv << "value,censored\n";
    for (std::size_t i = 0; i < draws.size(); ++i) {
      csv << draws[i] << "," << (i % 50 == 0 ? 1 : 0) << "\n";
    }
    write_text(data, csv.str());
  }
  const fs::path model = work_dir() / "pareto_model.json";
  const RunResult r = run("fit " + data.string() +
                          " --structure general --dimension 1 --gfun pareto "
                          "--steps 80 --print-every 40 --seed 4 --out " +
                          model.string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("tail_index=") != std::string::npos);
  const ModelDocument doc = load_model(model.string());
  CHECK(std::get<InhomPhaseType>(doc.model).transform().family() ==
        TransformFamily::pareto);
}

TEST_CASE("discretize reproduces the documented grid") {
  const fs::path out = work_dir() / "grid.csv";
  const RunResult r = run(
      "discretize --density truncnorm --mu 1 --sigma 1 --lower 0 "
      "--grid-start 0.01 --grid-step 0.05 --grid-end 5 --out " + out.string());
  REQUIRE(r.exit_code == 0);
  const auto lines = lines_of(file_text(out));
  REQUIRE(lines.size() == 101);  // header + 100 rows
  CHECK(lines[0] == "value,weight");
  CHECK(lines[1].rfind("0.01,", 0) == 0);

  // round trip into a fit: weighted data parses
  const Sample sample = read_dataset_csv(out.string());
  CHECK(sample.obs.size() == 100);
}

TEST_CASE("gev models route through the dedicated sampler") {
  Vector alpha(1);
  alpha << 1.0;
  Matrix s(1, 1);
  s << -1.0;
  Vector params(3);
  params << 0.0, 1.0, 0.5;
  const InhomPhaseType model(PhaseType(alpha, s),
                             Transform(TransformFamily::gev, params));
  const fs::path path = work_dir() / "gev.json";
  save_model(ModelDocument{1, model, std::nullopt}, path.string());

  const fs::path out = work_dir() / "gev_draws.csv";
  REQUIRE(run("sim " + path.string() + " --n 20000 --seed 11 --out " +
              out.string())
              .exit_code == 0);
  const auto lines = lines_of(file_text(out));
  std::vector<double> draws;
  for (std::size_t i = 1; i < lines.size(); ++i) draws.push_back(std::stod(lines[i]));
  const double d =
      oracles::ks_distance(draws, [&](double x) { return cdf(model, x); });
  CHECK(d <= 0.02);
}

TEST_CASE("exit code 2 on unparseable input") {
  CHECK(run("fit /nonexistent/file.csv --structure general --dimension 2 "
            "--steps 1")
            .exit_code == 2);

  const fs::path garbled = work_dir() / "garbled.csv";
  write_text(garbled, "value\nnot_a_number\n");
  CHECK(run("fit " + garbled.string() +
            " --structure general --dimension 1 --steps 1")
            .exit_code == 2);
}

TEST_CASE("exit code 3 on an invalid model") {
  const fs::path bad = work_dir() / "bad_model.json";
  write_text(bad,
             R"({"schema_version":1,"kind":"ph","alpha":[0.5,0.6],"S":[[-1,0],[0,-1]]})");
  CHECK(run("eval " + bad.string() + " --fn dens --at 1").exit_code == 3);
}

TEST_CASE("exit code 4 on a numeric failure") {
  // A generalized-Erlang matrix with equal rates is defective, so the
  // fractional moment's eigendecomposition route must fail.
  const fs::path defective = work_dir() / "defective.json";
  write_text(defective,
             R"({"schema_version":1,"kind":"ph","alpha":[1,0],"S":[[-1,1],[0,-1]]})");
  CHECK(run("eval " + defective.string() + " --fn moment --at 0.5").exit_code == 4);
}
