#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "phasefit/iph.hpp"
#include "phasefit/ph.hpp"
#include "phasefit/sample.hpp"

namespace phasefit {

struct FitMeta {
  double loglik = 0.0;
  int steps = 0;
  std::uint64_t seed = 0;
};

// On-disk model representation. Numbers are rendered with 17 significant
// digits so that serialize/deserialize round-trips are bit-stable.
struct ModelDocument {
  int schema_version = 1;
  std::variant<PhaseType, InhomPhaseType> model;
  std::optional<FitMeta> fit_meta;
};

std::string to_json(const ModelDocument& doc);
ModelDocument model_document_from_json(const std::string& text);

void save_model(const ModelDocument& doc, const std::string& path);
ModelDocument load_model(const std::string& path);

// CSV dataset with a required header; columns `value[,weight][,censored]`.
// Missing weights default to 1; censored = 1 marks right-censoring.
Sample read_dataset_csv(const std::string& path);

void write_variates_csv(const std::string& path,
                        const std::vector<double>& values);

// (value, weight) rows for weighted fitting.
void write_weighted_csv(const std::string& path,
                        const std::vector<std::pair<double, double>>& rows);

enum class NamedDensity { truncnorm, uniform };

struct DiscretizeSpec {
  NamedDensity density = NamedDensity::truncnorm;
  double mu = 0.0;
  double sigma = 1.0;
  double lower = 0.0;                                    // truncation bounds
  double upper = std::numeric_limits<double>::infinity();
  double grid_start = 0.0;
  double grid_step = 0.0;
  double grid_end = 0.0;
};

// Grid points start, start+step, ... <= end, each weighted by
// step * density(point).
std::vector<std::pair<double, double>> discretize(const DiscretizeSpec& spec);

}  // namespace phasefit
