#include "phasefit/sample.hpp"

#include "phasefit/errors.hpp"

namespace phasefit {

namespace {

void check_pair(const Vector& values, const Vector& weights, const char* what) {
  if (values.size() != weights.size()) {
    throw validation_error(std::string(what) + ": weights length mismatch");
  }
  if (values.size() > 0 && !values.allFinite()) {
    throw validation_error(std::string(what) + ": non-finite value");
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights(i) > 0.0) || !std::isfinite(weights(i))) {
      throw validation_error(std::string(what) + ": weights must be positive and finite");
    }
  }
}

}  // namespace

Sample::Sample(Vector observations, Vector weights, Vector censored,
               Vector censored_weights)
    : obs(std::move(observations)),
      obs_weights(std::move(weights)),
      rcens(std::move(censored)),
      rcens_weights(std::move(censored_weights)) {
  check_pair(obs, obs_weights, "sample observations");
  check_pair(rcens, rcens_weights, "sample censoring points");
}

Sample Sample::exact(Vector observations) {
  Vector w = Vector::Ones(observations.size());
  return Sample(std::move(observations), std::move(w));
}

bool Sample::all_positive() const {
  return (obs.size() == 0 || obs.minCoeff() > 0.0) &&
         (rcens.size() == 0 || rcens.minCoeff() > 0.0);
}

}  // namespace phasefit
