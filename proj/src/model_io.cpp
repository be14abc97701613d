#include "phasefit/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "phasefit/errors.hpp"

namespace phasefit {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_vector(std::string& out, const Vector& v) {
  out += '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += fmt17(v(i));
  }
  out += ']';
}

void append_matrix(std::string& out, const Matrix& m) {
  out += '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i > 0) out += ',';
    out += '[';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += fmt17(m(i, j));
    }
    out += ']';
  }
  out += ']';
}

Vector vector_from_json(const nlohmann::json& j) {
  Vector v(j.size());
  Eigen::Index i = 0;
  for (const auto& entry : j) v(i++) = entry.get<double>();
  return v;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) throw parse_error("model: empty matrix");
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j.at(i);
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw parse_error("model: ragged matrix rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row.at(k).get<double>();
  }
  return m;
}

}  // namespace

std::string to_json(const ModelDocument& doc) {
  const bool is_iph = std::holds_alternative<InhomPhaseType>(doc.model);
  const PhaseType& base =
      is_iph ? std::get<InhomPhaseType>(doc.model).base()
             : std::get<PhaseType>(doc.model);

  std::string out = "{\n";
  out += "  \"schema_version\": " + std::to_string(doc.schema_version) + ",\n";
  out += std::string("  \"kind\": \"") + (is_iph ? "iph" : "ph") + "\",\n";
  out += "  \"alpha\": ";
  append_vector(out, base.alpha());
  out += ",\n  \"S\": ";
  append_matrix(out, base.S());
  if (is_iph) {
    const Transform& t = std::get<InhomPhaseType>(doc.model).transform();
    out += ",\n  \"transform\": {\"name\": \"" + to_string(t.family()) +
           "\", \"params\": ";
    append_vector(out, t.params());
    out += "}";
  }
  if (doc.fit_meta) {
    out += ",\n  \"fit_meta\": {\"loglik\": " + fmt17(doc.fit_meta->loglik) +
           ", \"steps\": " + std::to_string(doc.fit_meta->steps) +
           ", \"seed\": " + std::to_string(doc.fit_meta->seed) + "}";
  }
  out += "\n}\n";
  return out;
}

ModelDocument model_document_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    const int version = j.at("schema_version").get<int>();
    const std::string kind = j.at("kind").get<std::string>();
    PhaseType base(vector_from_json(j.at("alpha")), matrix_from_json(j.at("S")));

    std::variant<PhaseType, InhomPhaseType> model = std::move(base);
    if (kind == "iph") {
      const auto& jt = j.at("transform");
      Transform transform(family_from_string(jt.at("name").get<std::string>()),
                          vector_from_json(jt.at("params")));
      model = InhomPhaseType(std::get<PhaseType>(std::move(model)),
                             std::move(transform));
    } else if (kind != "ph") {
      throw parse_error("model: unknown kind '" + kind + "'");
    }

    std::optional<FitMeta> fit_meta;
    if (j.contains("fit_meta")) {
      FitMeta meta;
      meta.loglik = j["fit_meta"].value("loglik", 0.0);
      meta.steps = j["fit_meta"].value("steps", 0);
      meta.seed = j["fit_meta"].value("seed", std::uint64_t{0});
      fit_meta = meta;
    }
    return ModelDocument{version, std::move(model), fit_meta};
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("model: missing or malformed field: ") + e.what());
  }
}

void save_model(const ModelDocument& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open for writing: " + path);
  out << to_json(doc);
}

ModelDocument load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open model file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_document_from_json(buffer.str());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos
                         ? std::string()
                         : field.substr(begin, end - begin + 1));
  }
  return fields;
}

double parse_double(const std::string& text, int line_no) {
  try {
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw parse_error("dataset: cannot parse number '" + text + "' on line " +
                      std::to_string(line_no));
  }
}

}  // namespace

Sample read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open dataset: " + path);

  std::string line;
  if (!std::getline(in, line)) throw parse_error("dataset: empty file: " + path);
  const std::vector<std::string> header = split_csv_line(line);
  int value_col = -1, weight_col = -1, censored_col = -1;
  for (int i = 0; i < static_cast<int>(header.size()); ++i) {
    std::string name = header[i];
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (name == "value") value_col = i;
    else if (name == "weight") weight_col = i;
    else if (name == "censored") censored_col = i;
    else throw parse_error("dataset: unknown column '" + header[i] + "'");
  }
  if (value_col < 0) throw parse_error("dataset: header must contain a 'value' column");

  std::vector<double> obs, obs_w, cens, cens_w;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != static_cast<int>(header.size())) {
      throw parse_error("dataset: wrong field count on line " +
                        std::to_string(line_no));
    }
    const double value = parse_double(fields[value_col], line_no);
    const double weight =
        weight_col >= 0 ? parse_double(fields[weight_col], line_no) : 1.0;
    bool censored = false;
    if (censored_col >= 0) {
      const std::string& flag = fields[censored_col];
      if (flag == "1") censored = true;
      else if (flag != "0") {
        throw parse_error("dataset: censored flag must be 0 or 1 on line " +
                          std::to_string(line_no));
      }
    }
    if (censored) {
      cens.push_back(value);
      cens_w.push_back(weight);
    } else {
      obs.push_back(value);
      obs_w.push_back(weight);
    }
  }

  auto to_vec = [](const std::vector<double>& v) {
    if (v.empty()) return Vector();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()))
        .eval();
  };
  try {
    return Sample(to_vec(obs), to_vec(obs_w), to_vec(cens), to_vec(cens_w));
  } catch (const validation_error& e) {
    throw parse_error(std::string("dataset: ") + e.what());
  }
}

void write_variates_csv(const std::string& path,
                        const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open for writing: " + path);
  out << "value\n";
  for (double v : values) out << fmt17(v) << "\n";
}

void write_weighted_csv(const std::string& path,
                        const std::vector<std::pair<double, double>>& rows) {
  std::ofstream out(path);
  if (!out) throw parse_error("cannot open for writing: " + path);
  out << "value,weight\n";
  for (const auto& [value, weight] : rows) {
    out << fmt17(value) << "," << fmt17(weight) << "\n";
  }
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

}  // namespace

std::vector<std::pair<double, double>> discretize(const DiscretizeSpec& spec) {
  if (!(spec.grid_step > 0.0) || !(spec.grid_end >= spec.grid_start)) {
    throw validation_error("discretize: need grid_step > 0 and grid_end >= grid_start");
  }
  if (!(spec.upper > spec.lower)) {
    throw validation_error("discretize: need upper > lower");
  }

  double normalizer = 1.0;
  if (spec.density == NamedDensity::truncnorm) {
    if (!(spec.sigma > 0.0)) throw validation_error("discretize: sigma must be > 0");
    const double lo = std::isfinite(spec.lower)
                          ? normal_cdf((spec.lower - spec.mu) / spec.sigma)
                          : 0.0;
    const double hi = std::isfinite(spec.upper)
                          ? normal_cdf((spec.upper - spec.mu) / spec.sigma)
                          : 1.0;
    normalizer = hi - lo;
    if (!(normalizer > 0.0)) {
      throw validation_error("discretize: truncation interval carries no mass");
    }
  }

  std::vector<std::pair<double, double>> rows;
  const long count = static_cast<long>(std::floor(
                         (spec.grid_end - spec.grid_start) / spec.grid_step +
                         1e-9)) +
                     1;
  for (long i = 0; i < count; ++i) {
    const double x = spec.grid_start + static_cast<double>(i) * spec.grid_step;
    double density = 0.0;
    if (x >= spec.lower && x <= spec.upper) {
      switch (spec.density) {
        case NamedDensity::truncnorm:
          density = normal_pdf((x - spec.mu) / spec.sigma) /
                    (spec.sigma * normalizer);
          break;
        case NamedDensity::uniform:
          density = 1.0 / (spec.upper - spec.lower);
          break;
      }
    }
    rows.emplace_back(x, spec.grid_step * density);
  }
  return rows;
}

}  // namespace phasefit
