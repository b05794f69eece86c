#include "sparsevar/model_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sparsevar/error.hpp"

namespace sparsevar {
namespace {

using nlohmann::json;

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Matrix matrix_from(const json& j, const char* what) {
  if (!j.is_array()) throw Error(std::string("model JSON: '") + what + "' must be an array of rows");
  const auto rows = static_cast<Index>(j.size());
  const Index cols = rows > 0 ? static_cast<Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw Error(std::string("model JSON: '") + what + "' rows have unequal length");
    }
    for (Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Vector vector_from(const json& j, const char* what) {
  if (!j.is_array()) throw Error(std::string("model JSON: '") + what + "' must be an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = j[i].get<double>();
  return v;
}

}  // namespace

std::string model_to_json(const VarModel& model, int indent) {
  json j;
  j["p"] = model.p;
  j["names"] = model.names;
  j["A"] = matrix_json(model.A);
  j["sigma_u"] = matrix_json(model.sigma_u);
  j["rho"] = model.rho ? vector_json(*model.rho) : json(nullptr);
  j["stats"] = {{"means", vector_json(model.stats.means)}, {"sds", vector_json(model.stats.sds)}};
  j["solver"] = {{"estimator", model.solver.estimator},
                 {"lambda", model.solver.lambda},
                 {"sweeps", model.solver.sweeps},
                 {"converged", model.solver.converged}};
  return j.dump(indent) + "\n";
}

VarModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("model JSON: ") + e.what());
  }
  try {
    VarModel m;
    m.p = j.at("p").get<int>();
    m.names = j.at("names").get<std::vector<std::string>>();
    m.A = matrix_from(j.at("A"), "A");
    if (m.A.rows() == 0) throw Error("model JSON: empty A");
    m.sigma_u = j.contains("sigma_u") ? matrix_from(j.at("sigma_u"), "sigma_u") : Matrix::Zero(m.A.rows(), m.A.rows());
    if (j.contains("rho") && !j.at("rho").is_null()) m.rho = vector_from(j.at("rho"), "rho");
    if (j.contains("stats")) {
      m.stats.means = vector_from(j.at("stats").at("means"), "stats.means");
      m.stats.sds = vector_from(j.at("stats").at("sds"), "stats.sds");
    } else {
      m.stats = StandardizationStats::identity(m.A.rows());
    }
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      m.solver.estimator = s.value("estimator", std::string("lasso"));
      m.solver.lambda = s.value("lambda", 0.0);
      m.solver.sweeps = s.value("sweeps", 0);
      m.solver.converged = s.value("converged", true);
    }
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("model JSON: ") + e.what());
  }
}

void write_model(const std::filesystem::path& path, const VarModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << model_to_json(model);
}

VarModel read_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace sparsevar
