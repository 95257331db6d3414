#include "belldim/scenario_io.hpp"

#include <fstream>

#include <json.hpp>

#include "belldim/correlation_io.hpp"

namespace belldim {

namespace {

using nlohmann::json;

Eigen::MatrixXd real_matrix(const json& node, const char* what) {
  if (!node.is_array() || node.empty() || !node[0].is_array())
    throw ParseError(std::string(what) + " must be a 2D array");
  long rows = static_cast<long>(node.size());
  long cols = static_cast<long>(node[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (long i = 0; i < rows; ++i) {
    const auto& row = node[i];
    if (!row.is_array() || static_cast<long>(row.size()) != cols)
      throw ParseError(std::string(what) + " rows have inconsistent lengths");
    for (long j = 0; j < cols; ++j) {
      if (!row[j].is_number()) throw ParseError(std::string(what) + " has a non-numeric entry");
      m(i, j) = row[j].get<double>();
    }
  }
  return m;
}

CMat complex_matrix(const json& node, const char* what) {
  if (!node.is_object() || !node.contains("real"))
    throw ParseError(std::string(what) + " needs a 'real' part");
  Eigen::MatrixXd re = real_matrix(node.at("real"), what);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
  if (node.contains("imag")) {
    im = real_matrix(node.at("imag"), what);
    if (im.rows() != re.rows() || im.cols() != re.cols())
      throw ParseError(std::string(what) + " real/imag shapes differ");
  }
  return re.cast<Cx>() + Cx(0.0, 1.0) * im.cast<Cx>();
}

CVec complex_vector(const json& node, const char* what) {
  if (!node.is_object() || !node.contains("real"))
    throw ParseError(std::string(what) + " needs a 'real' part");
  const auto& re_node = node.at("real");
  if (!re_node.is_array()) throw ParseError(std::string(what) + " 'real' must be an array");
  long n = static_cast<long>(re_node.size());
  CVec v(n);
  for (long i = 0; i < n; ++i) v(i) = re_node[i].get<double>();
  if (node.contains("imag")) {
    const auto& im_node = node.at("imag");
    if (!im_node.is_array() || static_cast<long>(im_node.size()) != n)
      throw ParseError(std::string(what) + " real/imag lengths differ");
    for (long i = 0; i < n; ++i) v(i) += Cx(0.0, 1.0) * im_node[i].get<double>();
  }
  return v;
}

State parse_state(const json& node, const std::vector<int>& dims) {
  if (!node.is_object()) throw ParseError("'state' must be an object");
  if (node.contains("builtin")) {
    std::string name = node.at("builtin").get<std::string>();
    int d = dims[0];
    for (int dim : dims)
      if (dim != d) throw ParseError("builtin states need equal local dimensions");
    return builtin_state(name, d, static_cast<int>(dims.size()));
  }
  if (node.contains("amplitudes"))
    return make_pure(dims, complex_vector(node.at("amplitudes"), "'amplitudes'"));
  if (node.contains("density"))
    return make_density(dims, complex_matrix(node.at("density"), "'density'"));
  throw ParseError("'state' needs one of 'builtin', 'amplitudes', 'density'");
}

Measurement parse_measurement(const json& node, int dim) {
  if (!node.is_object()) throw ParseError("measurement setting must be an object");
  if (node.contains("basis")) {
    CMat basis = complex_matrix(node.at("basis"), "'basis'");
    if (basis.rows() != dim || basis.cols() != dim)
      throw ParseError("basis shape does not match the party dimension");
    return projective_measurement(std::move(basis));
  }
  if (node.contains("effects")) {
    const auto& list = node.at("effects");
    if (!list.is_array() || list.empty())
      throw ParseError("'effects' must be a nonempty array");
    std::vector<CMat> effects;
    for (const auto& e : list) {
      CMat m = complex_matrix(e, "effect");
      if (m.rows() != dim || m.cols() != dim)
        throw ParseError("effect shape does not match the party dimension");
      effects.push_back(std::move(m));
    }
    return povm_measurement(std::move(effects));
  }
  throw ParseError("measurement setting needs 'basis' or 'effects'");
}

}  // namespace

QuantumScenario read_scenario(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid scenario document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario document must be an object");
  if (!doc.contains("dims")) throw ParseError("missing field 'dims'");

  std::vector<int> dims;
  for (const auto& d : doc.at("dims")) {
    if (!d.is_number_integer() || d.get<int>() < 1)
      throw ParseError("'dims' must hold positive integers");
    dims.push_back(d.get<int>());
  }
  if (dims.empty()) throw ParseError("'dims' must be nonempty");

  if (!doc.contains("state")) throw ParseError("missing field 'state'");
  if (!doc.contains("measurements")) throw ParseError("missing field 'measurements'");

  QuantumScenario s;
  try {
    s.state = parse_state(doc.at("state"), dims);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad state: ") + e.what());
  }

  const auto& parties = doc.at("measurements");
  if (!parties.is_array() || parties.size() != dims.size())
    throw ParseError("'measurements' must hold one list per party");
  for (std::size_t p = 0; p < parties.size(); ++p) {
    const auto& list = parties[p];
    if (!list.is_array() || list.empty())
      throw ParseError("party " + std::to_string(p) + " has no settings");
    MeasurementSet ms;
    ms.dim = dims[p];
    try {
      for (const auto& m : list) ms.settings.push_back(parse_measurement(m, dims[p]));
    } catch (const std::invalid_argument& e) {
      throw ParseError("party " + std::to_string(p) + ": " + e.what());
    }
    s.measurements.push_back(std::move(ms));
  }
  return s;
}

QuantumScenario read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_scenario(in);
}

}  // namespace belldim
