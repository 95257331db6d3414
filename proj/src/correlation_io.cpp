#include "belldim/correlation_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace belldim {

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<int> int_array(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const auto& node = doc.at(key);
  if (!node.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  std::vector<int> out;
  for (const auto& v : node) {
    if (!v.is_number_integer()) throw ParseError(std::string("non-integer entry in '") + key + "'");
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace

Correlation read_correlation(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid correlation document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("correlation document must be an object");
  if (!doc.contains("parties")) throw ParseError("missing field 'parties'");

  Correlation c;
  int parties = doc.at("parties").get<int>();
  c.settings = int_array(doc, "settings");
  c.outcomes = int_array(doc, "outcomes");
  if (static_cast<int>(c.settings.size()) != parties ||
      static_cast<int>(c.outcomes.size()) != parties)
    throw ParseError("settings/outcomes length does not match 'parties'");
  if (parties < 2) throw ParseError("'parties' must be at least 2");
  for (std::size_t i = 0; i < c.settings.size(); ++i) {
    if (c.settings[i] < 1 || c.outcomes[i] < 1)
      throw ParseError("setting and outcome counts must be >= 1");
  }

  if (!doc.contains("values")) throw ParseError("missing field 'values'");
  const auto& vals = doc.at("values");
  if (!vals.is_array()) throw ParseError("field 'values' must be an array");
  c.values.reserve(vals.size());
  for (const auto& v : vals) {
    if (!v.is_number()) throw ParseError("non-numeric entry in 'values'");
    c.values.push_back(v.get<double>());
  }

  if (c.values.size() != c.setting_blocks() * c.outcome_block())
    throw ParseError("values length " + std::to_string(c.values.size()) +
                     " does not match declared shape " +
                     std::to_string(c.setting_blocks() * c.outcome_block()));
  return c;
}

Correlation read_correlation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_correlation(in);
}

void write_correlation(const Correlation& c, std::ostream& out) {
  out << "{\n";
  out << "  \"parties\": " << c.parties() << ",\n";
  auto ints = [&out](const std::vector<int>& v) {
    out << "[";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
    out << "]";
  };
  out << "  \"settings\": ";
  ints(c.settings);
  out << ",\n  \"outcomes\": ";
  ints(c.outcomes);
  out << ",\n  \"values\": [";
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    if (i) out << ",";
    if (i % 8 == 0) out << "\n    ";
    else out << " ";
    out << format_value(c.values[i]);
  }
  out << "\n  ]\n}\n";
}

void write_correlation(const Correlation& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  write_correlation(c, out);
  if (!out) throw ParseError("write to " + path.string() + " failed");
}

}  // namespace belldim
