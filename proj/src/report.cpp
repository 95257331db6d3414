#include "belldim/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace belldim {

namespace {

std::string decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string format_bound(double value) {
  return std::isinf(value) ? "inf" : decimal(value);
}

std::string ordering_name(OrderingStrategy s) {
  switch (s) {
    case OrderingStrategy::kFixed: return "fixed";
    case OrderingStrategy::kExhaustiveGlobal: return "global";
    case OrderingStrategy::kExhaustivePerTerm: return "per-term";
  }
  return "?";
}

std::string bound_report_json(const BoundReport& r) {
  nlohmann::json doc;
  doc["target_party"] = r.target_party;
  doc["grouped"] = r.grouped;
  if (r.infinite()) {
    doc["bound"] = "inf";
    doc["rounded"] = "inf";
  } else {
    doc["bound"] = r.bound;
    doc["rounded"] = static_cast<long>(r.rounded());
  }
  doc["denominator"] = r.denominator;
  doc["argmin"] = {r.argmin_x, r.argmin_x_prime};
  doc["ordering_strategy"] = ordering_name(r.strategy);
  doc["orderings"] = r.orderings;
  nlohmann::json table = nlohmann::json::array();
  for (int a = 0; a < r.alice_outcomes; ++a) {
    nlohmann::json row = nlohmann::json::array();
    for (int ap = 0; ap < r.alice_outcomes; ++ap)
      row.push_back(r.ams_terms[a * r.alice_outcomes + ap]);
    table.push_back(row);
  }
  doc["ams_terms"] = table;
  return doc.dump(2) + "\n";
}

std::string bound_report_text(const BoundReport& r) {
  std::ostringstream out;
  out << (r.grouped ? "grouped dimension bound" : "dimension bound")
      << " for party " << r.target_party << "\n";
  out << "  exact:        " << format_bound(r.bound) << "\n";
  out << "  rounded:      " << (r.infinite() ? "inf" : decimal(r.rounded())) << "\n";
  out << "  denominator:  " << decimal(r.denominator) << "\n";
  out << "  argmin (x,x'): (" << r.argmin_x << ", " << r.argmin_x_prime << ")\n";
  out << "  ordering:     " << ordering_name(r.strategy);
  if (r.orderings.size() == 1) {
    out << " [";
    for (std::size_t i = 0; i < r.orderings[0].size(); ++i)
      out << (i ? "," : "") << r.orderings[0][i];
    out << "]";
  }
  out << "\n";
  out << "  ams terms (rows a, cols a') at argmin:\n";
  for (int a = 0; a < r.alice_outcomes; ++a) {
    out << "   ";
    for (int ap = 0; ap < r.alice_outcomes; ++ap) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), " %12.9f", r.ams_terms[a * r.alice_outcomes + ap]);
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

std::string validation_report_json(const ValidationReport& r) {
  nlohmann::json doc;
  doc["ok"] = r.ok;
  doc["worst_normalization"] = r.worst_normalization;
  doc["clamped_entries"] = r.clamped_entries;
  doc["negative_entries"] = r.negative_entries;
  if (r.worst_no_signalling) doc["worst_no_signalling"] = *r.worst_no_signalling;
  return doc.dump(2) + "\n";
}

std::string validation_report_text(const ValidationReport& r) {
  std::ostringstream out;
  out << "validation: " << (r.ok ? "ok" : "FAILED") << "\n";
  out << "  worst normalization deviation: " << decimal(r.worst_normalization) << "\n";
  out << "  clamped entries:               " << r.clamped_entries << "\n";
  out << "  negative entries:              " << r.negative_entries << "\n";
  if (r.worst_no_signalling)
    out << "  worst no-signalling deviation: " << decimal(*r.worst_no_signalling) << "\n";
  return out.str();
}

}  // namespace belldim
