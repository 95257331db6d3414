#pragma once

#include <string>

#include "belldim/bounds.hpp"
#include "belldim/correlation.hpp"

namespace belldim {

/// "inf" for infinite bounds, full-precision decimal otherwise.
std::string format_bound(double value);

std::string ordering_name(OrderingStrategy s);

std::string bound_report_json(const BoundReport& r);
std::string bound_report_text(const BoundReport& r);

std::string validation_report_json(const ValidationReport& r);
std::string validation_report_text(const ValidationReport& r);

}  // namespace belldim
