#pragma once

#include <filesystem>
#include <iosfwd>

#include "belldim/quantum.hpp"

namespace belldim {

/// Reads a scenario document: local dimensions, a state (named builtin or
/// explicit amplitudes/density with real and imaginary parts), and one
/// measurement list per party (orthonormal basis rows or POVM effects).
QuantumScenario read_scenario(std::istream& in);
QuantumScenario read_scenario(const std::filesystem::path& path);

}  // namespace belldim
