#pragma once

#include <string>

#include "camnet/nilpotent.hpp"

namespace camnet {

/// {"system": code, "coeffs": {"rootIndex": "p/q", ...}} with exact strings.
std::string nil_element_json(const NilElement<Rat>& x, const std::string& code);
NilElement<Rat> nil_element_from_json(const std::string& text);

/// Full structure-constant table of a system, for reproducibility of the
/// sign convention: {"system": code, "constants": {"a,b": N, ...}}.
std::string chevalley_table_json(const std::string& code);

}  // namespace camnet
