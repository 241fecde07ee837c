#pragma once

#include <string>

#include "smi/types.hpp"

namespace smi {

// Text format: header "rows cols", then one row per line of interleaved
// "re im" pairs printed with 17 significant digits (lossless for doubles).
void save_complex_matrix(const std::string& path, const CMatrix& m);
CMatrix load_complex_matrix(const std::string& path);

}  // namespace smi
