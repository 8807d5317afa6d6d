#pragma once

#include <string>

namespace sgbench {

// Round-trip decimal form of a double (17 significant digits, %.17g).
// Every serializer in the project goes through this so emitted files are
// bit-identical across runs and re-ingestion reproduces values exactly.
std::string format_double(double v);

// Fixed-point form for figure coordinates (%.{decimals}f).
std::string format_fixed(double v, int decimals);

}  // namespace sgbench
