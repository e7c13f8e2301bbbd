#pragma once

#include <string>

namespace bellwalk {

// Full round-trip float formatting (17 significant digits) used by every
// serialized numeric column, so identical configs give byte-identical files.
std::string fmt17(double v);

// RFC-4180 field quoting (only strings that need it get quoted; the numeric
// columns never do).
std::string csv_field(const std::string& raw);

}  // namespace bellwalk
