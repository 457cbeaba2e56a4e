#pragma once

namespace bstar {

// Selects between the OpenMP kernels and the plain loops they were derived
// from. The serial variants stay in the library as a reference for tests and
// the benchmark; production callers use the default.
enum class Exec { serial, parallel };

}  // namespace bstar
