#pragma once

namespace kyle {

/// Selects between the OpenMP kernels and their serial reference versions.
/// Both produce bit-identical results; the serial path exists for testing and
/// benchmarking.
enum class Execution { serial, parallel };

/// Number of OpenMP threads available to parallel kernels (1 without OpenMP).
int available_threads();

} // namespace kyle
