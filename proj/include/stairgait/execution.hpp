#pragma once

namespace stairgait {

/// Selects the OpenMP kernel or its serial reference. Both produce
/// bit-identical results.
enum class Execution { Serial, Parallel };

}  // namespace stairgait
