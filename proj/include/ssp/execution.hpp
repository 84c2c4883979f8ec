#pragma once

namespace ssp {

// Selects between the serial reference loop and the OpenMP kernel.
// Both produce bit-identical results: every parallel loop writes to
// disjoint, index-addressed slots and reductions happen serially afterwards.
enum class Execution { serial, parallel };

} // namespace ssp
