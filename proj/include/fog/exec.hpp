#pragma once

namespace fog {

// Execution mode for the state-space kernels. Both modes produce identical
// results; `serial` is the reference implementation, `parallel` runs the
// per-state sweeps under OpenMP.
enum class Exec { serial, parallel };

}  // namespace fog
