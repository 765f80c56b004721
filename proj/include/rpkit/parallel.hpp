#pragma once

namespace rpkit {

/// Threads used by the OpenMP kernels; n <= 0 restores the runtime default.
/// Results never depend on this value.
void set_num_threads(int n);
int num_threads();

/// True when the library was built with OpenMP.
bool openmp_enabled();

} // namespace rpkit
