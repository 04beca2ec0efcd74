#pragma once

namespace chromaforge {

/// Worker count for OpenMP kernels. Taken from set_thread_count() if called with n > 0,
/// otherwise from CHROMAFORGE_THREADS (0 or unset = OpenMP default).
int thread_count();
void set_thread_count(int n);

}  // namespace chromaforge
