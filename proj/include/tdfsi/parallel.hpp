// SPDX-License-Identifier: Apache-2.0
#ifndef TDFSI_PARALLEL_HPP
#define TDFSI_PARALLEL_HPP

namespace tdfsi
{

// Caps the worker pool used by assembly loops; n <= 0 restores the default.
void set_max_threads(int n);
int max_threads();
bool have_openmp();

}  // namespace tdfsi

#endif  // TDFSI_PARALLEL_HPP
