// SPDX-License-Identifier: Apache-2.0
#include "tdfsi/parallel.hpp"

#ifdef TDFSI_HAVE_OPENMP
#include <omp.h>
#endif

namespace tdfsi
{

namespace
{
#ifdef TDFSI_HAVE_OPENMP
const int default_threads = omp_get_max_threads();
#endif
}  // namespace

void set_max_threads(int n)
{
#ifdef TDFSI_HAVE_OPENMP
  omp_set_num_threads(n > 0 ? n : default_threads);
#else
  (void)n;
#endif
}

int max_threads()
{
#ifdef TDFSI_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool have_openmp()
{
#ifdef TDFSI_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace tdfsi
