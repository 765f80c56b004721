#include "rpkit/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rpkit {

#ifdef _OPENMP
static const int default_threads = omp_get_max_threads();
#endif

void set_num_threads(int n)
{
#ifdef _OPENMP
    omp_set_num_threads(n > 0 ? n : default_threads);
#else
    (void)n;
#endif
}

int num_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

bool openmp_enabled()
{
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

} // namespace rpkit
