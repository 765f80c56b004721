#pragma once

// Internal: exception-safe OpenMP loop. The exception from the lowest failing
// index is rethrown so error reporting does not depend on scheduling.

#include <cstdint>
#include <exception>
#include <limits>

namespace rpkit::detail {

template <class Body>
void parallel_for(std::int64_t count, Body&& body)
{
    std::exception_ptr error;
    std::int64_t error_index = std::numeric_limits<std::int64_t>::max();
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(rpkit_parallel_for_error)
            {
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
            }
        }
    }
    if (error)
        std::rethrow_exception(error);
}

template <class Body>
void serial_for(std::int64_t count, Body&& body)
{
    for (std::int64_t i = 0; i < count; ++i)
        body(i);
}

} // namespace rpkit::detail
