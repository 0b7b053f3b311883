#include "qsvm/format.hpp"

#include <cstdio>

namespace qsvm {

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

} // namespace qsvm
