#include "reglaw/parallel.hpp"

namespace reglaw {

int& default_workers() {
    static int workers = 1;
    return workers;
}

} // namespace reglaw
