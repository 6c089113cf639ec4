#include "qtensor/io.hpp"

namespace qtensor {}
