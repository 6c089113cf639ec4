#pragma once

namespace qtensor {

inline constexpr const char* version_string = "0.3.0";

}
