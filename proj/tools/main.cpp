#include <cstdio>

#include "qtensor/version.hpp"

int main() {
  std::printf("qtensor %s\n", qtensor::version_string);
  return 0;
}
