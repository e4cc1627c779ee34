#include <cstdio>

int main() {
  std::puts("glmc: placeholder");
  return 0;
}
