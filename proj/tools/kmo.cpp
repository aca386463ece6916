#include <cstdio>

int main() {
  std::puts("kmo: placeholder");
  return 0;
}
