#include <cstdio>
int main() { std::puts("[stub] acceptance pending calibration"); return 0; }
