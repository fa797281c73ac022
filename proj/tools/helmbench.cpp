#include "helm/core.hpp"
int main() { return 0; }
