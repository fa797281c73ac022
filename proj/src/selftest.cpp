#include "helm/selftest.hpp"
