#include "helm/report.hpp"
