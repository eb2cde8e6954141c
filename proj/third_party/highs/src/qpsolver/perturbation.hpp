#ifndef __SRC_LIB_PERTURBATION_HPP__
#define __SRC_LIB_PERTURBATION_HPP__

#include "runtime.hpp"

void perturb(Runtime& rt);

#endif
