#pragma once

#include "growthlab/entire_function.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/experiments.hpp"
#include "growthlab/growth.hpp"
#include "growthlab/hille.hpp"
#include "growthlab/hypotheses.hpp"
#include "growthlab/lemmas.hpp"
#include "growthlab/log_complex.hpp"
#include "growthlab/numerics.hpp"
#include "growthlab/ode.hpp"
#include "growthlab/parse.hpp"
