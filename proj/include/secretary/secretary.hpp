#pragma once

#include "cutoff.hpp"
#include "dp.hpp"
#include "errors.hpp"
#include "estimate.hpp"
#include "exact.hpp"
#include "lab.hpp"
#include "mc.hpp"
#include "model.hpp"
#include "model_spec.hpp"
#include "report.hpp"
#include "specfun.hpp"
#include "verify.hpp"
