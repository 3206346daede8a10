#pragma once

#include "orderstat/ambiguity.hpp"
#include "orderstat/asymptotics.hpp"
#include "orderstat/estimator.hpp"
#include "orderstat/field.hpp"
#include "orderstat/harness.hpp"
#include "orderstat/parallel.hpp"
#include "orderstat/rng.hpp"
#include "orderstat/sampling.hpp"
