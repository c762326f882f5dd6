#pragma once

#include "ksvrg/data.hpp"
#include "ksvrg/harness.hpp"
#include "ksvrg/objective.hpp"
#include "ksvrg/optim.hpp"
#include "ksvrg/rng.hpp"
#include "ksvrg/snapshots.hpp"
#include "ksvrg/text.hpp"
#include "ksvrg/theory.hpp"
#include "ksvrg/trace.hpp"
