#pragma once

#include "harq/allocator.hpp"
#include "harq/outage.hpp"
#include "harq/psi.hpp"
#include "harq/quadrature.hpp"
#include "harq/rng.hpp"
#include "harq/simulator.hpp"
#include "harq/types.hpp"
#include "harq/verifier.hpp"
