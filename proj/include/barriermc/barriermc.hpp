#pragma once

// Monte-Carlo pricing of single- and double-barrier options under diffusion
// and stochastic-volatility models, by path-wise Euler-Maruyama and by the
// barrier-symmetrization (put-call symmetry) estimator.

#include "analytic.hpp"
#include "config.hpp"
#include "contracts.hpp"
#include "engine.hpp"
#include "harness.hpp"
#include "models.hpp"
#include "normal.hpp"
#include "pricing.hpp"
#include "rng.hpp"
#include "symmetry.hpp"
#include "verify.hpp"
