#pragma once

// Umbrella header: the covert-defender planning toolkit.

#include "entrap/attacker.hpp"
#include "entrap/budget.hpp"
#include "entrap/config.hpp"
#include "entrap/defender.hpp"
#include "entrap/domains.hpp"
#include "entrap/errors.hpp"
#include "entrap/io.hpp"
#include "entrap/mdp.hpp"
#include "entrap/rng.hpp"
#include "entrap/sim.hpp"
#include "entrap/solve.hpp"
