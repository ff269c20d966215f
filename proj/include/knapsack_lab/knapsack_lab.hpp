#pragma once

#include "knapsack_lab/attack.hpp"
#include "knapsack_lab/bigint.hpp"
#include "knapsack_lab/errors.hpp"
#include "knapsack_lab/formats.hpp"
#include "knapsack_lab/game.hpp"
#include "knapsack_lab/modified.hpp"
#include "knapsack_lab/numtheory.hpp"
#include "knapsack_lab/original.hpp"
#include "knapsack_lab/random.hpp"
