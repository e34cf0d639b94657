#pragma once

#include "bioeco/bifurcation.hpp"
#include "bioeco/check.hpp"
#include "bioeco/cli.hpp"
#include "bioeco/equilibria.hpp"
#include "bioeco/errors.hpp"
#include "bioeco/finite_difference.hpp"
#include "bioeco/harvest.hpp"
#include "bioeco/io.hpp"
#include "bioeco/model.hpp"
#include "bioeco/simulate.hpp"
