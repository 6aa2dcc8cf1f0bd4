#pragma once

#include "gapamp/collision.hpp"
#include "gapamp/compose.hpp"
#include "gapamp/heavy.hpp"
#include "gapamp/instance.hpp"
#include "gapamp/instance_io.hpp"
#include "gapamp/random.hpp"
#include "gapamp/scheme.hpp"
#include "gapamp/search.hpp"
#include "gapamp/solver.hpp"
#include "gapamp/tree.hpp"
