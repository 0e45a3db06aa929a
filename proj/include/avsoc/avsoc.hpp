// avsoc.hpp : convenience umbrella for the whole library.
#pragma once

#include "avsoc/actors.hpp"
#include "avsoc/experiments.hpp"
#include "avsoc/fear.hpp"
#include "avsoc/fuzzy.hpp"
#include "avsoc/io.hpp"
#include "avsoc/norms.hpp"
#include "avsoc/rng.hpp"
#include "avsoc/society.hpp"
