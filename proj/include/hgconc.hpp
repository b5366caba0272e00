#pragma once

#include "hgconc/error.hpp"
#include "hgconc/rng.hpp"
#include "hgconc/core.hpp"
#include "hgconc/generators.hpp"
#include "hgconc/oracle.hpp"
#include "hgconc/percolation.hpp"
#include "hgconc/bounds.hpp"
#include "hgconc/stats.hpp"
#include "hgconc/parallel.hpp"
#include "hgconc/montecarlo.hpp"
#include "hgconc/extensions.hpp"
#include "hgconc/hgr.hpp"
#include "hgconc/record.hpp"
