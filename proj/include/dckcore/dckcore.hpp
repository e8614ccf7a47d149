#pragma once

#include "dckcore/distsim.hpp"
#include "dckcore/divide.hpp"
#include "dckcore/graph.hpp"
#include "dckcore/hindex.hpp"
#include "dckcore/metrics.hpp"
#include "dckcore/oracle.hpp"
#include "dckcore/types.hpp"
