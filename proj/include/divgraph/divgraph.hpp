#pragma once

#include "divgraph/arith.hpp"
#include "divgraph/constructors.hpp"
#include "divgraph/corridor.hpp"
#include "divgraph/graph_model.hpp"
#include "divgraph/number_core.hpp"
#include "divgraph/oracle.hpp"
#include "divgraph/ss_sets.hpp"
