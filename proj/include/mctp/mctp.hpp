#pragma once

#include "mctp/geometry.hpp"
#include "mctp/instance.hpp"
#include "mctp/index_table.hpp"
#include "mctp/solution.hpp"
#include "mctp/dense_lp.hpp"
#include "mctp/relaxation.hpp"
#include "mctp/labeling_engine.hpp"
#include "mctp/labeling_case1.hpp"
#include "mctp/labeling_case2.hpp"
#include "mctp/lagrangian.hpp"
#include "mctp/primal.hpp"
#include "mctp/master.hpp"
#include "mctp/bundle.hpp"
#include "mctp/oracle.hpp"
