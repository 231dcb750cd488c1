#pragma once

#include "cartprod/common.hpp"
#include "cartprod/graph.hpp"
#include "cartprod/function_table.hpp"
#include "cartprod/spectral.hpp"
#include "cartprod/analysis.hpp"
#include "cartprod/isoperimetry.hpp"
#include "cartprod/kkl.hpp"
#include "cartprod/tightness.hpp"
#include "cartprod/sdp.hpp"
#include "cartprod/io.hpp"
