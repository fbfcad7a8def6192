#pragma once

#include "tpcurve/beta.hpp"
#include "tpcurve/energy.hpp"
#include "tpcurve/flow.hpp"
#include "tpcurve/hausdorff.hpp"
#include "tpcurve/io.hpp"
#include "tpcurve/knot.hpp"
#include "tpcurve/menger.hpp"
#include "tpcurve/primitives.hpp"
#include "tpcurve/regularity.hpp"
#include "tpcurve/resample.hpp"
#include "tpcurve/shapes.hpp"
#include "tpcurve/svg.hpp"
#include "tpcurve/types.hpp"
