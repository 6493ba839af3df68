#pragma once

#include "hyperspline/bolza.hpp"
#include "hyperspline/disk_models.hpp"
#include "hyperspline/field.hpp"
#include "hyperspline/json_io.hpp"
#include "hyperspline/partition.hpp"
#include "hyperspline/polynomial.hpp"
#include "hyperspline/spline_space.hpp"
#include "hyperspline/svg.hpp"
