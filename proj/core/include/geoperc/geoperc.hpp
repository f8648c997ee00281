#pragma once

#include "geoperc/boolean_model.hpp"
#include "geoperc/errors.hpp"
#include "geoperc/estimators.hpp"
#include "geoperc/fields.hpp"
#include "geoperc/geometry.hpp"
#include "geoperc/model.hpp"
#include "geoperc/radial_distribution.hpp"
#include "geoperc/rng.hpp"
#include "geoperc/sampling.hpp"
#include "geoperc/spatial_index.hpp"
#include "geoperc/threshold.hpp"
#include "geoperc/version.hpp"
