#pragma once

#include "hyperwave/config.hpp"
#include "hyperwave/csv.hpp"
#include "hyperwave/error.hpp"
#include "hyperwave/estimates.hpp"
#include "hyperwave/experiment.hpp"
#include "hyperwave/geometry.hpp"
#include "hyperwave/lorentz.hpp"
#include "hyperwave/parallel.hpp"
#include "hyperwave/params.hpp"
#include "hyperwave/propagator.hpp"
#include "hyperwave/quadrature.hpp"
#include "hyperwave/scattering.hpp"
#include "hyperwave/solver.hpp"
#include "hyperwave/time_grid.hpp"
#include "hyperwave/transform.hpp"
