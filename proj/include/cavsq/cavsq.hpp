#pragma once

#include "cavsq/analytic_models.hpp"
#include "cavsq/cavity_field.hpp"
#include "cavsq/collective_spin.hpp"
#include "cavsq/dynamics.hpp"
#include "cavsq/errors.hpp"
#include "cavsq/optimize.hpp"
#include "cavsq/optimize_core.hpp"
#include "cavsq/phase_band.hpp"
