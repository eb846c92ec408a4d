#pragma once

#include "slitscat/array_scattering.hpp"
#include "slitscat/effective_medium.hpp"
#include "slitscat/errors.hpp"
#include "slitscat/modal_kernel.hpp"
#include "slitscat/model_types.hpp"
#include "slitscat/single_scattering.hpp"
#include "slitscat/special_functions.hpp"
#include "slitscat/spectra.hpp"
#include "slitscat/spectrum.hpp"
