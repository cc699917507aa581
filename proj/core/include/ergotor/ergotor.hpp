#pragma once

#include "ergotor/equidistribution.hpp"
#include "ergotor/ergodic.hpp"
#include "ergotor/errors.hpp"
#include "ergotor/fourier.hpp"
#include "ergotor/frequencies.hpp"
#include "ergotor/montecarlo.hpp"
#include "ergotor/torus.hpp"
#include "ergotor/version.hpp"
