#pragma once

#include "monomorse/errors.hpp"
#include "monomorse/mathcore.hpp"
#include "monomorse/quadrature.hpp"
#include "monomorse/wavelets.hpp"
#include "monomorse/grid.hpp"
#include "monomorse/fft.hpp"
#include "monomorse/parallel.hpp"
#include "monomorse/transform.hpp"
#include "monomorse/estimators.hpp"
#include "monomorse/validator.hpp"
#include "monomorse/synth.hpp"
#include "monomorse/io.hpp"
