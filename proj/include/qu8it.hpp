#pragma once

// Umbrella header for the qu8it library.

#include "qu8it/core.hpp"
#include "qu8it/su3_algebra.hpp"
#include "qu8it/qu8it_mapping.hpp"
#include "qu8it/givens_walsh.hpp"
#include "qu8it/reference_forms.hpp"
#include "qu8it/lattice.hpp"
#include "qu8it/spectrum.hpp"
#include "qu8it/evolution.hpp"
#include "qu8it/resources.hpp"
#include "qu8it/io.hpp"
#include "qu8it/verify.hpp"
