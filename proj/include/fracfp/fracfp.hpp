#pragma once

// Umbrella header for the fracfp library.

#include "fracfp/config.hpp"
#include "fracfp/fem1d.hpp"
#include "fracfp/fracops.hpp"
#include "fracfp/io.hpp"
#include "fracfp/meshing.hpp"
#include "fracfp/models.hpp"
#include "fracfp/stepper.hpp"
#include "fracfp/verify.hpp"
