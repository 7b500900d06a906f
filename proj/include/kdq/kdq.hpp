#pragma once

// Umbrella header for the whole toolkit.

#include "kdq/classical.hpp"
#include "kdq/cond_expect.hpp"
#include "kdq/density.hpp"
#include "kdq/errors.hpp"
#include "kdq/frame.hpp"
#include "kdq/matrix.hpp"
#include "kdq/matrix_io.hpp"
#include "kdq/quasiprob.hpp"
#include "kdq/rng.hpp"
#include "kdq/spectral.hpp"
#include "kdq/verify.hpp"
