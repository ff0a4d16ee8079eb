#pragma once

// Umbrella header for the surrogate toolkit.

#include "surrokit/activation.hpp"
#include "surrokit/datagen.hpp"
#include "surrokit/dataset.hpp"
#include "surrokit/error.hpp"
#include "surrokit/kernels.hpp"
#include "surrokit/matrix.hpp"
#include "surrokit/mlp.hpp"
#include "surrokit/normspec.hpp"
#include "surrokit/rng.hpp"
#include "surrokit/surrogate.hpp"
#include "surrokit/text_io.hpp"
#include "surrokit/trainer.hpp"
