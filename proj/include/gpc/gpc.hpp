// SPDX-License-Identifier: Apache-2.0
#pragma once

// Umbrella header for the glyph perturbation cardinality library.

#include "gpc/atlas.hpp"
#include "gpc/channel.hpp"
#include "gpc/codec.hpp"
#include "gpc/container.hpp"
#include "gpc/errors.hpp"
#include "gpc/image.hpp"
#include "gpc/media_io.hpp"
#include "gpc/metrics.hpp"
#include "gpc/pipeline.hpp"
#include "gpc/png.hpp"
#include "gpc/sha256.hpp"
#include "gpc/truetype.hpp"
