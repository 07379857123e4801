#pragma once

#include "hwaug/augment.hpp"
#include "hwaug/idxio.hpp"
#include "hwaug/pipeline.hpp"
#include "hwaug/pixelgrid.hpp"
#include "hwaug/render.hpp"
