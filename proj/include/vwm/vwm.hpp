#pragma once

#include "vwm/arnold.hpp"
#include "vwm/attacks.hpp"
#include "vwm/block_select.hpp"
#include "vwm/codec.hpp"
#include "vwm/color.hpp"
#include "vwm/corpus.hpp"
#include "vwm/evaluation.hpp"
#include "vwm/geometry.hpp"
#include "vwm/image.hpp"
#include "vwm/keypoints.hpp"
#include "vwm/metrics.hpp"
#include "vwm/payload.hpp"
#include "vwm/transforms.hpp"
#include "vwm/y4m.hpp"
