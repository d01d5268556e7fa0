#pragma once

#include "gabor/signal.hpp"
#include "gabor/transforms.hpp"
#include "gabor/rng.hpp"
#include "gabor/channel.hpp"
#include "gabor/basis_pursuit.hpp"
#include "gabor/recovery.hpp"
#include "gabor/probbounds.hpp"
#include "gabor/json_io.hpp"
#include "gabor/experiments.hpp"
