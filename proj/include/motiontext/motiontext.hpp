#pragma once

#include "motiontext/error.hpp"
#include "motiontext/motion.hpp"
#include "motiontext/motion_io.hpp"
#include "motiontext/posecode.hpp"
#include "motiontext/motioncode.hpp"
#include "motiontext/rng.hpp"
#include "motiontext/bank.hpp"
#include "motiontext/captioner.hpp"
#include "motiontext/stats.hpp"
#include "motiontext/config_io.hpp"
#include "motiontext/batch.hpp"
