#pragma once

#include "gausschan/channel.hpp"
#include "gausschan/dilation.hpp"
#include "gausschan/error.hpp"
#include "gausschan/gaussian_state.hpp"
#include "gausschan/interferometer.hpp"
#include "gausschan/numerics.hpp"
#include "gausschan/seeding.hpp"
#include "gausschan/symplectic.hpp"
