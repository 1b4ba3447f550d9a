#pragma once

#include "bluefmcw/analysis.hpp"
#include "bluefmcw/config.hpp"
#include "bluefmcw/dsp.hpp"
#include "bluefmcw/errors.hpp"
#include "bluefmcw/fft.hpp"
#include "bluefmcw/harness.hpp"
#include "bluefmcw/presets.hpp"
#include "bluefmcw/rng.hpp"
#include "bluefmcw/scene.hpp"
#include "bluefmcw/waveform.hpp"
