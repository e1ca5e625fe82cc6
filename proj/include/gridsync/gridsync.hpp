#pragma once

#include "gridsync/clock.hpp"
#include "gridsync/dispatch.hpp"
#include "gridsync/plant.hpp"
#include "gridsync/rng.hpp"
#include "gridsync/scenario.hpp"
#include "gridsync/sensing.hpp"
#include "gridsync/switchgear.hpp"
#include "gridsync/synchronizer.hpp"
#include "gridsync/trace.hpp"
