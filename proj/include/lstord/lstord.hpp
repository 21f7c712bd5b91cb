#pragma once

#include "lstord/data.hpp"
#include "lstord/empirical.hpp"
#include "lstord/error.hpp"
#include "lstord/estimator.hpp"
#include "lstord/geometry.hpp"
#include "lstord/inference.hpp"
#include "lstord/io.hpp"
#include "lstord/nelder_mead.hpp"
#include "lstord/oracle.hpp"
#include "lstord/rng.hpp"
#include "lstord/simgen.hpp"

namespace lstord {

#ifdef LSTORD_VERSION
inline constexpr const char* version = LSTORD_VERSION;
#else
inline constexpr const char* version = "0.1.0";
#endif

}  // namespace lstord
