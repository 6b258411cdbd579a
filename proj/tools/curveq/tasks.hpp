#pragma once

#include "config.hpp"
#include "report.hpp"

namespace curveq::app {

RunReport run_geometry(const RunConfig& cfg);
RunReport run_spectrum(const RunConfig& cfg);
RunReport run_verify(const RunConfig& cfg);
RunReport run_helix_check(const RunConfig& cfg);

/// Dispatches on cfg.task.
RunReport run_task(const RunConfig& cfg);

}  // namespace curveq::app
