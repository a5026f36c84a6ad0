#pragma once

#include <filesystem>
#include <string>

#include "nucrobust/harness/experiment.hpp"

namespace nucrobust::harness {

// Writes summary.csv, one quality_curve_{codec}.svg per codec, one
// kde_{space}.svg per space, one reference_grid_{method}_{space}.svg per
// refset (excluded references hatched) and report.json. Deterministic byte
// output for identical inputs.
void emit_report(const RunOutput& output, const std::filesystem::path& out_dir);

std::string summary_csv(const RunOutput& output);
std::string quality_curve_svg(const RunOutput& output, const std::string& codec);
std::string kde_svg(const SpaceStats& stats);
std::string reference_grid_svg(const RunOutput& output, const RefsetRecord& refset);

} // namespace nucrobust::harness
