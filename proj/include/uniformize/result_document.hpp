#pragma once

#include <string>

#include "uniformize/pipeline.hpp"

namespace uniformize {

/// Serialize the pipeline result: stable key order, floats at 17 significant
/// digits, deterministic bytes for identical inputs.
std::string result_to_json(const PipelineResult& result);

void write_result_json(const PipelineResult& result, const std::string& path);

/// Side-by-side SVG: source domain with both level-curve families on the
/// left, target annulus with its shell tiling on the right.
std::string result_to_svg(const PipelineResult& result);

void write_result_svg(const PipelineResult& result, const std::string& path);

}  // namespace uniformize
