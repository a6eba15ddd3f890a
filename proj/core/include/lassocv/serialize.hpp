#pragma once

#include <string>

#include "lassocv/cv.hpp"
#include "lassocv/design.hpp"
#include "lassocv/lasso_path.hpp"

namespace lassocv {

/// Shortest round-trip decimal form of a double; '.' separator, no locale.
std::string format_double(double value);

// Wire formats. Datasets: {"n","p","rows","response","theta","sigma","seed"}.
// Paths: {"knots","segments":[{"lo","hi","active","signs","a","b"}]} with
// 0-based column indices.

std::string dataset_to_json(const Dataset& data);
Dataset dataset_from_json(const std::string& text);

std::string path_to_json(const LassoPath& path);
LassoPath path_from_json(const std::string& text);

std::string cv_summary_json(const CvCurve& curve);

}  // namespace lassocv
